#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "renorm/renorm.h"

#include <cmath>
#include <numbers>
#include <string>

constexpr double pi = std::numbers::pi;

TEST_CASE("status names and last error") {
    CHECK(std::string(rn_status_name(RN_OK)) == "ok");
    CHECK(std::string(rn_status_name(RN_FIT_DEGENERACY)) != "unknown");
    CHECK(rn_config_create(nullptr) == RN_INVALID_ARGUMENT);
    CHECK(std::string(rn_last_error()).find("null") != std::string::npos);
    double v = 0.0;
    CHECK(rn_hyperbolic_reference(0, &v) != RN_OK);
    CHECK(std::string(rn_last_error()).size() > 0);
}

TEST_CASE("configuration keys") {
    rn_config* c = nullptr;
    REQUIRE(rn_config_create(&c) == RN_OK);
    CHECK(rn_config_set(c, "colour", "red") == RN_INVALID_ARGUMENT);
    CHECK(rn_config_set(c, "n", "three") == RN_PARSE);
    CHECK(rn_config_set(c, "model", "klein-bottle") == RN_INVALID_ARGUMENT);
    CHECK(rn_config_validate(c) == RN_INVALID_ARGUMENT);  // no command yet
    CHECK(rn_config_set(c, "command", "renorm-volume") == RN_OK);
    CHECK(rn_config_set(c, "n", " 3 ") == RN_OK);
    const char* value = nullptr;
    CHECK(rn_config_get(c, "n", &value) == RN_OK);
    CHECK(std::string(value) == " 3 ");
    CHECK(rn_config_get(c, "tol", &value) == RN_OK);
    CHECK(std::string(value).empty());
    CHECK(rn_config_get(c, "colour", &value) == RN_INVALID_ARGUMENT);
    CHECK(rn_config_validate(c) == RN_OK);
    CHECK(rn_config_key_count() > 10);
    CHECK(std::string(rn_config_key(0)) == "command");
    CHECK(rn_config_key(1000) == nullptr);
    rn_config_free(c);
}

TEST_CASE("running a pipeline through the C interface") {
    rn_config* c = nullptr;
    REQUIRE(rn_config_create(&c) == RN_OK);
    rn_config_set(c, "command", "renorm-volume");
    rn_config_set(c, "n", "3");
    rn_report* r = nullptr;
    REQUIRE(rn_run(c, &r) == RN_OK);
    CHECK(rn_report_passed(r));
    bool found = false;
    for (std::size_t i = 0; i < rn_report_row_count(r); ++i) {
        rn_row row{};
        REQUIRE(rn_report_row(r, i, &row) == RN_OK);
        if (std::string(row.quantity) == "V_subtraction") {
            found = true;
            CHECK(row.has_crosscheck);
            CHECK(row.value == doctest::Approx(4.0 / 3.0 * pi * pi).epsilon(1e-8));
            CHECK(row.pass);
        }
    }
    CHECK(found);
    rn_row row{};
    CHECK(rn_report_row(r, 999, &row) == RN_INVALID_ARGUMENT);
    rn_report_free(r);

    // a failing tolerance is reported, not raised
    rn_config_set(c, "tol", "0");
    rn_config_set(c, "n", "5");
    REQUIRE(rn_run(c, &r) == RN_OK);
    CHECK(!rn_report_passed(r));
    rn_report_free(r);

    rn_config_set(c, "command", "identities");
    CHECK(rn_run(c, &r) == RN_DIMENSION_UNSUPPORTED);
    CHECK(r == nullptr);
    rn_config_free(c);
}

TEST_CASE("graphs through the C interface") {
    rn_graph* g = nullptr;
    REQUIRE(rn_graph_totally_geodesic(1, 2, &g) == RN_OK);
    CHECK(rn_graph_dimension(g) == 1);
    double A = 0.0, K = 0.0;
    int has_K = -1;
    REQUIRE(rn_renormalized_area(g, &A, &K, &has_K) == RN_OK);
    CHECK(A == doctest::Approx(-2 * pi).epsilon(1e-8));
    CHECK(has_K == 0);
    CHECK(std::isnan(K));
    rn_graph_free(g);

    const double p[2] = {0.3, 0.2}, q[2] = {1.5, 2.0};
    REQUIRE(rn_graph_geodesic(2, p, q, &g) == RN_OK);
    double anomaly = 0.0, change = 0.0;
    int has_gauge = 0;
    REQUIRE(rn_area_anomaly(g, "0.1*X1", &anomaly, &change, &has_gauge) == RN_OK);
    CHECK(anomaly == doctest::Approx(0.1 * (std::cos(0.3) + std::cos(1.5))).epsilon(1e-12));
    CHECK(has_gauge == 1);
    CHECK(std::abs(change - anomaly) < 1e-5);
    CHECK(rn_area_anomaly(g, "0.1*X1 +", &anomaly, &change, &has_gauge) == RN_PARSE);
    rn_graph_free(g);

    CHECK(rn_graph_geodesic(2, p, p, &g) == RN_DEGENERATE_ENDPOINTS);
    CHECK(g == nullptr);
    CHECK(rn_graph_latitude(pi / 3, nullptr) == RN_INVALID_ARGUMENT);
    CHECK(rn_renormalized_area(nullptr, &A, &K, &has_K) == RN_INVALID_ARGUMENT);
}
