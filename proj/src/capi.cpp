#include "renorm/renorm.h"

#include "renorm/area.hpp"
#include "renorm/error.hpp"
#include "renorm/report.hpp"
#include "renorm/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>

struct rn_config {
    renorm::RunConfig config;
    std::map<std::string, std::string> raw;
};

struct rn_report {
    renorm::Report report;
};

struct rn_graph {
    renorm::MinimalGraph graph;
};

namespace {

thread_local std::string last_error;

rn_status record(rn_status s, const std::string& what) {
    last_error = what;
    return s;
}

template <class F>
rn_status guarded(F&& f) {
    try {
        f();
        return RN_OK;
    } catch (const renorm::Error& e) {
        return record(static_cast<rn_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return record(RN_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(RN_INTERNAL, e.what());
    }
}

rn_status null_argument(const char* name) { return record(RN_INVALID_ARGUMENT, std::string(name) + " is null"); }

constexpr double no_value = std::numeric_limits<double>::quiet_NaN();

rn_status make_graph(rn_graph** out, auto&& build) {
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] { *out = new rn_graph{build()}; });
}

}  // namespace

extern "C" {

const char* rn_version(void) { return "1.0.0"; }

const char* rn_status_name(rn_status status) {
    if (status == RN_OK) return "ok";
    if (status == RN_INTERNAL) return "internal";
    if (status >= RN_INVALID_ARGUMENT && status <= RN_PARSE)
        return renorm::error_code_name(static_cast<renorm::ErrorCode>(static_cast<int>(status)));
    return "unknown";
}

const char* rn_last_error(void) { return last_error.c_str(); }

rn_status rn_config_create(rn_config** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] { *out = new rn_config{}; });
}

void rn_config_free(rn_config* config) { delete config; }

rn_status rn_config_set(rn_config* config, const char* key, const char* value) {
    if (!config) return null_argument("config");
    if (!key) return null_argument("key");
    if (!value) return null_argument("value");
    return guarded([&] {
        config->config.set(key, value);
        config->raw[key] = value;
    });
}

rn_status rn_config_get(const rn_config* config, const char* key, const char** value) {
    if (!config) return null_argument("config");
    if (!key) return null_argument("key");
    if (!value) return null_argument("value");
    static const std::string empty;
    const auto& keys = renorm::RunConfig::keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        return record(RN_INVALID_ARGUMENT, std::string("config: unknown key '") + key + "'");
    const auto it = config->raw.find(key);
    *value = it == config->raw.end() ? empty.c_str() : it->second.c_str();
    return RN_OK;
}

rn_status rn_config_validate(const rn_config* config) {
    if (!config) return null_argument("config");
    return guarded([&] { config->config.validate(); });
}

size_t rn_config_key_count(void) { return renorm::RunConfig::keys().size(); }

const char* rn_config_key(size_t index) {
    const auto& keys = renorm::RunConfig::keys();
    return index < keys.size() ? keys[index].c_str() : nullptr;
}

rn_status rn_run(const rn_config* config, rn_report** out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] { *out = new rn_report{renorm::run_pipeline(config->config)}; });
}

void rn_report_free(rn_report* report) { delete report; }

const char* rn_report_title(const rn_report* report) { return report ? report->report.title.c_str() : ""; }

size_t rn_report_note_count(const rn_report* report) { return report ? report->report.notes.size() : 0; }

const char* rn_report_note(const rn_report* report, size_t index) {
    if (!report || index >= report->report.notes.size()) return nullptr;
    return report->report.notes[index].c_str();
}

size_t rn_report_row_count(const rn_report* report) { return report ? report->report.rows.size() : 0; }

rn_status rn_report_row(const rn_report* report, size_t index, rn_row* out) {
    if (!report) return null_argument("report");
    if (!out) return null_argument("out");
    if (index >= report->report.rows.size()) return record(RN_INVALID_ARGUMENT, "report: row index out of range");
    const renorm::ReportRow& r = report->report.rows[index];
    out->quantity = r.quantity.c_str();
    out->value = r.value;
    out->crosscheck = r.crosscheck.value_or(no_value);
    out->abs_err = r.abs_err();
    out->rel_err = r.rel_err();
    out->tol = r.tol;
    out->has_crosscheck = r.crosscheck.has_value();
    out->relative = r.relative;
    out->pass = r.pass();
    return RN_OK;
}

int rn_report_passed(const rn_report* report) { return report && report->report.passed(); }

rn_status rn_hyperbolic_reference(int n, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = renorm::hyperbolic_reference(n); });
}

rn_status rn_renormalized_volume_hyperbolic(int n, double* V, double* L, int* has_L) {
    if (!V || !L || !has_L) return null_argument("output");
    return guarded([&] {
        renorm::require(n >= 1 && n <= 6, renorm::ErrorCode::DimensionUnsupported, "volume: n must lie in 1..6");
        const renorm::VolumeResult r = renorm::renormalized_volume(renorm::NormalForm::hyperbolic(n));
        *V = n % 2 == 1 ? r.V_subtraction : r.fit.V();
        *has_L = r.fit.L().has_value();
        *L = r.fit.L().value_or(no_value);
    });
}

rn_status rn_graph_totally_geodesic(int k, int n, rn_graph** out) {
    return make_graph(out, [&] { return renorm::totally_geodesic(k, n); });
}

rn_status rn_graph_geodesic(int n, const double* p, const double* q, rn_graph** out) {
    if (!p || !q) return null_argument("endpoint");
    if (n < 1) return record(RN_DIMENSION_UNSUPPORTED, "geodesic: n must be positive");
    return make_graph(out, [&] {
        return renorm::geodesic_between(n, std::span<const double>(p, n), std::span<const double>(q, n));
    });
}

rn_status rn_graph_latitude(double theta0, rn_graph** out) {
    return make_graph(out, [&] { return renorm::equivariant_minimal_graph(renorm::Embedding::latitude(theta0), 2); });
}

rn_status rn_graph_coaxial_torus(double a, rn_graph** out) {
    return make_graph(out,
                      [&] { return renorm::equivariant_minimal_graph(renorm::Embedding::coaxial_torus(a), 3); });
}

void rn_graph_free(rn_graph* graph) { delete graph; }

int rn_graph_dimension(const rn_graph* graph) { return graph ? graph->graph.k() : -1; }

rn_status rn_renormalized_area(const rn_graph* graph, double* A, double* K, int* has_K) {
    if (!graph) return null_argument("graph");
    if (!A || !K || !has_K) return null_argument("output");
    return guarded([&] {
        const renorm::AreaFit f = renorm::renormalized_area(graph->graph);
        *A = f.A();
        *has_K = f.K().has_value();
        *K = f.K().value_or(no_value);
    });
}

rn_status rn_area_anomaly(const rn_graph* graph, const char* upsilon, double* anomaly, double* gauge_change,
                          int* has_gauge) {
    if (!graph) return null_argument("graph");
    if (!upsilon) return null_argument("upsilon");
    if (!anomaly || !gauge_change || !has_gauge) return null_argument("output");
    return guarded([&] {
        const renorm::AreaAnomalyReport a =
            renorm::area_anomaly(graph->graph, renorm::ConformalFactor::parse(upsilon));
        *anomaly = a.anomaly;
        *has_gauge = a.gauge_change.has_value();
        *gauge_change = a.gauge_change.value_or(no_value);
    });
}

}  // extern "C"
