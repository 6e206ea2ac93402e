#pragma once

// Command pipelines shared by the C interface and the command-line tool. A run
// is described by flat key = value settings and produces a table of extracted
// quantities, each with an independent cross-check where one exists.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace renorm {

struct RunConfig {
    std::string command;               // fg-expand | renorm-volume | renorm-area | anomaly | identities
    std::string model = "hyperbolic";  // see model_names()
    int n = 3;
    std::optional<int> k;              // renorm-area, anomaly (area anomaly when set)
    std::string upsilon;               // empty: 0.1*X1 on spheres, 0.1*cos(x1) on tori
    double radius = 1.0;               // sphere-radius
    std::optional<double> angle;       // latitude, coaxial-torus, geodesic (angle between endpoints)
    std::vector<double> periods;       // torus models; 2 pi in every direction when empty
    std::optional<int> grid;           // boundary quadrature nodes per axis
    std::optional<double> eps_lo;
    std::optional<double> eps_hi;
    std::optional<int> eps_count;
    double step = 1e-3;                // radial step of the eikonal solve
    int order = 4;                     // fg-expand
    std::string format = "table";      // table | csv
    std::string out;                   // empty: standard output
    std::optional<double> tol;         // replaces every row tolerance

    /// Keys are the long flag names without dashes ("eps-lo", "n", ...).
    /// Raises InvalidArgument for unknown keys and Parse for malformed values.
    void set(std::string_view key, std::string_view value);
    /// Range checks that do not depend on the command.
    void validate() const;

    static const std::vector<std::string>& keys();
    static const std::vector<std::string>& commands();
    static const std::vector<std::string>& model_names();
};

struct ReportRow {
    std::string quantity;
    double value = 0.0;
    std::optional<double> crosscheck;
    double tol = 0.0;
    bool relative = false;  // pass when abs_err <= tol * |crosscheck| instead of abs_err <= tol

    [[nodiscard]] double abs_err() const;
    [[nodiscard]] double rel_err() const;
    /// Rows without a cross-check always pass.
    [[nodiscard]] bool pass() const;
};

struct Report {
    std::string title;
    std::vector<std::string> notes;
    std::vector<ReportRow> rows;

    [[nodiscard]] bool passed() const;
};

Report run_pipeline(const RunConfig& config);

}  // namespace renorm
