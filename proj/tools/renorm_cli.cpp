// Command-line front end over the C interface.

#include "renorm/renorm.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ConfigPtr = std::unique_ptr<rn_config, decltype(&rn_config_free)>;
using ReportPtr = std::unique_ptr<rn_report, decltype(&rn_report_free)>;

struct Flag {
    Flag(std::string k, std::string h) : key(std::move(k)), help(std::move(h)) {}
    std::string key;
    std::string help;
    std::string value;
    CLI::Option* option = nullptr;
};

std::string num(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v == 0.0 ? 0.0 : v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Plain key = value lines; '#' starts a comment.
void read_config_file(const std::string& path, rn_config* config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (rn_config_set(config, key.c_str(), value.c_str()) != RN_OK)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + rn_last_error());
    }
}

std::vector<rn_row> rows_of(const rn_report* report) {
    std::vector<rn_row> rows(rn_report_row_count(report));
    for (std::size_t i = 0; i < rows.size(); ++i) rn_report_row(report, i, &rows[i]);
    return rows;
}

const char* verdict(const rn_row& r) { return !r.has_crosscheck ? "n/a" : r.pass ? "pass" : "fail"; }

std::string render_csv(const std::vector<rn_row>& rows) {
    std::ostringstream os;
    os << "quantity,value,crosscheck,abs_err,rel_err,tol,pass\n";
    for (const auto& r : rows)
        os << r.quantity << "," << num(r.value, 17) << "," << num(r.crosscheck, 17) << "," << num(r.abs_err, 17) << ","
           << num(r.rel_err, 17) << "," << num(r.tol, 17) << "," << verdict(r) << "\n";
    return os.str();
}

std::string render_table(const rn_report* report, const std::vector<rn_row>& rows) {
    std::vector<std::vector<std::string>> cells{{"quantity", "value", "crosscheck", "abs_err", "rel_err", "tol", "pass"}};
    for (const auto& r : rows) {
        const bool c = r.has_crosscheck;
        cells.push_back({r.quantity, num(r.value, 12), c ? num(r.crosscheck, 12) : "-", c ? num(r.abs_err, 3) : "-",
                         c ? num(r.rel_err, 3) : "-", c ? num(r.tol, 3) + (r.relative ? " rel" : " abs") : "-",
                         verdict(r)});
    }
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    std::ostringstream os;
    os << rn_report_title(report) << "\n";
    for (std::size_t i = 0; i < rn_report_note_count(report); ++i) os << "  note: " << rn_report_note(report, i) << "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            os << (j ? "  " : "") << cells[i][j];
            if (j + 1 < cells[i].size()) os << std::string(width[j] - cells[i][j].size(), ' ');
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renormalized volumes and areas of Poincare-Einstein metrics.\n"
                 "Flags override config-file values, which override defaults."};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::vector<Flag> flags{
        {"model", "hyperbolic | sphere-radius | torus | perturbed-torus | totally-geodesic | geodesic | latitude | "
                  "coaxial-torus"},
        {"n", "boundary dimension"},
        {"k", "dimension of the boundary submanifold (area commands)"},
        {"upsilon", "conformal factor, e.g. 0.1*X1 + 0.05*X1^2 (ambient X_i or chart x_i)"},
        {"radius", "sphere radius for sphere-radius"},
        {"angle", "latitude or torus angle, or the angle between geodesic endpoints"},
        {"periods", "comma-separated torus periods"},
        {"grid", "boundary quadrature nodes per axis"},
        {"eps-lo", "smallest cutoff"},
        {"eps-hi", "largest cutoff"},
        {"eps-count", "number of cutoffs"},
        {"step", "radial step of the eikonal solve"},
        {"order", "expansion order for fg-expand"},
        {"format", "table | csv"},
        {"out", "output path (default standard output)"},
        {"tol", "tolerance replacing every per-row tolerance"},
    };
    for (auto& f : flags) f.option = app.add_option("--" + f.key, f.value, f.help);
    std::string config_path;
    app.add_option("--config", config_path, "plain-text key = value file")->check(CLI::ExistingFile);

    const char* descriptions[][2] = {
        {"fg-expand", "power-series coefficients of g_r at a boundary point"},
        {"renorm-volume", "renormalized volume and log coefficient"},
        {"renorm-area", "renormalized area of a minimal submanifold"},
        {"anomaly", "conformal anomaly of the volume, or of the area when --k is given"},
        {"identities", "L identities and four-dimensional Gauss-Bonnet"},
    };
    for (const auto& d : descriptions) app.add_subcommand(d[0], d[1]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    rn_config* raw = nullptr;
    if (rn_config_create(&raw) != RN_OK) {
        std::cerr << "renorm_cli: " << rn_last_error() << "\n";
        return 1;
    }
    ConfigPtr config(raw, rn_config_free);
    try {
        if (!config_path.empty()) read_config_file(config_path, config.get());
        if (!app.get_subcommands().empty()) {
            const std::string cmd = app.get_subcommands().front()->get_name();
            rn_config_set(config.get(), "command", cmd.c_str());
        }
        for (const auto& f : flags)
            if (f.option->count() > 0 && rn_config_set(config.get(), f.key.c_str(), f.value.c_str()) != RN_OK)
                throw std::runtime_error(std::string("--") + f.key + ": " + rn_last_error());
        if (rn_config_validate(config.get()) != RN_OK) throw std::runtime_error(rn_last_error());
    } catch (const std::exception& e) {
        std::cerr << "renorm_cli: " << e.what() << "\n" << app.help();
        return 2;
    }

    rn_report* rep = nullptr;
    if (rn_run(config.get(), &rep) != RN_OK) {
        std::cerr << "renorm_cli: " << rn_last_error() << "\n";
        return 1;
    }
    ReportPtr report(rep, rn_report_free);
    const auto rows = rows_of(report.get());

    const char* format = nullptr;
    const char* out = nullptr;
    rn_config_get(config.get(), "format", &format);
    rn_config_get(config.get(), "out", &out);
    const std::string text =
        std::string(format) == "csv" ? render_csv(rows) : render_table(report.get(), rows);
    if (*out) {
        std::ofstream file(out, std::ios::binary);
        file << text;
        if (!file) {
            std::cerr << "renorm_cli: cannot write " << out << "\n";
            return 1;
        }
    } else {
        std::cout << text;
    }

    std::vector<rn_row> failed;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(failed), [](const rn_row& r) { return !r.pass; });
    if (!failed.empty()) {
        std::cerr << "failed checks:\n" << render_table(report.get(), failed);
        return 1;
    }
    return 0;
}
