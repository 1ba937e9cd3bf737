#include <fstream>
#include <iostream>
#include <sstream>

#include "blockade/analysis.hpp"
#include "blockade/matrix_io.hpp"

#include "common.hpp"

namespace blockade_lab {

using namespace blockade;

namespace {

/// CSV with a header row and either (t, y) or (t, alpha, y) columns.
void load_data(const std::string& path, std::vector<double>& ts, std::vector<double>& alphas,
               std::vector<double>& ys) {
    std::ifstream is(path);
    if (!is) throw ConfigError("fit: cannot open data file " + path, 0);
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
        if (cols.size() == 2) {
            ts.push_back(cols[0]);
            ys.push_back(cols[1]);
        } else if (cols.size() == 3) {
            ts.push_back(cols[0]);
            alphas.push_back(cols[1]);
            ys.push_back(cols[2]);
        } else {
            throw ConfigError("fit: expected 2 or 3 columns in " + path, 0);
        }
    }
    if (ts.empty()) throw ConfigError("fit: no data rows in " + path, 0);
    if (!alphas.empty() && alphas.size() != ts.size())
        throw ConfigError("fit: mixed 2- and 3-column rows in " + path, 0);
}

} // namespace

int cmd_fit(const Config& sc, const CliOptions& opts) {
    std::string data_path = resolve(dir_of(opts.scenario_path), sc.get_string("data"));
    std::vector<double> ts, alphas, ys;
    load_data(data_path, ts, alphas, ys);

    std::string model = sc.get_string("model");
    FitResult fit;
    if (model == "ramsey") {
        fit = fit_oscillation(ts, ys, FitModel::ramsey);
    } else if (model == "cavity_ramsey") {
        if (alphas.empty())
            fit = fit_oscillation(ts, ys, FitModel::cavity_ramsey);
        else
            fit = fit_cavity_ramsey_sweep(ts, alphas, ys);
    } else {
        throw std::invalid_argument("fit: unknown model " + model);
    }

    std::string out = make_output_dir(opts, sc.get_string("name"));
    fit.save_report(out + "/fit_report.txt");
    std::cout << out << "/fit_report.txt" << std::endl;
    if (opts.strict && !fit.converged) return kExitNoConvergence;
    return kExitOk;
}

} // namespace blockade_lab
