#include <fstream>
#include <iostream>

#include "blockade/analysis.hpp"
#include "blockade/matrix_io.hpp"
#include "blockade/states.hpp"
#include "blockade/tomography.hpp"

#include "common.hpp"

namespace blockade_lab {

using namespace blockade;

namespace {

std::vector<std::vector<double>> angle_sets_from(const Config& sc) {
    std::vector<std::vector<double>> sets;
    for (int k = 0;; ++k) {
        std::string key = "angle_set_rad_" + std::to_string(k);
        if (!sc.has(key)) break;
        sets.push_back(sc.get_double_list(key));
    }
    return sets;
}

WignerPointSet run_design(const Config& sc, const CliOptions& opts, const std::string& out) {
    PointSetOptions pso;
    pso.n_proposals = sc.get_int("n_proposals", 2000);
    pso.rmax = sc.get_double("rmax", 0.0);
    pso.angle_sets = angle_sets_from(sc);
    pso.objective = sc.get_string("objective", "auto");
    WignerPointSet ps =
        optimize_point_set(sc.get_int_list("op_dims"), sc.get_int_list("recon_dims"),
                           sc.get_int("n_tuples"), pso, effective_seed(sc, opts));
    ps.save_csv(out + "/pointset.csv");
    return ps;
}

/// Load a cavity-space density matrix and pad/truncate it onto op_dims.
ComplexMatrix load_state(const Config& sc, const CliOptions& opts,
                         const std::vector<int>& op_dims) {
    std::string path = resolve(output_root(opts), sc.get_string("state_file"));
    ComplexMatrix rho = read_matrix(path);
    std::vector<int> dims = sc.get_int_list("state_dims");
    return restrict_modes(dims, op_dims, rho);
}

MeasurementRecord run_simulate(const Config& sc, const CliOptions& opts,
                               const WignerPointSet& ps, const std::string& out) {
    ComplexMatrix rho = load_state(sc, opts, ps.op_dims);
    MeasurementRecord rec = simulate_measurements(rho, ps, sc.get_double("noise_sigma", 0.0),
                                                  effective_seed(sc, opts) + 1);
    rec.save_csv(out + "/record.csv");
    return rec;
}

int run_reconstruct(const Config& sc, const CliOptions& opts, const WignerPointSet& ps,
                    const MeasurementRecord& rec, const std::string& out) {
    ReconstructionResult res = reconstruct(ps, rec);
    write_matrix(out + "/rho.m", res.rho);

    std::ofstream os(out + "/report.txt");
    os << "name = " << sc.get_string("name") << "\n";
    os << "settings = " << ps.settings.size() << "\n";
    os << "condition_number = " << format_double(res.condition_number) << "\n";
    os << "residual = " << format_double(res.residual) << "\n";
    os << "psd_adjustment = " << format_double(res.psd_adjustment) << "\n";
    if (sc.has("state_file")) {
        // compare against the state the record was simulated from
        ComplexMatrix truth_op = load_state(sc, opts, ps.op_dims);
        ComplexMatrix truth = restrict_modes(ps.op_dims, ps.recon_dims, truth_op);
        double tr = truth.trace().real();
        if (tr > 0.0) truth /= tr;
        os << "fidelity_vs_truth = " << format_double(uhlmann_fidelity(truth, res.rho))
           << "\n";
        os << "trace_distance_vs_truth = " << format_double(trace_distance(truth, res.rho))
           << "\n";
    }
    if (sc.get_int("witness", 0)) {
        WitnessResult wit = entanglement_witness(res.rho, ps.recon_dims);
        os << "witness_value = " << format_double(wit.value) << "\n";
        os << "w_fidelity = " << format_double(wit.fidelity) << "\n";
    }
    std::cout << out << "/report.txt" << std::endl;
    return kExitOk;
}

} // namespace

int cmd_tomo(const Config& sc, const CliOptions& opts) {
    std::string task = sc.get_string("task");
    std::string out = make_output_dir(opts, sc.get_string("name"));

    if (task == "design") {
        WignerPointSet ps = run_design(sc, opts, out);
        std::ofstream os(out + "/summary.txt");
        os << "name = " << sc.get_string("name") << "\n";
        os << "settings = " << ps.settings.size() << "\n";
        os << "condition_number = " << format_double(ps.condition_number) << "\n";
        std::cout << out << "/summary.txt" << std::endl;
        return kExitOk;
    }
    if (task == "simulate") {
        WignerPointSet ps =
            WignerPointSet::load_csv(resolve(output_root(opts), sc.get_string("pointset")));
        run_simulate(sc, opts, ps, out);
        std::cout << out << "/record.csv" << std::endl;
        return kExitOk;
    }
    if (task == "reconstruct") {
        WignerPointSet ps =
            WignerPointSet::load_csv(resolve(output_root(opts), sc.get_string("pointset")));
        MeasurementRecord rec =
            MeasurementRecord::load_csv(resolve(output_root(opts), sc.get_string("record")));
        return run_reconstruct(sc, opts, ps, rec, out);
    }
    if (task == "pipeline") {
        WignerPointSet ps = run_design(sc, opts, out);
        MeasurementRecord rec = run_simulate(sc, opts, ps, out);
        return run_reconstruct(sc, opts, ps, rec, out);
    }
    throw std::invalid_argument("tomo: unknown task " + task);
}

} // namespace blockade_lab
