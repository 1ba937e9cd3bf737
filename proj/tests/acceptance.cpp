// End-to-end acceptance harness. Runs every shipped scenario through the
// CLI binary twice (for determinism), then checks each numbered criterion
// against pinned tolerances. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "blockade/analysis.hpp"
#include "blockade/config.hpp"
#include "blockade/grape.hpp"
#include "blockade/rng.hpp"
#include "blockade/states.hpp"
#include "blockade/tomography.hpp"

namespace fs = std::filesystem;
using namespace blockade;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Criterion {
    int id;
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string g_bin = BLOCKADE_LAB_BIN;
std::string g_scenarios = BLOCKADE_SCENARIO_DIR;

struct CliRun {
    int exit_code = -1;
    double seconds = 0.0;
};

CliRun run_cli(const std::string& sub, const std::string& scenario, const std::string& out) {
    std::string cmd = g_bin + " " + sub + " --scenario " + g_scenarios + "/" + scenario +
                      " --out " + out + " > /dev/null";
    auto t0 = std::chrono::steady_clock::now();
    int rc = std::system(cmd.c_str());
    auto t1 = std::chrono::steady_clock::now();
    CliRun r;
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    r.exit_code = (rc >= 256) ? rc / 256 : rc;
    std::cerr << "  ran " << scenario << " -> exit " << r.exit_code << " in " << r.seconds
              << " s\n";
    return r;
}

bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return sa == sb;
}

/// All regular files below root, as sorted relative paths.
std::vector<fs::path> file_list(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
    std::sort(out.begin(), out.end());
    return out;
}

ComplexMatrix random_density(int d, Rng& rng) {
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal_complex();
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

ControlProblem random_small_problem(int d, int steps, Rng& rng) {
    ControlProblem p;
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal_complex();
    p.drift = 0.5 * kTwoPi * 1e5 * (g + g.adjoint().eval());
    ComplexMatrix a = annihilation_op(d);
    ControlPair c;
    c.x = a + a.adjoint().eval();
    c.y = Complex(0.0, -1.0) * (a - a.adjoint().eval());
    c.name = "m0";
    p.controls = {c};
    p.initial = ComplexVector::Zero(d);
    p.initial(0) = 1.0;
    p.target = ComplexVector::Zero(d);
    p.target(d - 1) = 1.0;
    p.horizon = 2e-6;
    p.steps = steps;
    p.amplitude_cap = kTwoPi * 5e4;
    return p;
}

} // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "blockade_lab_acceptance";
    fs::remove_all(work);
    fs::path run_a = work / "run_a";
    fs::path run_b = work / "run_b";
    fs::create_directories(run_a);
    fs::create_directories(run_b);

    // (subcommand, scenario file) in dependency order: the tomography
    // pipeline reads the cavity state written by the W3 preparation run.
    const std::vector<std::pair<std::string, std::string>> scenarios = {
        {"simulate", "blockade_rabi.cfg"},    {"simulate", "stark_spectroscopy.cfg"},
        {"grape", "fock1_blockade3.cfg"},     {"grape", "fock2_blockade3.cfg"},
        {"grape", "shift_gate.cfg"},          {"simulate", "w2_prep.cfg"},
        {"simulate", "w3_prep.cfg"},          {"tomo", "tomo_design_d8.cfg"},
        {"tomo", "tomo_w3.cfg"},              {"fit", "fit_cavity_ramsey.cfg"}};

    std::map<std::string, CliRun> timings;
    bool all_ran = true;
    for (const auto& [sub, scen] : scenarios) {
        CliRun r = run_cli(sub, scen, run_a.string());
        timings[scen] = r;
        if (r.exit_code != 0) all_ran = false;
    }
    for (const auto& [sub, scen] : scenarios)
        if (run_cli(sub, scen, run_b.string()).exit_code != 0) all_ran = false;

    auto summary = [&](const std::string& name, const std::string& file) {
        return Config::parse_file((run_a / name / file).string());
    };

    std::vector<Criterion> cs;
    auto criterion = [&](int id, auto body) {
        Criterion c{id};
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        cs.push_back(c);
    };

    // 1. Blockaded Rabi exchange under the n0 = 2 blockade drive.
    criterion(1, [&](Criterion& c) {
        Config s = summary("blockade_rabi", "summary.txt");
        double p1 = s.get_double("peak_p1");
        double tpk = s.get_double("peak_time_us");
        double leak = s.get_double("max_blockaded_population");
        c.require(p1 > 0.95, "peak P1 " + std::to_string(p1) + " <= 0.95");
        c.require(std::abs(tpk - 25.0) <= 2.0, "peak at " + std::to_string(tpk) + " us");
        c.require(leak < 0.05, "blockaded leakage " + std::to_string(leak));
        c.require(timings["blockade_rabi.cfg"].seconds < 5.0, "runtime >= 5 s");
    });

    // 2. Light shift of the lowest line under the blockade drive.
    criterion(2, [&](Criterion& c) {
        Config s = summary("stark_spectroscopy", "summary.txt");
        double lead = s.get_double("leading_shift_n0_hz");
        double exact = s.get_double("exact_shift_n0_hz");
        double line = s.get_double("line_shift_hz");
        c.require(std::abs(lead - (-1259.79)) <= 0.02 * 1259.79,
                  "leading value " + std::to_string(lead) + " Hz");
        double budget = std::pow(107e3 / (2.0 * 1.136e6), 2);
        c.require(std::abs(exact - lead) / std::abs(lead) <= budget,
                  "exact deviates " + std::to_string(std::abs(exact - lead) / std::abs(lead)));
        c.require(std::abs(line - lead) <= 0.10 * std::abs(lead),
                  "simulated line shift " + std::to_string(line) + " Hz");
    });

    // 3. Pulse synthesis on the reduced blockade model, closed and open.
    criterion(3, [&](Criterion& c) {
        for (const std::string& name : {"fock1_blockade3", "fock2_blockade3"}) {
            Config s = summary(name, "summary.txt");
            double fc = s.get_double("closed_fidelity");
            double fo = s.get_double("open_fidelity");
            c.require(fc >= 0.99, name + " closed " + std::to_string(fc));
            c.require(fo >= 0.96 && fo <= 0.99, name + " open " + std::to_string(fo));
            c.require(timings[name + ".cfg"].seconds < 180.0, name + " runtime >= 3 min");
        }
    });

    // 4. Band-limiting converged pulses to half the dispersive shift.
    criterion(4, [&](Criterion& c) {
        for (const std::string& name : {"fock1_blockade3", "fock2_blockade3"}) {
            double d = summary(name, "summary.txt").get_double("bandlimit_fidelity_change");
            c.require(std::abs(d) < 0.01, name + " change " + std::to_string(d));
        }
    });

    // 5. Constant-drive W-state preparation fidelities.
    criterion(5, [&](Criterion& c) {
        double w2 = summary("w2_prep", "summary.txt").get_double("w_fidelity");
        double w3 = summary("w3_prep", "summary.txt").get_double("w_fidelity");
        c.require(w2 >= 0.90 && w2 <= 0.94, "two-mode fidelity " + std::to_string(w2));
        c.require(w3 >= 0.87 && w3 <= 0.92, "three-mode fidelity " + std::to_string(w3));
        c.require(timings["w2_prep.cfg"].seconds < 120.0, "w2 runtime >= 2 min");
        c.require(timings["w3_prep.cfg"].seconds < 120.0, "w3 runtime >= 2 min");
    });

    // 6. Witness floor on ideal states and on the reconstructed state.
    criterion(6, [&](Criterion& c) {
        for (int n : {2, 3}) {
            std::vector<int> dims(n, 2);
            std::vector<double> phases(n - 1, 0.7);
            WitnessResult w =
                entanglement_witness(pure_density(w_state_vector(n, phases, dims)), dims);
            c.require(std::abs(w.value + 1.0 / n) < 1e-10,
                      "ideal N=" + std::to_string(n) + " value " + std::to_string(w.value));
        }
        double w3 = summary("tomo_w3", "report.txt").get_double("witness_value");
        c.require(w3 > -1.0 / 3.0 && w3 < 0.0, "reconstructed witness " + std::to_string(w3));
        c.require(std::abs(w3 + 0.2) <= 0.05, "witness far from -0.2: " + std::to_string(w3));
    });

    // 7. Tomography round trip on the optimized 75-point single-mode design.
    criterion(7, [&](Criterion& c) {
        WignerPointSet ps =
            WignerPointSet::load_csv((run_a / "tomo_design_d8" / "pointset.csv").string());
        c.require(ps.condition_number <= 2.5,
                  "condition number " + std::to_string(ps.condition_number));
        c.require(static_cast<int>(ps.settings.size()) == 75, "point count");
        const int d = ps.recon_total();

        Rng rng(711);
        double worst_fid = 1.0;
        std::vector<ComplexMatrix> truths;
        for (int i = 0; i < 50; ++i) {
            ComplexMatrix small = random_density(d, rng);
            truths.push_back(small);
            ComplexMatrix rho = restrict_modes(ps.recon_dims, ps.op_dims, small);
            MeasurementRecord rec = simulate_measurements(rho, ps, 0.0, 1000 + i);
            ReconstructionResult res = reconstruct(ps, rec);
            worst_fid = std::min(worst_fid, uhlmann_fidelity(small, res.rho));
        }
        c.require(worst_fid > 0.999, "noiseless fidelity " + std::to_string(worst_fid));

        // Noise budget: the linear inversion amplifies measurement noise by
        // at most 1/sigma_min = kappa/sigma_max in Frobenius norm, and
        // ||.||_1 <= sqrt(d)||.||_F, so with E||noise|| <= sigma sqrt(n):
        //   mean trace distance <= 0.5 sqrt(d) kappa sigma sqrt(n) / sigma_max
        const double sigma = 0.01;
        double kappa = 0.0;
        Eigen::MatrixXd m = build_measurement_matrix(ps, kappa);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        double smax = svd.singularValues().maxCoeff();
        double budget = 0.5 * std::sqrt(double(d)) * kappa * sigma *
                        std::sqrt(double(ps.settings.size())) / smax;
        double mean_td = 0.0;
        ComplexMatrix rho_op = restrict_modes(ps.recon_dims, ps.op_dims, truths[0]);
        for (int seed = 0; seed < 100; ++seed) {
            MeasurementRecord rec = simulate_measurements(rho_op, ps, sigma, 5000 + seed);
            ReconstructionResult res = reconstruct(ps, rec);
            mean_td += trace_distance(truths[0], res.rho);
        }
        mean_td /= 100.0;
        c.require(mean_td <= budget, "mean trace distance " + std::to_string(mean_td) +
                                         " over budget " + std::to_string(budget));
    });

    // 8. Eigenvalue-redistribution projection oracle.
    criterion(8, [&](Criterion& c) {
        ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
        diag(0, 0) = 0.5;
        diag(1, 1) = 0.6;
        diag(2, 2) = -0.1;
        ComplexMatrix p = smolin_project(diag);
        c.require(std::abs(p(0, 0) - Complex(0.45)) < 1e-15 &&
                      std::abs(p(1, 1) - Complex(0.55)) < 1e-15 &&
                      std::abs(p(2, 2)) < 1e-15,
                  "oracle value mismatch");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) c.require(std::abs(p(i, j)) < 1e-15, "off-diagonal nonzero");
        Rng rng(812);
        for (int i = 0; i < 100; ++i) {
            ComplexMatrix rho = random_density(5, rng);
            ComplexMatrix q = smolin_project(rho);
            c.require((q - rho).cwiseAbs().maxCoeff() < 1e-10, "not idempotent on PSD");
        }
    });

    // 9. Analytic control gradient against central finite differences.
    criterion(9, [&](Criterion& c) {
        Rng rng(913);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            int d = 2 + rng.index(3);
            ControlProblem p = random_small_problem(d, 6, rng);
            PulseSequence u;
            u.dt = p.horizon / p.steps;
            u.channel_names = {"m0"};
            u.channels.resize(1);
            for (int k = 0; k < p.steps; ++k)
                u.channels[0].push_back(rng.normal_complex() * (p.amplitude_cap / 4.0));
            Eigen::MatrixXd g = pulse_gradient(p, u);
            Eigen::MatrixXd fd(p.steps, 2);
            const double h = 1e-2;
            for (int k = 0; k < p.steps; ++k)
                for (int q = 0; q < 2; ++q) {
                    PulseSequence up = u, um = u;
                    Complex dq = (q == 0) ? Complex(h, 0.0) : Complex(0.0, h);
                    up.channels[0][k] += dq;
                    um.channels[0][k] -= dq;
                    fd(k, q) = (pulse_cost(p, up) - pulse_cost(p, um)) / (2.0 * h);
                }
            worst = std::max(worst, (g - fd).norm() / fd.norm());
        }
        c.require(worst < 1e-5, "gradient relative error " + std::to_string(worst));
    });

    // 10. Self-Kerr round trip and the Kerr-free closed form.
    criterion(10, [&](Criterion& c) {
        const double omega = kTwoPi * 12e3;
        const double kerr = -kTwoPi * 9e3;
        std::vector<double> ts, alphas, ys;
        for (int ai = 0; ai < 13; ++ai) {
            double alpha = 0.3 + 0.1 * ai;
            for (int k = 1; k <= 30; ++k) {
                double t = 2e-6 * k;
                ts.push_back(t);
                alphas.push_back(alpha);
                ys.push_back(cavity_ramsey_signal(t, alpha, omega, kerr));
            }
        }
        FitResult fit = fit_cavity_ramsey_sweep(ts, alphas, ys);
        c.require(fit.converged, "fit did not converge");
        double krel = std::abs(fit.param("kerr_rad") - kerr) / std::abs(kerr);
        c.require(krel < 0.01, "kerr off by " + std::to_string(krel));

        double worst = 0.0;
        for (double alpha : {0.3, 0.7, 1.0, 1.5})
            for (int k = 0; k <= 40; ++k) {
                double t = 1.5e-6 * k;
                double series = cavity_ramsey_signal(t, alpha, omega, 0.0);
                double closed = std::exp(-2.0 * alpha * alpha) *
                                std::exp(2.0 * alpha * alpha * std::cos(omega * t));
                worst = std::max(worst, std::abs(series - closed));
            }
        c.require(worst < 1e-12, "closed-form deviation " + std::to_string(worst));
    });

    // 11. Seeded reruns are byte-identical across the whole output tree.
    criterion(11, [&](Criterion& c) {
        c.require(all_ran, "a scenario run failed");
        auto la = file_list(run_a);
        auto lb = file_list(run_b);
        c.require(la == lb, "output file sets differ");
        c.require(!la.empty(), "no output files found");
        if (la == lb)
            for (const auto& rel : la)
                if (!files_identical(run_a / rel, run_b / rel)) {
                    c.require(false, "differs: " + rel.string());
                    break;
                }
    });

    bool all = true;
    for (const Criterion& c : cs) {
        std::cout << "criterion " << c.id << ": " << (c.pass ? "PASS" : "FAIL");
        if (!c.pass) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        all = all && c.pass;
    }
    fs::remove_all(work);
    return all ? 0 : 1;
}
