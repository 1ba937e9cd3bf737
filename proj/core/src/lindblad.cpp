#include "blockade/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <Eigen/Eigenvalues>

#include "blockade/matrix_io.hpp"

namespace blockade {

std::vector<CollapseChannel> standard_channels(const DeviceParams& params,
                                               const SystemLayout& layout) {
    params.validate();
    if (layout.n_modes() > static_cast<int>(params.T1_m.size()) && !params.T1_m.empty())
        throw std::invalid_argument("standard_channels: T1_m does not cover every layout mode");
    std::vector<CollapseChannel> out;
    for (int m = 0; m < layout.n_modes(); ++m) {
        if (params.T1_m.empty()) break;
        double kappa = 1.0 / params.T1_m[m];
        if (kappa > 0.0)
            out.push_back({mode_annihilation(layout, m), kappa, "cavity_decay_" + std::to_string(m)});
    }
    if (params.T1_q > 0.0) {
        double gq = 1.0 / params.T1_q;
        ComplexMatrix ge = transmon_transition(layout, 0, 1);
        out.push_back({ge, gq * (1.0 + params.nth_q), "transmon_decay"});
        if (params.nth_q > 0.0)
            out.push_back({transmon_transition(layout, 1, 0), gq * params.nth_q,
                           "transmon_excitation"});
    }
    if (params.T2_q > 0.0 && params.T1_q > 0.0) {
        double gphi = 1.0 / params.T2_q - 0.5 / params.T1_q;
        if (gphi > 0.0)
            out.push_back({transmon_projector(layout, 1), gphi, "transmon_dephasing"});
    }
    return out;
}

namespace {

struct Entry {
    int i, j;
    Complex v;
};

std::vector<Entry> entries_of(const ComplexMatrix& m) {
    std::vector<Entry> e;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != Complex(0.0, 0.0)) e.push_back({i, j, m(i, j)});
    return e;
}

// out += A rho, A given as entries
void add_left(const std::vector<Entry>& a, const ComplexMatrix& rho, ComplexMatrix& out) {
    for (const Entry& e : a) out.row(e.i) += e.v * rho.row(e.j);
}

// out += rho A^dag, A given as entries
void add_right_dag(const std::vector<Entry>& a, const ComplexMatrix& rho, ComplexMatrix& out) {
    for (const Entry& e : a) out.col(e.i) += std::conj(e.v) * rho.col(e.j);
}

struct Segment {
    double t0, t1;
    int pulse_step; // -1 = beyond pulse (drift only)
    bool sample_at_end;
};

// Split [0, t_end] at pulse-step boundaries and sample times.
std::vector<Segment> make_segments(double dt, int steps, const std::vector<double>& samples,
                                   double t_end) {
    std::vector<double> cuts;
    for (int k = 1; k <= steps; ++k)
        if (k * dt < t_end - 1e-15) cuts.push_back(k * dt);
    for (double s : samples)
        if (s > 1e-15 && s < t_end - 1e-15) cuts.push_back(s);
    cuts.push_back(t_end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               cuts.end());

    auto sampled = [&](double t) {
        for (double s : samples)
            if (std::abs(s - t) < 1e-15) return true;
        return false;
    };
    std::vector<Segment> segs;
    double t0 = 0.0;
    for (double t1 : cuts) {
        Segment s;
        s.t0 = t0;
        s.t1 = t1;
        double mid = 0.5 * (t0 + t1);
        int k = steps > 0 ? static_cast<int>(mid / dt) : -1;
        s.pulse_step = (k >= 0 && k < steps) ? k : -1;
        s.sample_at_end = sampled(t1);
        segs.push_back(s);
        t0 = t1;
    }
    return segs;
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

ComplexMatrix step_hamiltonian(const ComplexMatrix& drift, const std::vector<ControlPair>& controls,
                               const PulseSequence& pulse, int k) {
    ComplexMatrix H = drift;
    if (k >= 0)
        for (int c = 0; c < static_cast<int>(controls.size()); ++c) {
            Complex u = pulse.channels[c][k];
            if (u.real() != 0.0) H += u.real() * controls[c].x;
            if (u.imag() != 0.0) H += u.imag() * controls[c].y;
        }
    return H;
}

void check_inputs(const ComplexMatrix& drift, const std::vector<ControlPair>& controls,
                  const PulseSequence& pulse, const std::vector<double>& sample_times) {
    if (pulse.n_channels() != static_cast<int>(controls.size()))
        throw std::invalid_argument("evolve: pulse channel count != control count");
    if (pulse.n_channels() > 0) pulse.validate();
    for (const auto& c : controls)
        if (c.x.rows() != drift.rows() || c.y.rows() != drift.rows())
            throw std::invalid_argument("evolve: control generator dimension mismatch");
    if (sample_times.empty()) throw std::invalid_argument("evolve: no sample times");
    for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
        if (sample_times[i] > sample_times[i + 1])
            throw std::invalid_argument("evolve: sample times must be non-decreasing");
    if (sample_times.front() < 0.0)
        throw std::invalid_argument("evolve: negative sample time");
    if (pulse.n_channels() > 0 && sample_times.back() > pulse.duration() + 1e-12)
        throw std::invalid_argument("evolve: sample time beyond pulse duration");
}

double step_budget(const ComplexMatrix& drift, const std::vector<ControlPair>& controls,
                   const PulseSequence& pulse) {
    double h_norm = max_abs(drift);
    for (int c = 0; c < static_cast<int>(controls.size()); ++c) {
        double cap = 0.0;
        for (Complex u : pulse.channels[c]) cap = std::max(cap, std::abs(u));
        h_norm += cap * std::max(max_abs(controls[c].x), max_abs(controls[c].y));
    }
    double h = h_norm > 0.0 ? 1.0 / (50.0 * h_norm) : std::numeric_limits<double>::infinity();
    if (pulse.n_channels() > 0) h = std::min(h, pulse.dt);
    return h;
}

} // namespace

TrajectoryResult evolve_master(const ComplexMatrix& drift,
                               const std::vector<ControlPair>& controls,
                               const PulseSequence& pulse,
                               const std::vector<CollapseChannel>& channels,
                               const ComplexMatrix& rho0,
                               const std::vector<double>& sample_times) {
    check_inputs(drift, controls, pulse, sample_times);
    const int d = static_cast<int>(drift.rows());
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("evolve_master: rho0 dimension mismatch");

    std::vector<std::vector<Entry>> chan_entries;
    ComplexMatrix g_sum = ComplexMatrix::Zero(d, d); // sum_ch rate L^dag L
    std::vector<double> rates;
    for (const auto& ch : channels) {
        if (ch.rate < 0.0) throw std::invalid_argument("evolve_master: negative channel rate");
        if (ch.op.rows() != d) throw std::invalid_argument("evolve_master: channel dim mismatch");
        if (ch.rate == 0.0) continue;
        chan_entries.push_back(entries_of(ch.op));
        rates.push_back(ch.rate);
        g_sum += ch.rate * (ch.op.adjoint() * ch.op);
    }
    std::vector<Entry> g_entries = entries_of(g_sum);

    // dissipation sets its own stiffness scale (relevant when the coherent
    // part is slow or absent): bound the step by sum_ch rate L^dag L too
    double h_max = step_budget(drift, controls, pulse);
    double g_scale = max_abs(g_sum);
    if (g_scale > 0.0) h_max = std::min(h_max, 1.0 / (50.0 * g_scale));
    const double t_end = std::max(sample_times.back(),
                                  pulse.n_channels() > 0 ? pulse.duration() : 0.0);
    auto segs = make_segments(pulse.n_channels() > 0 ? pulse.dt : t_end,
                              pulse.n_channels() > 0 ? pulse.steps() : 1, sample_times, t_end);

    TrajectoryResult traj;
    traj.is_density = true;
    ComplexMatrix rho = rho0;
    ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);
    ComplexMatrix scratch1(d, d), scratch2(d, d); // rhs-internal workspace

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(rho);
    };
    for (double s : sample_times)
        if (std::abs(s) < 1e-15) {
            record(0.0);
            break;
        }

    std::vector<Entry> h_entries;
    auto rhs = [&](const ComplexMatrix& r, ComplexMatrix& out) {
        out.setZero();
        // -i (H r - r H): H Hermitian, entries stored once
        for (const Entry& e : h_entries) {
            out.row(e.i) -= Complex(0.0, 1.0) * e.v * r.row(e.j);
            out.col(e.j) += Complex(0.0, 1.0) * e.v * r.col(e.i);
        }
        for (std::size_t c = 0; c < chan_entries.size(); ++c) {
            scratch1.setZero();
            add_left(chan_entries[c], r, scratch1);
            scratch2.setZero();
            add_right_dag(chan_entries[c], scratch1, scratch2);
            out += rates[c] * scratch2;
        }
        for (const Entry& e : g_entries) {
            out.row(e.i) -= 0.5 * e.v * r.row(e.j);
            out.col(e.i) -= 0.5 * std::conj(e.v) * r.col(e.j);
        }
    };

    for (const Segment& seg : segs) {
        ComplexMatrix H = step_hamiltonian(drift, controls, pulse, seg.pulse_step);
        h_entries = entries_of(H);
        const double len = seg.t1 - seg.t0;
        const int ns = std::max(1, static_cast<int>(std::ceil(len / h_max)));
        const double h = len / ns;
        for (int s = 0; s < ns; ++s) {
            rhs(rho, k1);
            stage = rho + 0.5 * h * k1;
            rhs(stage, k2);
            stage = rho + 0.5 * h * k2;
            rhs(stage, k3);
            stage = rho + h * k3;
            rhs(stage, k4);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!rho.allFinite())
            throw IntegrationError("evolve_master: non-finite state", seg.t1);
        double tr_def = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (tr_def > 1e-3)
            throw IntegrationError("evolve_master: trace defect " + std::to_string(tr_def),
                                   seg.t1);
        if (seg.sample_at_end) record(seg.t1);
    }
    return traj;
}

TrajectoryResult evolve_schrodinger(const ComplexMatrix& drift,
                                    const std::vector<ControlPair>& controls,
                                    const PulseSequence& pulse, const ComplexVector& psi0,
                                    const std::vector<double>& sample_times) {
    check_inputs(drift, controls, pulse, sample_times);
    const int d = static_cast<int>(drift.rows());
    if (psi0.size() != d)
        throw std::invalid_argument("evolve_schrodinger: psi0 dimension mismatch");

    const double t_end = std::max(sample_times.back(),
                                  pulse.n_channels() > 0 ? pulse.duration() : 0.0);
    auto segs = make_segments(pulse.n_channels() > 0 ? pulse.dt : t_end,
                              pulse.n_channels() > 0 ? pulse.steps() : 1, sample_times, t_end);

    TrajectoryResult traj;
    traj.is_density = false;
    ComplexVector psi = psi0;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.vectors.push_back(psi);
    };
    for (double s : sample_times)
        if (std::abs(s) < 1e-15) {
            record(0.0);
            break;
        }

    for (const Segment& seg : segs) {
        ComplexMatrix H = step_hamiltonian(drift, controls, pulse, seg.pulse_step);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
        const double len = seg.t1 - seg.t0;
        ComplexVector phases(d);
        for (int i = 0; i < d; ++i)
            phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * len));
        psi = es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * psi);
        if (!psi.allFinite())
            throw IntegrationError("evolve_schrodinger: non-finite state", seg.t1);
        if (seg.sample_at_end) record(seg.t1);
    }
    return traj;
}

void expectations(TrajectoryResult& traj, const std::vector<std::string>& names,
                  const std::vector<ComplexMatrix>& ops) {
    if (names.size() != ops.size())
        throw std::invalid_argument("expectations: name/op count mismatch");
    for (std::size_t o = 0; o < ops.size(); ++o) {
        const bool herm = is_hermitian(ops[o]);
        if (!herm) traj.nonhermitian_warning = true;
        std::vector<double> series;
        const std::size_t n = traj.is_density ? traj.states.size() : traj.vectors.size();
        for (std::size_t s = 0; s < n; ++s) {
            Complex v = traj.is_density
                            ? (ops[o] * traj.states[s]).trace()
                            : Complex(traj.vectors[s].dot(ops[o] * traj.vectors[s]));
            if (herm && std::abs(v.imag()) > 1e-8)
                throw std::runtime_error("expectations: imaginary residual " +
                                         std::to_string(v.imag()) + " for " + names[o]);
            series.push_back(v.real());
        }
        traj.observable_names.push_back(names[o]);
        traj.observables.push_back(std::move(series));
    }
}

void TrajectoryResult::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("TrajectoryResult::save_csv: cannot open " + path);
    os << "time";
    for (const auto& n : observable_names) os << "," << n;
    os << "\n";
    for (std::size_t s = 0; s < times.size(); ++s) {
        os << format_double(times[s]);
        for (const auto& series : observables) os << "," << format_double(series[s]);
        os << "\n";
    }
}

} // namespace blockade
