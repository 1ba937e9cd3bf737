#include "blockade/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace blockade {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double hz(double v) { return kTwoPi * v; }
} // namespace

double DeviceParams::cross_kerr_of(int m, int n) const {
    if (m == n) throw std::invalid_argument("cross_kerr_of: m == n");
    if (m > n) std::swap(m, n);
    auto it = cross_kerr.find({m, n});
    return it == cross_kerr.end() ? 0.0 : it->second;
}

void DeviceParams::validate() const {
    const std::size_t M = chi_m.size();
    if (omega_m.size() != M || kerr_m.size() != M)
        throw std::invalid_argument("DeviceParams: omega_m/chi_m/kerr_m lengths differ");
    if (!T1_m.empty() && T1_m.size() != M)
        throw std::invalid_argument("DeviceParams: T1_m length != mode count");
    if (!T2_m.empty() && T2_m.size() != M)
        throw std::invalid_argument("DeviceParams: T2_m length != mode count");
    if (T1_q > 0.0 && T2_q > 2.0 * T1_q)
        throw std::invalid_argument("DeviceParams: T2_q exceeds 2*T1_q");
    if (nth_q < 0.0 || nth_q >= 1.0)
        throw std::invalid_argument("DeviceParams: nth_q outside [0, 1)");
    for (const auto& [key, val] : cross_kerr) {
        auto [m, n] = key;
        if (m < 0 || n < 0 || m >= static_cast<int>(M) || n >= static_cast<int>(M))
            throw std::invalid_argument("DeviceParams: cross-Kerr mode index out of range");
        if (m >= n)
            throw std::invalid_argument("DeviceParams: cross-Kerr keys must have m < n");
        (void)val;
    }
}

DeviceParams DeviceParams::select_modes(const std::vector<int>& modes) const {
    DeviceParams out;
    out.omega_q = omega_q;
    out.T1_q = T1_q;
    out.T2_q = T2_q;
    out.nth_q = nth_q;
    for (int m : modes) {
        if (m < 0 || m >= n_modes())
            throw std::out_of_range("select_modes: mode index out of range");
        out.omega_m.push_back(omega_m[m]);
        out.chi_m.push_back(chi_m[m]);
        out.kerr_m.push_back(kerr_m[m]);
        if (!T1_m.empty()) out.T1_m.push_back(T1_m[m]);
        if (!T2_m.empty()) out.T2_m.push_back(T2_m[m]);
    }
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            double k = cross_kerr_of(modes[i], modes[j]);
            if (k != 0.0) out.cross_kerr[{static_cast<int>(i), static_cast<int>(j)}] = k;
        }
    return out;
}

DeviceParams DeviceParams::from_config(const Config& cfg) {
    DeviceParams p;
    p.omega_q = hz(cfg.get_double("omega_q_hz"));
    for (double v : cfg.get_double_list("mode_freq_hz")) p.omega_m.push_back(hz(v));
    for (double v : cfg.get_double_list("chi_hz")) p.chi_m.push_back(hz(v));
    for (double v : cfg.get_double_list("kerr_hz")) p.kerr_m.push_back(hz(v));
    for (const std::string& key : cfg.keys_with_prefix("cross_kerr_hz_")) {
        const std::string tail = key.substr(std::string("cross_kerr_hz_").size());
        auto us = tail.find('_');
        if (us == std::string::npos)
            throw std::invalid_argument("DeviceParams: malformed key " + key);
        int m = std::stoi(tail.substr(0, us));
        int n = std::stoi(tail.substr(us + 1));
        if (m > n) std::swap(m, n);
        p.cross_kerr[{m, n}] = hz(cfg.get_double(key));
    }
    p.T1_q = cfg.get_double("t1_q_us", 0.0) * 1e-6;
    p.T2_q = cfg.get_double("t2_q_us", 0.0) * 1e-6;
    p.nth_q = cfg.get_double("nth_q", 0.0);
    if (cfg.has("t1_m_us"))
        for (double v : cfg.get_double_list("t1_m_us")) p.T1_m.push_back(v * 1e-6);
    if (cfg.has("t2_m_us"))
        for (double v : cfg.get_double_list("t2_m_us")) p.T2_m.push_back(v * 1e-6);
    p.validate();
    return p;
}

BlockadeValidity blockade_validity(const BlockadeSpec& spec, const DeviceParams& params,
                                   double drive_amplitude) {
    BlockadeValidity v;
    v.drive_amplitude = drive_amplitude;
    v.lower = drive_amplitude * std::sqrt(static_cast<double>(spec.blockade_photons));
    double min_chi = 0.0;
    bool first = true;
    for (int m : spec.target_modes) {
        double a = std::abs(params.chi_m.at(static_cast<std::size_t>(m)));
        if (first || a < min_chi) min_chi = a;
        first = false;
    }
    v.upper = min_chi;
    v.valid = (v.lower < spec.rabi) && (spec.rabi < v.upper);
    return v;
}

ComplexMatrix build_dispersive_hamiltonian(const DeviceParams& params,
                                           const SystemLayout& layout) {
    if (layout.n_modes() != params.n_modes())
        throw std::invalid_argument("build_dispersive_hamiltonian: layout/device mode mismatch");
    const int D = layout.total_dim();
    ComplexMatrix H = ComplexMatrix::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        auto [lvl, occ] = layout.occupations_of(i);
        double e = (lvl >= 1) ? params.omega_q : 0.0;
        for (int m = 0; m < layout.n_modes(); ++m) {
            double n = occ[m];
            e += params.omega_m[m] * n;
            if (lvl >= 1) e += params.chi_m[m] * n;
            e += 0.5 * params.kerr_m[m] * n * (n - 1.0);
        }
        for (const auto& [key, k] : params.cross_kerr)
            e += k * occ[key.first] * occ[key.second];
        H(i, i) = e;
    }
    return H;
}

namespace {

ControlPair make_control_pair(const SystemLayout& layout, int site, const std::string& name) {
    const int d = layout.site_dim(site);
    ComplexMatrix a = annihilation_op(d);
    ComplexMatrix af = embed_operator(layout, site, a);
    ControlPair cp;
    cp.x = af + af.adjoint();
    cp.y = Complex(0.0, -1.0) * (af - ComplexMatrix(af.adjoint()));
    cp.name = name;
    return cp;
}

} // namespace

DriftControls build_blockade_hamiltonian(const DeviceParams& params, const SystemLayout& layout,
                                         const BlockadeSpec& spec, int mode) {
    if (layout.transmon_levels() != 2)
        throw std::invalid_argument("build_blockade_hamiltonian: transmon must have 2 levels");
    if (layout.n_modes() != 1)
        throw std::invalid_argument("build_blockade_hamiltonian: layout must have one mode");
    if (mode < 0 || mode >= params.n_modes())
        throw std::out_of_range("build_blockade_hamiltonian: mode out of range");
    const double chi = params.chi_m[mode];
    const double kerr = params.kerr_m[mode];
    const int n0 = spec.blockade_photons;
    const int D = layout.total_dim();

    ComplexMatrix H = ComplexMatrix::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        auto [lvl, occ] = layout.occupations_of(i);
        double n = occ[0];
        double e = 0.5 * kerr * n * (n - 1.0);
        if (lvl == 1) e += chi * (n - n0) - spec.detuning;
        H(i, i) = e;
    }
    ComplexMatrix ge = transmon_transition(layout, 0, 1);
    H += spec.rabi * (ge + ComplexMatrix(ge.adjoint()));

    DriftControls dc;
    dc.drift = std::move(H);
    dc.controls.push_back(make_control_pair(layout, 1, "mode" + std::to_string(mode)));
    return dc;
}

DriftControls build_multimode_blockade_hamiltonian(const DeviceParams& params,
                                                   const SystemLayout& layout,
                                                   const BlockadeSpec& spec) {
    if (layout.transmon_levels() != 2)
        throw std::invalid_argument("build_multimode_blockade_hamiltonian: transmon must have 2 levels");
    if (layout.n_modes() != static_cast<int>(spec.target_modes.size()))
        throw std::invalid_argument(
            "build_multimode_blockade_hamiltonian: layout mode count != target_modes size");
    const int M = layout.n_modes();
    const int D = layout.total_dim();

    ComplexMatrix H = ComplexMatrix::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        auto [lvl, occ] = layout.occupations_of(i);
        double e = 0.0;
        for (int j = 0; j < M; ++j) {
            const int dev = spec.target_modes[j];
            double n = occ[j];
            if (lvl == 1) e += params.chi_m.at(dev) * n;
            e += 0.5 * params.kerr_m.at(dev) * n * (n - 1.0);
        }
        if (lvl == 1) e -= spec.detuning;
        for (int j = 0; j < M; ++j)
            for (int k = j + 1; k < M; ++k)
                e += params.cross_kerr_of(spec.target_modes[j], spec.target_modes[k]) * occ[j] *
                     occ[k];
        H(i, i) = e;
    }
    ComplexMatrix ge = transmon_transition(layout, 0, 1);
    H += spec.rabi * (ge + ComplexMatrix(ge.adjoint()));

    DriftControls dc;
    dc.drift = std::move(H);
    for (int j = 0; j < M; ++j)
        dc.controls.push_back(
            make_control_pair(layout, j + 1, "mode" + std::to_string(spec.target_modes[j])));
    return dc;
}

double blockade_detuning(const std::vector<double>& chis, int total_photons,
                         const std::vector<int>& mode_subset) {
    if (mode_subset.empty())
        throw std::invalid_argument("blockade_detuning: empty mode subset");
    if (total_photons < 0)
        throw std::invalid_argument("blockade_detuning: negative photon number");
    // Enumerate all occupation patterns of `total_photons` photons over the
    // subset and average sum_m n_m chi_m.
    double sum = 0.0;
    long count = 0;
    const int M = static_cast<int>(mode_subset.size());
    std::vector<int> occ(M, 0);
    std::function<void(int, int, double)> rec = [&](int m, int left, double acc) {
        if (m == M - 1) {
            sum += acc + left * chis.at(static_cast<std::size_t>(mode_subset[m]));
            ++count;
            return;
        }
        for (int n = 0; n <= left; ++n)
            rec(m + 1, left - n, acc + n * chis.at(static_cast<std::size_t>(mode_subset[m])));
    };
    rec(0, total_photons, 0.0);
    return sum / static_cast<double>(count);
}

double dressed_ground_shift(double delta, double coupling) {
    if (delta == 0.0) return -std::abs(coupling);
    const double sgn = delta > 0.0 ? 1.0 : -1.0;
    return 0.5 * delta - sgn * std::sqrt(0.25 * delta * delta + coupling * coupling);
}

double stark_shift(int n, int n0, double chi, double omega, StarkOrder order) {
    if (order == StarkOrder::leading) {
        if (n == n0)
            throw std::invalid_argument("stark_shift: leading order undefined at n == n0");
        return -omega * omega / (4.0 * chi * (n - n0));
    }
    return dressed_ground_shift(chi * (n - n0), 0.5 * omega);
}

DriftControls reduced_blockade_hamiltonian(const DeviceParams& params, const BlockadeSpec& spec,
                                           int mode) {
    const int n0 = spec.blockade_photons;
    if (n0 < 2)
        throw std::invalid_argument("reduced_blockade_hamiltonian: blockade_photons must be >= 2");
    if (mode < 0 || mode >= params.n_modes())
        throw std::out_of_range("reduced_blockade_hamiltonian: mode out of range");
    const double chi = params.chi_m[mode];
    const double kerr = params.kerr_m[mode];

    ComplexMatrix H = ComplexMatrix::Zero(n0, n0);
    for (int n = 0; n < n0; ++n) {
        double e = stark_shift(n, n0, chi, 2.0 * spec.rabi, StarkOrder::exact);
        e += 0.5 * kerr * n * (n - 1.0);
        H(n, n) = e;
    }
    ComplexMatrix a = annihilation_op(n0);
    ControlPair cp;
    cp.x = a + ComplexMatrix(a.adjoint());
    cp.y = Complex(0.0, -1.0) * (a - ComplexMatrix(a.adjoint()));
    cp.name = "mode" + std::to_string(mode);

    DriftControls dc;
    dc.drift = std::move(H);
    dc.controls.push_back(std::move(cp));
    return dc;
}

} // namespace blockade
