#ifndef BLOCKADE_LINDBLAD_HPP
#define BLOCKADE_LINDBLAD_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockade/hamiltonian.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

/// One dissipator D[sqrt(rate) * op].
struct CollapseChannel {
    ComplexMatrix op;
    double rate = 0.0; // 1/s, >= 0
    std::string name;
};

/// The device's standard dissipator set: per-mode cavity decay
/// sqrt(kappa_m) a_m with kappa_m = 1/T1_m, transmon decay
/// sqrt(gamma_q (1+nth)) |g><e|, thermal excitation sqrt(gamma_q nth)
/// |e><g|, and pure dephasing sqrt(gamma_phi) |e><e| with
/// gamma_phi = 1/T2_q - 1/(2 T1_q). Cavity thermal occupation is treated
/// as zero. Zero-rate channels are dropped. Modes beyond the layout's
/// mode count are ignored; params must cover every layout mode.
std::vector<CollapseChannel> standard_channels(const DeviceParams& params,
                                               const SystemLayout& layout);

/// Thrown when propagation produces a non-finite or trace-violating state.
struct IntegrationError : std::runtime_error {
    double time;
    IntegrationError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;  // density samples (master equation)
    std::vector<ComplexVector> vectors; // state-vector samples (Schrodinger)
    bool is_density = true;

    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observables; // observables[o][sample]
    bool nonhermitian_warning = false;            // set by expectations()

    void save_csv(const std::string& path) const;
};

/// Lindblad master-equation propagation of rho0 under
/// H(t) = drift + sum_c Re(u_c) X_c + Im(u_c) Y_c, sampled at
/// `sample_times` (must be non-decreasing, within [0, duration]). Fixed-step
/// RK4 with step <= min(1/(50 max|H|), pulse.dt), max|H| the largest
/// absolute matrix entry of the drift plus cap-amplitude-weighted controls.
/// If the pulse has no channels, `controls` must be empty and the drift
/// alone evolves the state for max(sample_times).
TrajectoryResult evolve_master(const ComplexMatrix& drift,
                               const std::vector<ControlPair>& controls,
                               const PulseSequence& pulse,
                               const std::vector<CollapseChannel>& channels,
                               const ComplexMatrix& rho0,
                               const std::vector<double>& sample_times);

/// Closed-system propagation: piecewise-constant propagators
/// U_k = exp(-i H_k dt) composed in order, exact per segment.
TrajectoryResult evolve_schrodinger(const ComplexMatrix& drift,
                                    const std::vector<ControlPair>& controls,
                                    const PulseSequence& pulse, const ComplexVector& psi0,
                                    const std::vector<double>& sample_times);

/// Appends <O>(t) series for each named observable. Hermitian observables
/// must have imaginary residual < 1e-8 (internal check); a non-Hermitian
/// observable sets the trajectory's warning flag and records the real part.
void expectations(TrajectoryResult& traj, const std::vector<std::string>& names,
                  const std::vector<ComplexMatrix>& ops);

} // namespace blockade

#endif
