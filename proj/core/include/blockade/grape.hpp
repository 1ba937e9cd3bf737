#ifndef BLOCKADE_GRAPE_HPP
#define BLOCKADE_GRAPE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockade/hamiltonian.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

/// State-transfer (or unitary-synthesis) control problem on a drift plus
/// complex-envelope quadrature controls. If `target_unitary` is non-empty
/// the problem is in gate mode and `initial`/`target` are ignored.
struct ControlProblem {
    ComplexMatrix drift;
    std::vector<ControlPair> controls;
    ComplexVector initial;
    ComplexVector target;
    ComplexMatrix target_unitary; // empty unless gate mode
    double horizon = 0.0;         // s
    int steps = 0;
    double amplitude_cap = 0.0;   // angular; per-channel complex magnitude
    /// Penalty projectors: cost += weight * sum_k <psi_k|P|psi_k>.
    std::vector<std::pair<ComplexMatrix, double>> forbidden;

    bool gate_mode() const { return target_unitary.size() > 0; }
    int dim() const { return static_cast<int>(drift.rows()); }
    void validate() const;
};

struct GrapeConfig {
    std::string optimizer = "gd"; // "gd" (backtracking line search) or "adam"
    std::uint64_t seed = 1;
    int max_iters = 2000;
    double fidelity_target = 1.0; // stop once closed fidelity reaches this
    double learning_rate = 0.0;   // 0 = optimizer-specific default
    /// > 0: project every iterate onto the band |f| <= this halfwidth (Hz),
    /// so the converged pulse carries no out-of-band structure.
    double bandlimit_halfwidth = 0.0;
    /// Non-empty: start from this pulse instead of a random seed (its step
    /// count must match the problem).
    PulseSequence initial_pulse;
};

struct PulseResult {
    PulseSequence pulse;
    double closed_fidelity = 0.0; // independent forward propagation
    std::vector<double> cost_history; // best-so-far cost per iteration
    double gradient_norm_final = 0.0;
    bool converged = false; // reached fidelity_target
};

/// Cost of a pulse: (1 - fidelity) + forbidden-state penalties.
double pulse_cost(const ControlProblem& problem, const PulseSequence& pulse);

/// Closed-system fidelity of a pulse (no penalties).
double pulse_fidelity(const ControlProblem& problem, const PulseSequence& pulse);

/// Exact cost gradient: steps x (2 * n_controls) array, columns ordered
/// (Re u_0, Im u_0, Re u_1, ...). Computed by a forward/backward sweep with
/// the exact propagator derivative from the per-step eigendecomposition
/// (no finite-dt truncation beyond the piecewise-constant model itself).
Eigen::MatrixXd pulse_gradient(const ControlProblem& problem, const PulseSequence& pulse);

/// Constrained first-order optimization from a small seeded random start;
/// amplitudes are clamped to the cap after every update. Never throws on
/// non-convergence: returns best-so-far with `converged` false.
PulseResult optimize_pulse(const ControlProblem& problem, const GrapeConfig& config);

/// Hard spectral mask: zero every discrete-frequency component of each
/// channel outside |f - center| <= halfwidth (Hz), then re-clamp magnitudes
/// to amplitude_cap (pass +inf to skip). Throws std::invalid_argument if
/// halfwidth >= Nyquist of dt.
PulseSequence bandlimit_pulse(const PulseSequence& pulse, double center, double halfwidth,
                              double amplitude_cap);

} // namespace blockade

#endif
