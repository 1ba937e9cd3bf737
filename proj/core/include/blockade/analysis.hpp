#ifndef BLOCKADE_ANALYSIS_HPP
#define BLOCKADE_ANALYSIS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockade/operators.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

/// Revival probability of a cavity Ramsey experiment with a self-Kerr
/// cavity: P0(t) = |e^{-a^2} sum_n (a^{2n}/n!) e^{-i t n (omega + kerr n/2)}|^2.
/// omega and kerr are angular; the series is truncated once terms drop
/// below 1e-16.
double cavity_ramsey_signal(double t, double alpha, double omega, double kerr);

enum class FitModel { ramsey, cavity_ramsey };

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> params;
    Eigen::MatrixXd covariance;
    double residual = 0.0; // root-mean-square residual
    bool converged = false;
    bool degenerate = false; // covariance not invertible (e.g. constant data)

    double param(const std::string& name) const;
    void save_report(const std::string& path) const;
};

/// Damped least squares (Levenberg-style Gauss-Newton) with a deterministic
/// initial-guess policy (discrete-Fourier frequency seed).
/// ramsey: y = A cos(2 pi f t + phi) + c, params (amplitude, freq_hz,
/// phase, offset). cavity_ramsey: params (alpha, omega_rad, kerr_rad).
FitResult fit_oscillation(const std::vector<double>& ts, const std::vector<double>& ys,
                          FitModel model);

/// cavity_ramsey fit with known per-sample alpha (an alpha sweep);
/// params (omega_rad, kerr_rad).
FitResult fit_cavity_ramsey_sweep(const std::vector<double>& ts,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& ys);

/// (|10...0> + e^{i phi_1}|01...0> + ... ) / sqrt(N); `vec` lives on the
/// N-dimensional single-excitation subspace, component j = mode j excited.
struct WState {
    int n_modes = 0;
    std::vector<double> phases; // length N-1, phase of components 1..N-1
    ComplexVector vec;
};
WState w_state(int n_modes, const std::vector<double>& phases);

/// The same state on the full product space of the given mode truncations.
ComplexVector w_state_vector(int n_modes, const std::vector<double>& phases,
                             const std::vector<int>& dims);

struct WitnessResult {
    double value = 0.0;          // (N-1)/N - F_max
    std::vector<double> phases;  // argmax phases, length N-1
    double fidelity = 0.0;       // F_max
};

/// W-state entanglement witness of a cavity-space density matrix
/// (no transmon factor): maximizes the W overlap over the free phases
/// (coarse grid, then exact cyclic phase updates) and returns
/// (N-1)/N - F_max. Negative value certifies N-mode entanglement.
WitnessResult entanglement_witness(const ComplexMatrix& rho, const std::vector<int>& dims);

/// Per-mode Fock-phase gauge rotation (x) diag(e^{i n phi_m}) applied to a
/// cavity-space density matrix; used to make reported W coherences real.
ComplexMatrix apply_phase_gauge(const ComplexMatrix& rho, const std::vector<int>& dims,
                                const std::vector<double>& phases);

/// Measured drive calibration: strictly increasing AWG amplitudes with
/// their drive strengths, linearly interpolated with an odd copy reflected
/// about the origin. Lookups outside the calibrated range throw
/// std::out_of_range.
class TransferFunction {
public:
    TransferFunction(std::vector<double> amplitudes, std::vector<double> strengths);

    /// Drive strength at an AWG amplitude (odd-extended interpolation).
    double strength_at(double amplitude) const;
    /// Inverse: AWG amplitude producing the requested strength.
    double amplitude_for(double strength) const;

private:
    std::vector<double> amps_, strengths_; // positive branch incl. origin
};

/// Discrete Fourier magnitude of a channel's complex envelope, returned as
/// (frequency_hz ascending, |integral| magnitude) pairs.
std::pair<std::vector<double>, std::vector<double>> pulse_spectrum(const PulseSequence& pulse,
                                                                   int channel);

/// Coherent-state magnitude accumulated by a linear cavity detuned by
/// `detuning` (angular) from the drive frame: |alpha| =
/// |integral u(t) e^{i delta t} dt| / 2. The factor 2 pins the constant
/// envelope u, duration tau, on resonance to |alpha| = u tau / 2.
double coherent_response(const PulseSequence& pulse, int channel, double detuning);

} // namespace blockade

#endif
