#ifndef BLOCKADE_HAMILTONIAN_HPP
#define BLOCKADE_HAMILTONIAN_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "blockade/config.hpp"
#include "blockade/operators.hpp"

namespace blockade {

/// Device parameters of the transmon–multimode-cavity system. All
/// frequencies are angular (rad/s) internally; config files carry Hz
/// through `*_hz` keys and get converted on ingest. Times are seconds
/// (`*_us` keys in configs).
struct DeviceParams {
    double omega_q = 0.0;               // transmon frequency
    std::vector<double> omega_m;        // mode frequencies
    std::vector<double> chi_m;          // dispersive shifts (negative here)
    std::vector<double> kerr_m;         // self-Kerr coefficients
    std::map<std::pair<int, int>, double> cross_kerr; // stored with m < n
    double T1_q = 0.0, T2_q = 0.0;      // transmon decay / decoherence times
    double nth_q = 0.0;                 // transmon thermal occupation
    std::vector<double> T1_m, T2_m;     // per-mode cavity times

    int n_modes() const { return static_cast<int>(chi_m.size()); }
    double cross_kerr_of(int m, int n) const;

    /// Throws std::invalid_argument on a physicality violation:
    /// T2_q > 2*T1_q, asymmetric cross-Kerr input, nth outside [0, 1),
    /// or mismatched per-mode list lengths.
    void validate() const;

    /// Sub-device keeping only the listed modes (in the given order);
    /// cross-Kerr entries are re-indexed accordingly.
    DeviceParams select_modes(const std::vector<int>& modes) const;

    /// Load from a key-value config. Expected keys: omega_q_hz,
    /// mode_freq_hz, chi_hz, kerr_hz (lists), cross_kerr_hz_<m>_<n>,
    /// t1_q_us, t2_q_us, nth_q, t1_m_us, t2_m_us (lists).
    static DeviceParams from_config(const Config& cfg);
};

/// Blockade drive specification. `rabi` is the transmon coupling that
/// appears directly in the drift, <g,n0|H|e,n0> = rabi; the level
/// splitting of the blockaded doublet is 2*rabi.
struct BlockadeSpec {
    std::vector<int> target_modes;
    int blockade_photons = 0;    // n0
    double rabi = 0.0;           // angular
    double detuning = 0.0;       // delta_nu_b, angular offset from omega_q
};

/// Validity-regime report for the blockade: eps*sqrt(n0) < rabi < min|chi|.
struct BlockadeValidity {
    double drive_amplitude; // eps, angular
    double lower;           // eps*sqrt(n0)
    double upper;           // min |chi| over target modes
    bool valid;
};
BlockadeValidity blockade_validity(const BlockadeSpec& spec, const DeviceParams& params,
                                   double drive_amplitude);

/// One driven mode's quadrature generator pair: x = a + a^dag,
/// y = -i(a - a^dag), lifted into the full space. The physical drive is
/// H_drive(t) = Re(u) x + Im(u) y for a complex envelope u(t).
struct ControlPair {
    ComplexMatrix x, y;
    std::string name;
};

struct DriftControls {
    ComplexMatrix drift;
    std::vector<ControlPair> controls;
};

/// Full dispersive Hamiltonian (lab frame, no drives): diagonal in the
/// Fock basis, with the cross-Kerr counted once per unordered pair.
ComplexMatrix build_dispersive_hamiltonian(const DeviceParams& params,
                                           const SystemLayout& layout);

/// Single-mode blockade frame: drift chi (N - n0)|e><e| + (kerr/2) N(N-1)
/// + rabi (|g><e| + |e><g|), plus the (x, y) control pair of the mode.
/// `mode` indexes into params; layout must be a single-mode, two-level
/// transmon space.
DriftControls build_blockade_hamiltonian(const DeviceParams& params, const SystemLayout& layout,
                                         const BlockadeSpec& spec, int mode);

/// Multimode blockade frame: drift (sum chi_m N_m - detuning)|e><e|
/// + Kerr + cross-Kerr (pair-once) + rabi (|g><e| + h.c.); one control
/// pair per target mode.
DriftControls build_multimode_blockade_hamiltonian(const DeviceParams& params,
                                                   const SystemLayout& layout,
                                                   const BlockadeSpec& spec);

/// Mean over all distinct N-photon occupation patterns of the subset of
/// sum_m n_m chi_m (the blockade drive detuning delta_nu_b).
double blockade_detuning(const std::vector<double>& chis, int total_photons,
                         const std::vector<int>& mode_subset);

enum class StarkOrder { leading, exact };

/// Ground-branch eigenvalue of the two-level block [[0, c], [c, delta]],
/// continuously connected to 0 as c -> 0 (and -|c| at delta = 0): the
/// energy shift a |g, pattern> state acquires from the transmon coupling
/// when its |e, pattern> partner sits at detuning `delta`.
double dressed_ground_shift(double delta, double coupling);

/// Blockade-drive Stark shift of |g,n>. `omega` here is the doublet
/// splitting parameter: omega = 2 * (drift coupling), i.e. twice
/// BlockadeSpec::rabi. leading: -omega^2 / (4 chi (n - n0)); exact: the
/// dressed-ground branch of the two-level block, relative to its
/// omega = 0 value. n == n0 is an error for `leading` (the level is
/// split by +-omega there, not Stark-shifted).
double stark_shift(int n, int n0, double chi, double omega, StarkOrder order);

/// Dressed-ground-state qudit model below the blockade: n0-dimensional
/// drift whose diagonal holds the exact Stark shifts of |g,0..n0-1>
/// (consistent with the full blockade-frame model at coupling
/// spec.rabi), plus the mode's (x, y) control pair. Requires n0 >= 2.
DriftControls reduced_blockade_hamiltonian(const DeviceParams& params, const BlockadeSpec& spec,
                                           int mode);

} // namespace blockade

#endif
