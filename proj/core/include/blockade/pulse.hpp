#ifndef BLOCKADE_PULSE_HPP
#define BLOCKADE_PULSE_HPP

#include <string>
#include <vector>

#include "blockade/operators.hpp"

namespace blockade {

/// Piecewise-constant complex drive envelopes, one named channel per driven
/// mode, all in angular-frequency units. Amplitude k holds on
/// [k*dt, (k+1)*dt). The physical drive of channel c at step k is
/// Re(u) X_c + Im(u) Y_c in the quadrature convention of the Hamiltonian
/// builders.
struct PulseSequence {
    double dt = 0.0;
    std::vector<std::string> channel_names;
    std::vector<std::vector<Complex>> channels; // channels[c][k]

    int n_channels() const { return static_cast<int>(channels.size()); }
    int steps() const { return channels.empty() ? 0 : static_cast<int>(channels[0].size()); }
    double duration() const { return dt * steps(); }

    /// Throws std::invalid_argument on dt <= 0, name/channel count mismatch,
    /// or unequal channel lengths.
    void validate() const;

    /// Constant-amplitude pulse, one value per channel.
    static PulseSequence constant(double dt, int steps, const std::vector<std::string>& names,
                                  const std::vector<Complex>& amplitudes);

    /// CSV round trip: header `time, re(name0), im(name0), ...`, one row per
    /// step with the step start time.
    void save_csv(const std::string& path) const;
    static PulseSequence load_csv(const std::string& path);
};

} // namespace blockade

#endif
