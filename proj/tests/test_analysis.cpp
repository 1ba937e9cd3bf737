#include <doctest.h>

#include <cmath>
#include <vector>

#include "blockade/analysis.hpp"
#include "blockade/rng.hpp"
#include "blockade/states.hpp"

using namespace blockade;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

TEST_CASE("kerr-free revival signal matches its closed form") {
    // with no self-Kerr the series sums to e^{-2 a^2} e^{2 a^2 cos(w t)}
    for (double alpha : {0.3, 0.7, 1.0, 1.5})
        for (double t : {0.0, 3e-6, 17e-6, 60e-6}) {
            double omega = kTwoPi * 12e3;
            double series = cavity_ramsey_signal(t, alpha, omega, 0.0);
            double closed = std::exp(-2.0 * alpha * alpha) *
                            std::exp(2.0 * alpha * alpha * std::cos(omega * t));
            CHECK(std::abs(series - closed) < 1e-12);
        }
}

TEST_CASE("witness is exactly -1/N on ideal W states") {
    for (int n : {2, 3}) {
        std::vector<double> phases(n - 1);
        for (int i = 0; i + 1 < n; ++i) phases[i] = 0.4 + 0.9 * i;
        std::vector<int> dims(n, 2);
        ComplexVector psi = w_state_vector(n, phases, dims);
        WitnessResult res = entanglement_witness(pure_density(psi), dims);
        CHECK(res.fidelity == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(res.value == doctest::Approx(-1.0 / n).epsilon(1e-10));
        // recovered phases reproduce the state (compare overlap, not angles,
        // to stay insensitive to 2 pi wrapping)
        ComplexVector found = w_state_vector(n, res.phases, dims);
        CHECK(std::abs(found.dot(psi)) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("witness penalizes separable states") {
    std::vector<int> dims = {2, 2};
    ComplexVector psi = ComplexVector::Zero(4);
    psi(2) = 1.0; // |10>, fidelity 1/2 with any two-mode W state
    WitnessResult res = entanglement_witness(pure_density(psi), dims);
    CHECK(res.value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("phase gauge makes W coherences real without changing the witness") {
    std::vector<int> dims = {2, 2, 2};
    std::vector<double> phases = {1.1, -0.7};
    ComplexMatrix rho = pure_density(w_state_vector(3, phases, dims));
    WitnessResult res = entanglement_witness(rho, dims);
    ComplexMatrix fixed = apply_phase_gauge(rho, dims, {0.0, -res.phases[0], -res.phases[1]});
    WitnessResult res2 = entanglement_witness(fixed, dims);
    CHECK(res2.value == doctest::Approx(res.value).epsilon(1e-10));
    // coherences between the single-excitation components are now real
    int i100 = 4, i010 = 2, i001 = 1;
    // phases come from an iterative maximization, so only ask for the
    // optimizer's own resolution here
    CHECK(std::abs(fixed(i100, i010).imag()) < 1e-6);
    CHECK(std::abs(fixed(i100, i001).imag()) < 1e-6);
}

TEST_CASE("ramsey fit recovers amplitude, frequency, phase and offset") {
    double A = 0.42, f = 11.5e3, phi = 0.6, c = 0.5;
    std::vector<double> ts, ys;
    for (int k = 0; k < 120; ++k) {
        double t = k * 1e-6;
        ts.push_back(t);
        ys.push_back(A * std::cos(kTwoPi * f * t + phi) + c);
    }
    FitResult fit = fit_oscillation(ts, ys, FitModel::ramsey);
    CHECK(fit.converged);
    CHECK(fit.param("amplitude") == doctest::Approx(A).epsilon(1e-6));
    CHECK(fit.param("freq_hz") == doctest::Approx(f).epsilon(1e-6));
    CHECK(fit.param("phase") == doctest::Approx(phi).epsilon(1e-5));
    CHECK(fit.param("offset") == doctest::Approx(c).epsilon(1e-6));
    CHECK(fit.residual < 1e-8);
}

TEST_CASE("constant data is flagged degenerate rather than fit") {
    std::vector<double> ts, ys;
    for (int k = 0; k < 40; ++k) {
        ts.push_back(k * 1e-6);
        ys.push_back(0.5);
    }
    FitResult fit = fit_oscillation(ts, ys, FitModel::ramsey);
    CHECK(fit.degenerate);
}

TEST_CASE("alpha-sweep fit recovers the rotation and kerr rates") {
    double omega = kTwoPi * 12e3;
    double kerr = -kTwoPi * 9e3;
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
    CHECK(fit.converged);
    CHECK(fit.param("omega_rad") == doctest::Approx(omega).epsilon(1e-6));
    CHECK(fit.param("kerr_rad") == doctest::Approx(kerr).epsilon(1e-6));
    CHECK(fit.residual < 1e-10);
}

TEST_CASE("transfer function interpolates with an odd extension") {
    TransferFunction tf({0.1, 0.2, 0.4}, {1e4, 2e4, 3e4});
    CHECK(tf.strength_at(0.05) == doctest::Approx(5e3));
    CHECK(tf.strength_at(0.3) == doctest::Approx(2.5e4));
    CHECK(tf.strength_at(-0.3) == doctest::Approx(-2.5e4));
    CHECK(tf.amplitude_for(2.5e4) == doctest::Approx(0.3));
    CHECK(tf.amplitude_for(-5e3) == doctest::Approx(-0.05));
    CHECK(tf.amplitude_for(tf.strength_at(0.17)) == doctest::Approx(0.17).epsilon(1e-12));
    CHECK_THROWS_AS((void)tf.strength_at(0.5), std::out_of_range);
    CHECK_THROWS_AS((void)tf.amplitude_for(4e4), std::out_of_range);
    CHECK_THROWS_AS(TransferFunction({0.2, 0.1}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("resonant coherent response of a flat pulse is u tau over two") {
    double eps = kTwoPi * 1e4;
    double tau = 25e-6;
    PulseSequence p = PulseSequence::constant(tau / 500, 500, {"m0"}, {Complex(eps, 0.0)});
    CHECK(coherent_response(p, 0, 0.0) == doctest::Approx(eps * tau / 2.0).epsilon(1e-12));
    CHECK(eps * tau / 2.0 == doctest::Approx(0.7853981633974483).epsilon(1e-12));
    // far off resonance the accumulated displacement is strongly suppressed
    CHECK(coherent_response(p, 0, kTwoPi * 2e6) < 0.01 * eps * tau / 2.0);
}

TEST_CASE("pulse spectrum magnitude is twice the coherent response on the grid") {
    Rng rng(41);
    PulseSequence p;
    p.dt = 2e-8;
    p.channel_names = {"m0"};
    p.channels.resize(1);
    for (int k = 0; k < 64; ++k) p.channels[0].push_back(rng.normal_complex() * 1e4);
    auto [freq, mag] = pulse_spectrum(p, 0);
    REQUIRE(freq.size() == 64);
    for (std::size_t j = 0; j < freq.size(); j += 7) {
        double resp = coherent_response(p, 0, -kTwoPi * freq[j]);
        CHECK(mag[j] == doctest::Approx(2.0 * resp).epsilon(1e-10));
    }
    CHECK_THROWS_AS((void)pulse_spectrum(p, 1), std::invalid_argument);
}
