#include <doctest.h>

#include <cmath>

#include "blockade/grape.hpp"
#include "blockade/rng.hpp"

using namespace blockade;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

ControlProblem random_problem(int d, int steps, Rng& rng) {
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

PulseSequence random_pulse(const ControlProblem& p, Rng& rng) {
    PulseSequence u;
    u.dt = p.horizon / p.steps;
    u.channel_names = {"m0"};
    u.channels.resize(1);
    for (int k = 0; k < p.steps; ++k)
        u.channels[0].push_back(rng.normal_complex() * (p.amplitude_cap / 4.0));
    return u;
}

} // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(21);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + rng.index(3);
        ControlProblem p = random_problem(d, 6, rng);
        if (trial % 3 == 0) {
            // exercise the penalty path too
            ComplexMatrix proj = ComplexMatrix::Zero(d, d);
            proj(d - 1, d - 1) = 1.0;
            p.forbidden.push_back({proj, 0.3});
        }
        PulseSequence u = random_pulse(p, rng);
        Eigen::MatrixXd g = pulse_gradient(p, u);
        Eigen::MatrixXd fd(p.steps, 2);
        const double h = 1e-2; // amplitude step, rad/s
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
    CHECK(worst < 1e-5);
}

TEST_CASE("gate-mode gradient matches finite differences") {
    Rng rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        int d = 3;
        ControlProblem p = random_problem(d, 5, rng);
        p.target_unitary = ComplexMatrix::Zero(d, d);
        for (int n = 0; n < d; ++n) p.target_unitary((n + 1) % d, n) = 1.0;
        PulseSequence u = random_pulse(p, rng);
        Eigen::MatrixXd g = pulse_gradient(p, u);
        const double h = 1e-2;
        for (int k = 0; k < p.steps; ++k) {
            PulseSequence up = u, um = u;
            up.channels[0][k] += Complex(h, 0.0);
            um.channels[0][k] -= Complex(h, 0.0);
            double fd = (pulse_cost(p, up) - pulse_cost(p, um)) / (2.0 * h);
            CHECK(std::abs(g(k, 0) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("optimizer is deterministic per seed") {
    Rng rng(23);
    ControlProblem p = random_problem(3, 8, rng);
    GrapeConfig cfg;
    cfg.optimizer = "adam";
    cfg.seed = 5;
    cfg.max_iters = 40;
    PulseResult a = optimize_pulse(p, cfg);
    PulseResult b = optimize_pulse(p, cfg);
    REQUIRE(a.cost_history.size() == b.cost_history.size());
    for (std::size_t i = 0; i < a.cost_history.size(); ++i)
        CHECK(a.cost_history[i] == b.cost_history[i]);
    for (int k = 0; k < p.steps; ++k) CHECK(a.pulse.channels[0][k] == b.pulse.channels[0][k]);
}

TEST_CASE("cost history is monotone best-so-far and respects the cap") {
    Rng rng(24);
    ControlProblem p = random_problem(3, 10, rng);
    GrapeConfig cfg;
    cfg.optimizer = "gd";
    cfg.seed = 2;
    cfg.max_iters = 60;
    PulseResult r = optimize_pulse(p, cfg);
    for (std::size_t i = 1; i < r.cost_history.size(); ++i)
        CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
    for (Complex u : r.pulse.channels[0]) CHECK(std::abs(u) <= p.amplitude_cap * (1.0 + 1e-12));
}

TEST_CASE("band limiting keeps in-band pulses intact and rejects bad widths") {
    PulseSequence u;
    u.dt = 5e-8;
    u.channel_names = {"m0"};
    u.channels.resize(1);
    const int S = 64;
    const double f = 3.0 / (S * u.dt); // an exact grid frequency
    for (int k = 0; k < S; ++k)
        u.channels[0].push_back(std::exp(Complex(0.0, kTwoPi * f * (k * u.dt))) * 100.0);
    PulseSequence v = bandlimit_pulse(u, 0.0, 2.0 * f, 1e9);
    for (int k = 0; k < S; ++k) CHECK(std::abs(v.channels[0][k] - u.channels[0][k]) < 1e-9);
    // filtering away the tone removes it entirely
    PulseSequence w = bandlimit_pulse(u, 0.0, 0.5 * f, 1e9);
    for (int k = 0; k < S; ++k) CHECK(std::abs(w.channels[0][k]) < 1e-9);
    CHECK_THROWS_AS((void)bandlimit_pulse(u, 0.0, 0.6 / u.dt, 1e9), std::invalid_argument);
}

TEST_CASE("warm starts and in-band projection are honored") {
    Rng rng(25);
    ControlProblem p = random_problem(3, 16, rng);
    GrapeConfig cfg;
    cfg.optimizer = "adam";
    cfg.seed = 1;
    cfg.max_iters = 10;
    cfg.bandlimit_halfwidth = 2.0 / p.horizon;
    PulseResult r = optimize_pulse(p, cfg);
    // result spectrum must be confined to the requested band
    PulseSequence filtered = bandlimit_pulse(r.pulse, 0.0, cfg.bandlimit_halfwidth, 1e9);
    double out_of_band = 0.0;
    for (int k = 0; k < p.steps; ++k)
        out_of_band = std::max(out_of_band,
                               std::abs(filtered.channels[0][k] - r.pulse.channels[0][k]));
    CHECK(out_of_band < 1e-8);

    GrapeConfig warm = cfg;
    warm.initial_pulse = r.pulse;
    warm.max_iters = 0;
    PulseResult r2 = optimize_pulse(p, warm);
    CHECK(r2.closed_fidelity == doctest::Approx(r.closed_fidelity).epsilon(1e-12));
}
