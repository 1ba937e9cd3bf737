#include "blockade/grape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "blockade/rng.hpp"

namespace blockade {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void ControlProblem::validate() const {
    if (steps < 2) throw std::invalid_argument("ControlProblem: steps must be >= 2");
    if (amplitude_cap <= 0.0) throw std::invalid_argument("ControlProblem: amplitude_cap <= 0");
    if (horizon <= 0.0) throw std::invalid_argument("ControlProblem: horizon <= 0");
    if (controls.empty()) throw std::invalid_argument("ControlProblem: no controls");
    const int d = dim();
    for (const auto& c : controls)
        if (c.x.rows() != d || c.y.rows() != d)
            throw std::invalid_argument("ControlProblem: control dimension mismatch");
    if (gate_mode()) {
        if (target_unitary.rows() != d || !is_unitary(target_unitary, 1e-8))
            throw std::invalid_argument("ControlProblem: target_unitary not unitary");
    } else {
        if (initial.size() != d || target.size() != d)
            throw std::invalid_argument("ControlProblem: state dimension mismatch");
        if (std::abs(initial.norm() - 1.0) > 1e-8 || std::abs(target.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("ControlProblem: states must be normalized");
    }
    for (const auto& [p, w] : forbidden) {
        if (p.rows() != d) throw std::invalid_argument("ControlProblem: forbidden dim mismatch");
        if (w < 0.0) throw std::invalid_argument("ControlProblem: negative forbidden weight");
    }
}

namespace {

struct Evaluation {
    double cost;
    double fidelity;
    Eigen::MatrixXd gradient; // steps x 2C; empty unless requested
};

// Combined forward/backward evaluation. The propagator of every step comes
// from its eigendecomposition, so the control derivative is exact for the
// piecewise-constant model: in the step eigenbasis,
// dU = (V^dag G V) .* Gamma with Gamma_jl = (e^{-i w_j dt} - e^{-i w_l dt})
// / (w_j - w_l) and Gamma_jj = -i dt e^{-i w_j dt}.
Evaluation evaluate(const ControlProblem& prob, const PulseSequence& pulse, bool want_gradient) {
    const int d = prob.dim();
    const int S = prob.steps;
    const int C = static_cast<int>(prob.controls.size());
    const double dt = prob.horizon / S;
    if (pulse.steps() != S || pulse.n_channels() != C)
        throw std::invalid_argument("grape: pulse shape does not match problem");

    const int B = prob.gate_mode() ? d : 1; // batch of propagated columns
    ComplexMatrix psi0(d, B);
    if (prob.gate_mode())
        psi0 = ComplexMatrix::Identity(d, d);
    else
        psi0.col(0) = prob.initial;

    ComplexMatrix ptilde; // combined weighted forbidden projector
    if (!prob.forbidden.empty()) {
        ptilde = ComplexMatrix::Zero(d, d);
        for (const auto& [p, w] : prob.forbidden) ptilde += w * p;
    }

    std::vector<ComplexMatrix> vs(S);
    std::vector<Eigen::VectorXd> ws(S);
    std::vector<ComplexMatrix> psis(S + 1);
    psis[0] = psi0;
    double penalty = 0.0;
    for (int k = 0; k < S; ++k) {
        ComplexMatrix H = prob.drift;
        for (int c = 0; c < C; ++c) {
            Complex u = pulse.channels[c][k];
            H += u.real() * prob.controls[c].x + u.imag() * prob.controls[c].y;
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
        vs[k] = es.eigenvectors();
        ws[k] = es.eigenvalues();
        ComplexVector ph(d);
        for (int i = 0; i < d; ++i) ph(i) = std::exp(Complex(0.0, -ws[k](i) * dt));
        psis[k + 1] = vs[k] * ph.asDiagonal() * (vs[k].adjoint() * psis[k]);
        if (ptilde.size())
            penalty += ((psis[k + 1].adjoint() * ptilde * psis[k + 1]).trace()).real();
    }

    Complex ov;
    if (prob.gate_mode())
        ov = (prob.target_unitary.adjoint() * psis[S]).trace() / static_cast<double>(d);
    else
        ov = prob.target.dot(psis[S].col(0));
    const double fid = std::norm(ov);

    Evaluation ev;
    ev.fidelity = fid;
    ev.cost = (1.0 - fid) + penalty;
    if (!want_gradient) return ev;

    ComplexMatrix lambda(d, B);
    if (prob.gate_mode())
        lambda = -(ov / static_cast<double>(d)) * prob.target_unitary;
    else
        lambda.col(0) = -ov * prob.target;
    if (ptilde.size()) lambda += ptilde * psis[S];

    ev.gradient = Eigen::MatrixXd::Zero(S, 2 * C);
    for (int k = S - 1; k >= 0; --k) {
        // lambda currently holds the adjoint at step index k+1
        ComplexMatrix lt = vs[k].adjoint() * lambda;     // eigenbasis
        ComplexMatrix pt = vs[k].adjoint() * psis[k];
        ComplexMatrix gamma(d, d);
        for (int j = 0; j < d; ++j) {
            for (int l = 0; l < d; ++l) {
                // (e^{-i wj dt} - e^{-i wl dt}) / (wj - wl) in the
                // cancellation-free midpoint-phase form, exact limit at wj = wl
                double x = 0.5 * (ws[k](j) - ws[k](l)) * dt;
                double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
                gamma(j, l) = Complex(0.0, -dt) * sinc *
                              std::exp(Complex(0.0, -0.5 * (ws[k](j) + ws[k](l)) * dt));
            }
        }
        ComplexMatrix outer = (lt.conjugate() * pt.transpose()).cwiseProduct(gamma);
        for (int c = 0; c < C; ++c) {
            ComplexMatrix gx = vs[k].adjoint() * prob.controls[c].x * vs[k];
            ComplexMatrix gy = vs[k].adjoint() * prob.controls[c].y * vs[k];
            ev.gradient(k, 2 * c) = 2.0 * (outer.cwiseProduct(gx)).sum().real();
            ev.gradient(k, 2 * c + 1) = 2.0 * (outer.cwiseProduct(gy)).sum().real();
        }
        // pull the adjoint back through U_k and add the step-k penalty term
        ComplexVector ph(d);
        for (int i = 0; i < d; ++i) ph(i) = std::exp(Complex(0.0, ws[k](i) * dt));
        lambda = vs[k] * ph.asDiagonal() * lt;
        if (k > 0 && ptilde.size()) lambda += ptilde * psis[k];
    }
    return ev;
}

void clamp_pulse(PulseSequence& pulse, double cap) {
    for (auto& ch : pulse.channels)
        for (auto& u : ch) {
            double m = std::abs(u);
            if (m > cap) u *= cap / m;
        }
}

PulseSequence pulse_from(const ControlProblem& prob, const Eigen::MatrixXd& params) {
    PulseSequence p;
    p.dt = prob.horizon / prob.steps;
    for (std::size_t c = 0; c < prob.controls.size(); ++c) {
        p.channel_names.push_back(prob.controls[c].name);
        std::vector<Complex> ch(prob.steps);
        for (int k = 0; k < prob.steps; ++k)
            ch[k] = Complex(params(k, 2 * c), params(k, 2 * c + 1));
        p.channels.push_back(std::move(ch));
    }
    return p;
}

Eigen::MatrixXd params_from(const PulseSequence& pulse) {
    Eigen::MatrixXd m(pulse.steps(), 2 * pulse.n_channels());
    for (int c = 0; c < pulse.n_channels(); ++c)
        for (int k = 0; k < pulse.steps(); ++k) {
            m(k, 2 * c) = pulse.channels[c][k].real();
            m(k, 2 * c + 1) = pulse.channels[c][k].imag();
        }
    return m;
}

} // namespace

double pulse_cost(const ControlProblem& problem, const PulseSequence& pulse) {
    problem.validate();
    return evaluate(problem, pulse, false).cost;
}

double pulse_fidelity(const ControlProblem& problem, const PulseSequence& pulse) {
    problem.validate();
    return evaluate(problem, pulse, false).fidelity;
}

Eigen::MatrixXd pulse_gradient(const ControlProblem& problem, const PulseSequence& pulse) {
    problem.validate();
    return evaluate(problem, pulse, true).gradient;
}

PulseResult optimize_pulse(const ControlProblem& problem, const GrapeConfig& config) {
    problem.validate();
    const int S = problem.steps;
    const int C = static_cast<int>(problem.controls.size());
    const double cap = problem.amplitude_cap;

    Rng rng(config.seed);
    Eigen::MatrixXd params(S, 2 * C);
    if (config.initial_pulse.steps() > 0) {
        if (config.initial_pulse.steps() != S ||
            config.initial_pulse.n_channels() != C)
            throw std::invalid_argument("optimize_pulse: initial_pulse shape mismatch");
        params = params_from(config.initial_pulse);
    } else {
        for (int k = 0; k < S; ++k)
            for (int c = 0; c < 2 * C; ++c) params(k, c) = rng.uniform(-cap / 10.0, cap / 10.0);
    }
    // spectral projection (optional), then the amplitude cap, in that order;
    // the band projector is cached as a dense matrix so the per-iteration
    // cost is one matrix-vector product per channel
    ComplexMatrix band_proj;
    if (config.bandlimit_halfwidth > 0.0) {
        const double dt = problem.horizon / S;
        if (config.bandlimit_halfwidth >= 0.5 / dt)
            throw std::invalid_argument("optimize_pulse: bandlimit at or above Nyquist");
        band_proj = ComplexMatrix::Zero(S, S);
        for (int j = 0; j < S; ++j) {
            double f = (j <= S / 2 ? j : j - S) / (S * dt);
            if (std::abs(f) > config.bandlimit_halfwidth) continue;
            for (int m = 0; m < S; ++m)
                for (int n = 0; n < S; ++n)
                    band_proj(m, n) +=
                        std::exp(Complex(0.0, kTwoPi * j * (m - n) / S)) / static_cast<double>(S);
        }
    }
    auto project = [&](PulseSequence& p) {
        if (band_proj.size() > 0)
            for (auto& ch : p.channels) {
                Eigen::Map<ComplexVector> u(ch.data(), S);
                u = (band_proj * u).eval();
            }
        clamp_pulse(p, cap);
    };
    PulseSequence pulse = pulse_from(problem, params);
    project(pulse);
    params = params_from(pulse);

    Evaluation ev = evaluate(problem, pulse, true);
    double best_cost = ev.cost;
    PulseSequence best_pulse = pulse;
    double best_fid = ev.fidelity;

    PulseResult res;
    bool hit_target = ev.fidelity >= config.fidelity_target;

    if (config.optimizer == "adam") {
        const double lr0 = config.learning_rate > 0.0 ? config.learning_rate : 1.5e3;
        // eps far below typical gradient scales: plateau gradients can be
        // ~1e-10 and a larger eps would crush the step size there
        const double b1 = 0.9, b2 = 0.999, eps = 1e-12;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(S, 2 * C);
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(S, 2 * C);
        for (int it = 1; it <= config.max_iters && !hit_target; ++it) {
            m = b1 * m + (1.0 - b1) * ev.gradient;
            v = b2 * v + (1.0 - b2) * ev.gradient.cwiseProduct(ev.gradient).eval();
            double bc1 = 1.0 - std::pow(b1, it);
            double bc2 = 1.0 - std::pow(b2, it);
            double lr = lr0 / (1.0 + static_cast<double>(it) / 4000.0);
            params -= lr * (m / bc1).cwiseQuotient(((v / bc2).cwiseSqrt().array() + eps).matrix());
            pulse = pulse_from(problem, params);
            project(pulse);
            params = params_from(pulse);
            ev = evaluate(problem, pulse, true);
            if (ev.cost < best_cost) {
                best_cost = ev.cost;
                best_pulse = pulse;
                best_fid = ev.fidelity;
            }
            res.cost_history.push_back(best_cost);
            if (ev.fidelity >= config.fidelity_target) hit_target = true;
        }
    } else if (config.optimizer == "gd") {
        double scale = config.learning_rate > 0.0 ? config.learning_rate : 1e-2;
        for (int it = 0; it < config.max_iters && !hit_target; ++it) {
            double gn = ev.gradient.norm();
            if (gn < 1e-12) break;
            bool accepted = false;
            while (scale >= 1e-14) {
                Eigen::MatrixXd trial = params - (scale * cap * cap) * ev.gradient;
                PulseSequence tp = pulse_from(problem, trial);
                project(tp);
                Evaluation tev = evaluate(problem, tp, true);
                if (tev.cost < ev.cost) {
                    params = params_from(tp);
                    pulse = tp;
                    ev = tev;
                    scale *= 1.5;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if (!accepted) break;
            if (ev.cost < best_cost) {
                best_cost = ev.cost;
                best_pulse = pulse;
                best_fid = ev.fidelity;
            }
            res.cost_history.push_back(best_cost);
            if (ev.fidelity >= config.fidelity_target) hit_target = true;
        }
    } else {
        throw std::invalid_argument("optimize_pulse: unknown optimizer " + config.optimizer);
    }

    res.pulse = best_pulse;
    res.closed_fidelity = pulse_fidelity(problem, best_pulse); // independent pass
    res.gradient_norm_final = evaluate(problem, best_pulse, true).gradient.norm();
    res.converged = hit_target || best_fid >= config.fidelity_target;
    return res;
}

PulseSequence bandlimit_pulse(const PulseSequence& pulse, double center, double halfwidth,
                              double amplitude_cap) {
    pulse.validate();
    const int S = pulse.steps();
    const double nyquist = 0.5 / pulse.dt;
    if (halfwidth >= nyquist)
        throw std::invalid_argument("bandlimit_pulse: halfwidth at or above Nyquist");
    if (halfwidth < 0.0) throw std::invalid_argument("bandlimit_pulse: negative halfwidth");

    PulseSequence out = pulse;
    // Plain O(S^2) DFT: S ~ a few hundred, and this avoids an FFT dependency.
    std::vector<Complex> spec(S);
    for (int c = 0; c < pulse.n_channels(); ++c) {
        const auto& u = pulse.channels[c];
        for (int j = 0; j < S; ++j) {
            Complex acc(0.0, 0.0);
            for (int k = 0; k < S; ++k)
                acc += u[k] * std::exp(Complex(0.0, -kTwoPi * j * k / S));
            double f = (j <= S / 2 ? j : j - S) / (S * pulse.dt);
            spec[j] = (std::abs(f - center) <= halfwidth) ? acc : Complex(0.0, 0.0);
        }
        for (int k = 0; k < S; ++k) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < S; ++j)
                acc += spec[j] * std::exp(Complex(0.0, kTwoPi * j * k / S));
            out.channels[c][k] = acc / static_cast<double>(S);
        }
    }
    if (std::isfinite(amplitude_cap)) clamp_pulse(out, amplitude_cap);
    return out;
}

} // namespace blockade
