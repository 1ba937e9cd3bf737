#include "blockade/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "blockade/matrix_io.hpp"

namespace blockade {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double cavity_ramsey_signal(double t, double alpha, double omega, double kerr) {
    if (alpha < 0.0) throw std::invalid_argument("cavity_ramsey_signal: alpha must be >= 0");
    const double a2 = alpha * alpha;
    Complex acc(0.0, 0.0);
    double term = std::exp(-a2); // e^{-a^2} a^{2n} / n!
    for (int n = 0;; ++n) {
        if (n > 0) term *= a2 / n;
        acc += term * std::exp(Complex(0.0, -t * n * (omega + 0.5 * kerr * n)));
        if (n > a2 && term < 1e-16) break;
    }
    return std::norm(acc);
}

namespace {

/// Coarse discrete-Fourier frequency seed (Hz) with the phase of the peak.
std::pair<double, double> dft_seed(const std::vector<double>& ts, const std::vector<double>& ys) {
    const std::size_t n = ts.size();
    double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double span = *std::max_element(ts.begin(), ts.end()) - *std::min_element(ts.begin(), ts.end());
    if (span <= 0.0) return {0.0, 0.0};
    double best_f = 0.0, best_mag = 0.0, best_phase = 0.0;
    for (std::size_t j = 1; j <= n / 2; ++j) {
        double f = static_cast<double>(j) / span;
        Complex c(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            c += (ys[k] - mean) * std::exp(Complex(0.0, -kTwoPi * f * ts[k]));
        if (std::abs(c) > best_mag) {
            best_mag = std::abs(c);
            best_f = f;
            best_phase = std::arg(c);
        }
    }
    return {best_f, best_phase};
}

using ModelFn = std::function<double(double t, const std::vector<double>& p)>;

FitResult damped_least_squares(const std::vector<double>& ts, const std::vector<double>& ys,
                               std::vector<double> p, const std::vector<double>& scales,
                               const ModelFn& model) {
    const int n = static_cast<int>(ts.size());
    const int np = static_cast<int>(p.size());
    auto sse_of = [&](const std::vector<double>& q) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = model(ts[i], q) - ys[i];
            s += r * r;
        }
        return s;
    };
    double sse = sse_of(p);
    double lambda = 1e-3;
    bool converged = false;
    for (int it = 0; it < 300; ++it) {
        Eigen::MatrixXd jac(n, np);
        Eigen::VectorXd res(n);
        for (int i = 0; i < n; ++i) res(i) = model(ts[i], p) - ys[i];
        for (int j = 0; j < np; ++j) {
            double h = 1e-7 * (std::abs(p[j]) + scales[j]);
            auto pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            for (int i = 0; i < n; ++i)
                jac(i, j) = (model(ts[i], pp) - model(ts[i], pm)) / (2.0 * h);
        }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd jtr = jac.transpose() * res;
        bool accepted = false;
        for (int inner = 0; inner < 40; ++inner) {
            Eigen::MatrixXd damped = jtj;
            for (int j = 0; j < np; ++j) damped(j, j) += lambda * (jtj(j, j) + 1e-30);
            Eigen::VectorXd step = damped.ldlt().solve(jtr);
            auto trial = p;
            for (int j = 0; j < np; ++j) trial[j] -= step(j);
            double trial_sse = sse_of(trial);
            if (trial_sse <= sse) {
                double rel = (sse - trial_sse) / (sse + 1e-300);
                p = trial;
                sse = trial_sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (rel < 1e-14) converged = true;
                break;
            }
            lambda *= 5.0;
        }
        if (!accepted || converged) {
            converged = true;
            break;
        }
    }

    FitResult out;
    out.params = p;
    out.converged = converged;
    out.residual = std::sqrt(sse / n);
    Eigen::MatrixXd jac(n, np);
    for (int j = 0; j < np; ++j) {
        double h = 1e-7 * (std::abs(p[j]) + scales[j]);
        auto pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        for (int i = 0; i < n; ++i)
            jac(i, j) = (model(ts[i], pp) - model(ts[i], pm)) / (2.0 * h);
    }
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible() && n > np) {
        double s2 = sse / (n - np);
        out.covariance = s2 * lu.inverse();
    } else {
        out.degenerate = true;
        out.covariance = Eigen::MatrixXd::Zero(np, np);
    }
    return out;
}

void check_series(const std::vector<double>& ts, const std::vector<double>& ys, int np) {
    if (ts.size() != ys.size()) throw std::invalid_argument("fit: t/y size mismatch");
    if (static_cast<int>(ts.size()) < 4 * np)
        throw std::invalid_argument("fit: need at least 4 samples per parameter");
}

} // namespace

double FitResult::param(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return params[i];
    throw std::invalid_argument("FitResult: unknown parameter " + name);
}

void FitResult::save_report(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("FitResult::save_report: cannot open " + path);
    for (std::size_t i = 0; i < names.size(); ++i) {
        double sigma = covariance.size() ? std::sqrt(std::max(0.0, covariance(i, i))) : 0.0;
        os << names[i] << " = " << format_double(params[i]) << " +- " << format_double(sigma)
           << "\n";
    }
    os << "rms_residual = " << format_double(residual) << "\n";
    os << "converged = " << (converged ? 1 : 0) << "\n";
    os << "degenerate = " << (degenerate ? 1 : 0) << "\n";
}

FitResult fit_oscillation(const std::vector<double>& ts, const std::vector<double>& ys,
                          FitModel model) {
    if (model == FitModel::ramsey) {
        check_series(ts, ys, 4);
        double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double ymax = *std::max_element(ys.begin(), ys.end());
        double ymin = *std::min_element(ys.begin(), ys.end());
        auto [f0, ph0] = dft_seed(ts, ys);
        std::vector<double> p = {0.5 * (ymax - ymin), f0, ph0, mean};
        double span = *std::max_element(ts.begin(), ts.end()) -
                      *std::min_element(ts.begin(), ts.end());
        std::vector<double> scales = {std::max(1e-6, 0.1 * (ymax - ymin + 1e-9)),
                                      0.01 / std::max(span, 1e-12), 1e-3,
                                      std::max(1e-6, 0.1 * (std::abs(mean) + 1e-9))};
        auto fn = [](double t, const std::vector<double>& q) {
            return q[0] * std::cos(kTwoPi * q[1] * t + q[2]) + q[3];
        };
        FitResult r = damped_least_squares(ts, ys, p, scales, fn);
        r.names = {"amplitude", "freq_hz", "phase", "offset"};
        if (r.params[1] < 0.0) { // frequency sign gauge
            r.params[1] = -r.params[1];
            r.params[2] = -r.params[2];
        }
        return r;
    }

    check_series(ts, ys, 3);
    double ymin =
        std::clamp(*std::min_element(ys.begin(), ys.end()), 1e-12, 1.0 - 1e-12);
    double a0 = std::clamp(std::sqrt(-std::log(ymin) / 4.0), 0.1, 3.0);
    auto [f0, ph0] = dft_seed(ts, ys);
    (void)ph0;
    std::vector<double> p = {a0, kTwoPi * f0, 0.0};
    double span =
        *std::max_element(ts.begin(), ts.end()) - *std::min_element(ts.begin(), ts.end());
    std::vector<double> scales = {0.05, kTwoPi * 0.01 / std::max(span, 1e-12),
                                  kTwoPi * 100.0};
    auto fn = [](double t, const std::vector<double>& q) {
        return cavity_ramsey_signal(t, std::abs(q[0]), q[1], q[2]);
    };
    FitResult r = damped_least_squares(ts, ys, p, scales, fn);
    r.params[0] = std::abs(r.params[0]);
    r.names = {"alpha", "omega_rad", "kerr_rad"};
    return r;
}

FitResult fit_cavity_ramsey_sweep(const std::vector<double>& ts,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& ys) {
    if (ts.size() != alphas.size()) throw std::invalid_argument("fit: t/alpha size mismatch");
    check_series(ts, ys, 2);

    // Frequency seed from the smallest-alpha block (most sinusoidal signal).
    double amin = *std::min_element(alphas.begin(), alphas.end());
    std::vector<double> tsub, ysub;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (alphas[i] < amin + 1e-9) {
            tsub.push_back(ts[i]);
            ysub.push_back(ys[i]);
        }
    auto [f0, ph0] = dft_seed(tsub, ysub);
    (void)ph0;

    // The model closure looks the per-sample alpha up by sample time order,
    // so fold (t, alpha) into one index passed through the t argument.
    std::vector<double> idx(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) idx[i] = static_cast<double>(i);
    auto fn = [&](double i, const std::vector<double>& q) {
        auto k = static_cast<std::size_t>(i);
        return cavity_ramsey_signal(ts[k], alphas[k], q[0], q[1]);
    };
    auto sse_of = [&](double omega, double kerr) {
        std::vector<double> q = {omega, kerr};
        double s = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            double r = fn(static_cast<double>(i), q) - ys[i];
            s += r * r;
        }
        return s;
    };
    // 2D seed grid: the low-alpha beat sits at omega + kerr/2 and the DFT
    // bin is coarse, so scan kerr candidates jointly with sub-bin frequency
    // offsets around the DFT peak.
    double span =
        *std::max_element(ts.begin(), ts.end()) - *std::min_element(ts.begin(), ts.end());
    const double bin = 1.0 / std::max(span, 1e-12);
    double best_k = 0.0, best_w = kTwoPi * f0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (double khz : {0.0, 1e3, -1e3, 3e3, -3e3, 10e3, -10e3, 30e3, -30e3})
        for (int j = -4; j <= 4; ++j) {
            double k = kTwoPi * khz;
            double w = kTwoPi * (f0 + 0.25 * j * bin) - 0.5 * k;
            double s = sse_of(w, k);
            if (s < best_sse) {
                best_sse = s;
                best_k = k;
                best_w = w;
            }
        }

    std::vector<double> p = {best_w, best_k};
    std::vector<double> scales = {kTwoPi * 0.01 / std::max(span, 1e-12), kTwoPi * 100.0};
    FitResult r = damped_least_squares(idx, ys, p, scales, fn);
    r.names = {"omega_rad", "kerr_rad"};
    return r;
}

WState w_state(int n_modes, const std::vector<double>& phases) {
    if (n_modes < 2) throw std::invalid_argument("w_state: need at least 2 modes");
    if (static_cast<int>(phases.size()) != n_modes - 1)
        throw std::invalid_argument("w_state: phases must have length N-1");
    WState w;
    w.n_modes = n_modes;
    w.phases = phases;
    w.vec = ComplexVector(n_modes);
    double norm = 1.0 / std::sqrt(static_cast<double>(n_modes));
    w.vec(0) = norm;
    for (int j = 1; j < n_modes; ++j) w.vec(j) = norm * std::exp(Complex(0.0, phases[j - 1]));
    return w;
}

ComplexVector w_state_vector(int n_modes, const std::vector<double>& phases,
                             const std::vector<int>& dims) {
    if (static_cast<int>(dims.size()) != n_modes)
        throw std::invalid_argument("w_state_vector: dims must have length N");
    WState w = w_state(n_modes, phases);
    SystemLayout lay(1, dims);
    ComplexVector v = ComplexVector::Zero(lay.total_dim());
    for (int j = 0; j < n_modes; ++j) {
        std::vector<int> occ(n_modes, 0);
        occ[j] = 1;
        v(lay.index_of(0, occ)) = w.vec(j);
    }
    return v;
}

WitnessResult entanglement_witness(const ComplexMatrix& rho, const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    if (n < 2) throw std::invalid_argument("entanglement_witness: need at least 2 modes");
    SystemLayout lay(1, dims);
    if (rho.rows() != lay.total_dim())
        throw std::invalid_argument("entanglement_witness: dimension mismatch");
    for (int d : dims)
        if (d < 2) throw std::invalid_argument("entanglement_witness: modes need >= 2 levels");

    // Single-excitation block of rho
    ComplexMatrix s(n, n);
    std::vector<int> ones(n);
    for (int j = 0; j < n; ++j) {
        std::vector<int> occ(n, 0);
        occ[j] = 1;
        ones[j] = lay.index_of(0, occ);
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s(j, k) = rho(ones[j], ones[k]);

    auto overlap = [&](const std::vector<double>& ph) {
        ComplexVector v(n);
        v(0) = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 1; j < n; ++j)
            v(j) = std::exp(Complex(0.0, ph[j - 1])) / std::sqrt(static_cast<double>(n));
        return std::real(Complex(v.dot(s * v)));
    };

    // Coarse grid, then exact cyclic coordinate maximization: with the other
    // phases fixed, F is a + 2 Re(b e^{i phi_m}) / N, maximized at -arg(b).
    const int grid = 64;
    std::vector<double> best_ph(n - 1, 0.0);
    double best_f = overlap(best_ph);
    std::vector<int> counter(n - 1, 0);
    while (true) {
        std::vector<double> ph(n - 1);
        for (int j = 0; j < n - 1; ++j) ph[j] = kTwoPi * counter[j] / grid;
        double f = overlap(ph);
        if (f > best_f) {
            best_f = f;
            best_ph = ph;
        }
        int j = 0;
        for (; j < n - 1; ++j) {
            if (++counter[j] < grid) break;
            counter[j] = 0;
        }
        if (j == n - 1) break;
    }
    for (int round = 0; round < 50; ++round) {
        double prev = best_f;
        for (int m = 1; m < n; ++m) {
            Complex b(0.0, 0.0);
            for (int l = 0; l < n; ++l) {
                if (l == m) continue;
                Complex phase_l =
                    l == 0 ? Complex(1.0, 0.0) : std::exp(Complex(0.0, best_ph[l - 1]));
                b += std::conj(phase_l) * s(l, m);
            }
            if (std::abs(b) > 0.0) best_ph[m - 1] = -std::arg(b);
        }
        best_f = overlap(best_ph);
        if (best_f - prev < 1e-13) break;
    }
    for (double& p : best_ph) {
        p = std::fmod(p, kTwoPi);
        if (p > kTwoPi / 2.0) p -= kTwoPi;
        if (p < -kTwoPi / 2.0) p += kTwoPi;
    }

    WitnessResult res;
    res.fidelity = best_f;
    res.phases = best_ph;
    res.value = static_cast<double>(n - 1) / n - best_f;
    return res;
}

ComplexMatrix apply_phase_gauge(const ComplexMatrix& rho, const std::vector<int>& dims,
                                const std::vector<double>& phases) {
    if (phases.size() != dims.size())
        throw std::invalid_argument("apply_phase_gauge: phase/mode count mismatch");
    SystemLayout lay(1, dims);
    if (rho.rows() != lay.total_dim())
        throw std::invalid_argument("apply_phase_gauge: dimension mismatch");
    ComplexVector u(lay.total_dim());
    for (int i = 0; i < lay.total_dim(); ++i) {
        auto [lvl, occ] = lay.occupations_of(i);
        (void)lvl;
        double acc = 0.0;
        for (std::size_t m = 0; m < dims.size(); ++m) acc += phases[m] * occ[m];
        u(i) = std::exp(Complex(0.0, acc));
    }
    return u.asDiagonal() * rho * u.conjugate().asDiagonal();
}

TransferFunction::TransferFunction(std::vector<double> amplitudes, std::vector<double> strengths) {
    if (amplitudes.size() != strengths.size() || amplitudes.size() < 2)
        throw std::invalid_argument("TransferFunction: need >= 2 matched samples");
    if (amplitudes.front() != 0.0) {
        amplitudes.insert(amplitudes.begin(), 0.0);
        strengths.insert(strengths.begin(), 0.0);
    }
    for (std::size_t i = 1; i < amplitudes.size(); ++i) {
        if (amplitudes[i] <= amplitudes[i - 1])
            throw std::invalid_argument("TransferFunction: amplitudes must strictly increase");
        if (strengths[i] < strengths[i - 1])
            throw std::invalid_argument("TransferFunction: strengths must be non-decreasing");
    }
    amps_ = std::move(amplitudes);
    strengths_ = std::move(strengths);
}

double TransferFunction::strength_at(double amplitude) const {
    double a = std::abs(amplitude);
    if (a > amps_.back() * (1.0 + 1e-12))
        throw std::out_of_range("TransferFunction: amplitude outside calibrated range");
    a = std::min(a, amps_.back());
    auto it = std::upper_bound(amps_.begin(), amps_.end(), a);
    std::size_t hi = std::min<std::size_t>(it - amps_.begin(), amps_.size() - 1);
    std::size_t lo = hi - 1;
    double frac = (a - amps_[lo]) / (amps_[hi] - amps_[lo]);
    double s = strengths_[lo] + frac * (strengths_[hi] - strengths_[lo]);
    return amplitude < 0.0 ? -s : s; // odd extension
}

double TransferFunction::amplitude_for(double strength) const {
    double s = std::abs(strength);
    if (s > strengths_.back() * (1.0 + 1e-12))
        throw std::out_of_range("TransferFunction: strength outside calibrated range");
    s = std::min(s, strengths_.back());
    auto it = std::upper_bound(strengths_.begin(), strengths_.end(), s);
    std::size_t hi = std::min<std::size_t>(it - strengths_.begin(), strengths_.size() - 1);
    std::size_t lo = hi - 1;
    double ds = strengths_[hi] - strengths_[lo];
    double frac = ds > 0.0 ? (s - strengths_[lo]) / ds : 0.0;
    double a = amps_[lo] + frac * (amps_[hi] - amps_[lo]);
    return strength < 0.0 ? -a : a;
}

std::pair<std::vector<double>, std::vector<double>> pulse_spectrum(const PulseSequence& pulse,
                                                                   int channel) {
    pulse.validate();
    if (channel < 0 || channel >= pulse.n_channels())
        throw std::invalid_argument("pulse_spectrum: channel out of range");
    const int s = pulse.steps();
    const auto& u = pulse.channels[channel];
    std::vector<double> freq, mag;
    for (int j = -(s / 2); j < (s + 1) / 2; ++j) {
        double f = j / (s * pulse.dt);
        Complex acc(0.0, 0.0);
        for (int k = 0; k < s; ++k)
            acc += u[k] * std::exp(Complex(0.0, -kTwoPi * f * (k + 0.5) * pulse.dt));
        freq.push_back(f);
        mag.push_back(std::abs(acc) * pulse.dt);
    }
    return {freq, mag};
}

double coherent_response(const PulseSequence& pulse, int channel, double detuning) {
    pulse.validate();
    if (channel < 0 || channel >= pulse.n_channels())
        throw std::invalid_argument("coherent_response: channel out of range");
    const auto& u = pulse.channels[channel];
    Complex acc(0.0, 0.0);
    for (int k = 0; k < pulse.steps(); ++k)
        acc += u[k] * std::exp(Complex(0.0, detuning * (k + 0.5) * pulse.dt));
    return 0.5 * std::abs(acc) * pulse.dt;
}

} // namespace blockade
