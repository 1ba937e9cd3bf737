#include "blockade/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "blockade/matrix_io.hpp"
#include "blockade/rng.hpp"

namespace blockade {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

int product_of(const std::vector<int>& dims) {
    int d = 1;
    for (int x : dims) d *= x;
    return d;
}

// flat index -> occupations (last mode fastest, matching SystemLayout)
std::vector<int> occ_of(int index, const std::vector<int>& dims) {
    std::vector<int> occ(dims.size());
    for (std::size_t m = dims.size(); m-- > 0;) {
        occ[m] = index % dims[m];
        index /= dims[m];
    }
    return occ;
}

/// Displacement operators from one cached eigendecomposition: with
/// S = a^dag - a = V diag(-i w) V^dag (i S Hermitian) and the Fock-phase
/// rotation Phi = diag(e^{i n phi}), D(|a| e^{i phi}) = Phi V e^{-i |a| w}
/// V^dag Phi^dag. One diagonal exponential and two small multiplies per
/// displacement instead of a fresh matrix exponential.
class DisplacementFactory {
public:
    explicit DisplacementFactory(int dim) : dim_(dim) {
        ComplexMatrix a = annihilation_op(dim);
        ComplexMatrix herm = Complex(0.0, 1.0) * (ComplexMatrix(a.adjoint()) - a);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
        v_ = es.eigenvectors();
        w_ = es.eigenvalues();
    }

    ComplexMatrix op(Complex alpha) const {
        double r = std::abs(alpha);
        double phi = std::arg(alpha);
        ComplexVector ph(dim_);
        for (int i = 0; i < dim_; ++i) ph(i) = std::exp(Complex(0.0, -r * w_(i)));
        ComplexMatrix core = v_ * ph.asDiagonal() * v_.adjoint();
        ComplexVector rot(dim_);
        for (int n = 0; n < dim_; ++n) rot(n) = std::exp(Complex(0.0, n * phi));
        return rot.asDiagonal() * core * rot.conjugate().asDiagonal();
    }

private:
    int dim_;
    ComplexMatrix v_;
    Eigen::VectorXd w_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Precomputed context for fast measurement-matrix rows: per-mode
/// displacement factories, index bookkeeping between the op-space product
/// basis and the recon subspace, and the Hermitian-basis packing.
class RowBuilder {
public:
    RowBuilder(const std::vector<int>& op_dims, const std::vector<int>& recon_dims)
        : op_dims_(op_dims), recon_dims_(recon_dims), dop_(product_of(op_dims)),
          drec_(product_of(recon_dims)) {
        for (int d : op_dims_) factories_.emplace_back(d);
        for (int i = 0; i < dop_; ++i) op_occ_.push_back(occ_of(i, op_dims_));
        for (int r = 0; r < drec_; ++r) {
            auto occ = occ_of(r, recon_dims_);
            int flat = 0;
            for (std::size_t m = 0; m < op_dims_.size(); ++m) flat = flat * op_dims_[m] + occ[m];
            rec_to_op_.push_back(flat);
        }
    }

    int recon_dim() const { return drec_; }
    int n_coords() const { return drec_ * drec_; }

    /// W restricted to the recon block, via the row slice T of the joint
    /// displacement: W_sub = T diag(cos) T^dag.
    ComplexMatrix wigner_block(const WignerSetting& s, bool product_form) const {
        const int m_count = static_cast<int>(op_dims_.size());
        std::vector<ComplexMatrix> disp;
        for (int m = 0; m < m_count; ++m) disp.push_back(factories_[m].op(s.alphas[m]));
        ComplexMatrix t(drec_, dop_);
        for (int r = 0; r < drec_; ++r) {
            auto r_occ = occ_of(rec_to_op_[r], op_dims_);
            for (int n = 0; n < dop_; ++n) {
                Complex v(1.0, 0.0);
                for (int m = 0; m < m_count; ++m) v *= disp[m](r_occ[m], op_occ_[n][m]);
                t(r, n) = v;
            }
        }
        Eigen::VectorXd cosv(dop_);
        for (int n = 0; n < dop_; ++n) {
            if (product_form) {
                double c = 1.0;
                for (int m = 0; m < m_count; ++m) c *= std::cos(s.thetas[m] * op_occ_[n][m]);
                cosv(n) = c;
            } else {
                double acc = 0.0;
                for (int m = 0; m < m_count; ++m) acc += s.thetas[m] * op_occ_[n][m];
                cosv(n) = std::cos(acc);
            }
        }
        return t * cosv.asDiagonal() * t.adjoint();
    }

    Eigen::VectorXd row(const WignerSetting& s, bool product_form) const {
        return pack(wigner_block(s, product_form));
    }

    /// Hermitian-basis coordinates: diag entries first, then per pair
    /// (i < j) the sqrt(2)-scaled real and (negated) imaginary parts.
    Eigen::VectorXd pack(const ComplexMatrix& w) const {
        const double rt2 = std::sqrt(2.0);
        Eigen::VectorXd r(n_coords());
        int k = 0;
        for (int i = 0; i < drec_; ++i) r(k++) = w(i, i).real();
        for (int i = 0; i < drec_; ++i)
            for (int j = i + 1; j < drec_; ++j) {
                r(k++) = rt2 * w(i, j).real();
                r(k++) = -rt2 * w(i, j).imag();
            }
        return r;
    }

    ComplexMatrix unpack(const Eigen::VectorXd& r) const {
        const double rt2 = std::sqrt(2.0);
        ComplexMatrix w = ComplexMatrix::Zero(drec_, drec_);
        int k = 0;
        for (int i = 0; i < drec_; ++i) w(i, i) = r(k++);
        for (int i = 0; i < drec_; ++i)
            for (int j = i + 1; j < drec_; ++j) {
                double re = r(k++) / rt2;
                double im = -r(k++) / rt2;
                w(i, j) = Complex(re, im);
                w(j, i) = Complex(re, -im);
            }
        return w;
    }

private:
    std::vector<int> op_dims_, recon_dims_;
    int dop_, drec_;
    std::vector<DisplacementFactory> factories_;
    std::vector<std::vector<int>> op_occ_;
    std::vector<int> rec_to_op_;
};

} // namespace

void WignerPointSet::validate() const {
    if (op_dims.size() != recon_dims.size() || op_dims.empty())
        throw std::invalid_argument("WignerPointSet: dim lists empty or mismatched");
    for (std::size_t m = 0; m < op_dims.size(); ++m)
        if (recon_dims[m] < 1 || op_dims[m] < recon_dims[m])
            throw std::invalid_argument("WignerPointSet: recon_dims must fit inside op_dims");
    for (const auto& s : settings) {
        if (s.alphas.size() != op_dims.size() || s.thetas.size() != op_dims.size())
            throw std::invalid_argument("WignerPointSet: setting arity mismatch");
        for (double th : s.thetas)
            if (th <= 0.0 || th >= kTwoPi)
                throw std::invalid_argument("WignerPointSet: theta outside (0, 2pi)");
    }
}

ComplexMatrix generalized_wigner_operator(const std::vector<int>& op_dims,
                                          const std::vector<Complex>& alphas,
                                          const std::vector<double>& thetas,
                                          bool product_form) {
    if (alphas.size() != op_dims.size() || thetas.size() != op_dims.size())
        throw std::invalid_argument("generalized_wigner_operator: arity mismatch");
    ComplexMatrix d = ComplexMatrix::Identity(1, 1);
    for (std::size_t m = 0; m < op_dims.size(); ++m)
        d = kron(d, displacement_op(op_dims[m], alphas[m]));
    const int dop = product_of(op_dims);
    Eigen::VectorXd cosv(dop);
    for (int n = 0; n < dop; ++n) {
        auto occ = occ_of(n, op_dims);
        if (product_form) {
            double c = 1.0;
            for (std::size_t m = 0; m < op_dims.size(); ++m) c *= std::cos(thetas[m] * occ[m]);
            cosv(n) = c;
        } else {
            double acc = 0.0;
            for (std::size_t m = 0; m < op_dims.size(); ++m) acc += thetas[m] * occ[m];
            cosv(n) = std::cos(acc);
        }
    }
    return d * cosv.asDiagonal() * d.adjoint();
}

Eigen::MatrixXd build_measurement_matrix(const WignerPointSet& point_set, double& kappa,
                                         int jobs) {
    point_set.validate();
    RowBuilder rb(point_set.op_dims, point_set.recon_dims);
    const int n = static_cast<int>(point_set.settings.size());
    Eigen::MatrixXd m(n, rb.n_coords());

    jobs = std::max(1, jobs);
    auto work = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            m.row(i) = rb.row(point_set.settings[i], point_set.product_form).transpose();
    };
    if (jobs == 1 || n < 2 * jobs) {
        work(0, n);
    } else {
        std::vector<std::thread> threads;
        int chunk = (n + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j)
            threads.emplace_back(work, j * chunk, std::min(n, (j + 1) * chunk));
        for (auto& t : threads) t.join();
    }

    if (n < rb.n_coords())
        throw std::runtime_error("build_measurement_matrix: uninvertible point set "
                                 "(fewer settings than basis coordinates)");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (smin < 1e-12)
        throw std::runtime_error("build_measurement_matrix: uninvertible point set");
    kappa = smax / smin;
    return m;
}

WignerPointSet optimize_point_set(const std::vector<int>& op_dims,
                                  const std::vector<int>& recon_dims, int n_tuples,
                                  const PointSetOptions& options, std::uint64_t seed) {
    const int n_modes = static_cast<int>(op_dims.size());
    std::vector<std::vector<double>> angle_sets = options.angle_sets;
    if (angle_sets.empty()) angle_sets.push_back(std::vector<double>(n_modes, kPi));
    for (const auto& a : angle_sets)
        if (static_cast<int>(a.size()) != n_modes)
            throw std::invalid_argument("optimize_point_set: angle set arity mismatch");
    const int na = static_cast<int>(angle_sets.size());

    RowBuilder rb(op_dims, recon_dims);
    const int nc = rb.n_coords();
    if (n_tuples * na < nc)
        throw std::invalid_argument("optimize_point_set: too few settings for the basis");

    const bool use_kappa =
        options.objective == "kappa" || (options.objective == "auto" && n_modes == 1);
    int max_op = *std::max_element(op_dims.begin(), op_dims.end());
    const double rmax = options.rmax > 0.0 ? options.rmax : 0.4 * std::sqrt(max_op);

    Rng rng(seed);
    auto fresh = [&]() {
        double r = rng.uniform(0.0, rmax);
        double ph = rng.uniform();
        return r * std::exp(Complex(0.0, kTwoPi * ph));
    };

    std::vector<std::vector<Complex>> tuples(n_tuples, std::vector<Complex>(n_modes));
    for (auto& t : tuples)
        for (auto& a : t) a = fresh();

    auto make_setting = [&](const std::vector<Complex>& als, int j) {
        WignerSetting s;
        s.alphas = als;
        s.thetas = angle_sets[j];
        return s;
    };

    Eigen::MatrixXd m(n_tuples * na, nc);
    for (int t = 0; t < n_tuples; ++t)
        for (int j = 0; j < na; ++j)
            m.row(t * na + j) = rb.row(make_setting(tuples[t], j), false).transpose();
    Eigen::MatrixXd a_mat = m.transpose() * m;

    auto objective = [&](const Eigen::MatrixXd& a) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues().minCoeff();
        double lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
        if (use_kappa) return std::sqrt(lmax / lmin);
        double acc = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) acc += 1.0 / es.eigenvalues()(i);
        return std::sqrt(acc);
    };

    double obj = objective(a_mat);
    double best_obj = obj;
    auto best_tuples = tuples;

    const int proposals = options.n_proposals;
    std::vector<Eigen::VectorXd> old_rows(na), new_rows(na);
    for (int p = 0; p < proposals; ++p) {
        const double frac = static_cast<double>(p) / proposals;
        const int t = rng.index(n_tuples);
        const int mm = n_modes == 1 ? 0 : rng.index(n_modes);
        const Complex old = tuples[t][mm];

        double sc, temp;
        bool relative_temp;
        Complex cand;
        if (n_modes == 1) {
            sc = 0.4 * std::pow(1.0 - frac, 1.5) + 0.02;
            temp = 0.08 * (1.0 - frac) * (1.0 - frac) + 1e-4;
            relative_temp = false;
            cand = rng.uniform() < 0.9 ? old + sc * rng.normal_complex() : fresh();
        } else {
            sc = 0.3 * std::pow(1.0 - frac, 1.5) + 0.02;
            temp = 0.05 * (1.0 - frac) * (1.0 - frac) + 5e-5;
            relative_temp = true;
            cand = old + sc * rng.normal_complex();
        }
        if (std::abs(cand) > rmax) continue;

        tuples[t][mm] = cand;
        for (int j = 0; j < na; ++j) {
            old_rows[j] = m.row(t * na + j);
            new_rows[j] = rb.row(make_setting(tuples[t], j), false);
            a_mat.noalias() -= old_rows[j] * old_rows[j].transpose();
            a_mat.noalias() += new_rows[j] * new_rows[j].transpose();
            m.row(t * na + j) = new_rows[j].transpose();
        }
        double obj2 = objective(a_mat);
        bool accept = obj2 < obj;
        if (!accept) {
            double scale = relative_temp ? temp * obj : temp;
            accept = rng.uniform() < std::exp(-(obj2 - obj) / scale);
        }
        if (accept) {
            obj = obj2;
            if (obj < best_obj) {
                best_obj = obj;
                best_tuples = tuples;
            }
        } else {
            tuples[t][mm] = old;
            for (int j = 0; j < na; ++j) {
                a_mat.noalias() -= new_rows[j] * new_rows[j].transpose();
                a_mat.noalias() += old_rows[j] * old_rows[j].transpose();
                m.row(t * na + j) = old_rows[j].transpose();
            }
        }
    }

    WignerPointSet ps;
    ps.op_dims = op_dims;
    ps.recon_dims = recon_dims;
    for (int t = 0; t < n_tuples; ++t)
        for (int j = 0; j < na; ++j) ps.settings.push_back(make_setting(best_tuples[t], j));
    double kappa = 0.0;
    build_measurement_matrix(ps, kappa);
    ps.condition_number = kappa;
    return ps;
}

MeasurementRecord simulate_measurements(const ComplexMatrix& rho_true,
                                        const WignerPointSet& point_set, double noise_sigma,
                                        std::uint64_t seed) {
    point_set.validate();
    if (noise_sigma < 0.0)
        throw std::invalid_argument("simulate_measurements: negative noise sigma");
    const int dop = product_of(point_set.op_dims);
    if (rho_true.rows() != dop)
        throw std::invalid_argument("simulate_measurements: rho dimension != op space");
    Rng rng(seed);
    MeasurementRecord rec;
    for (const auto& s : point_set.settings) {
        ComplexMatrix w = generalized_wigner_operator(point_set.op_dims, s.alphas, s.thetas,
                                                      point_set.product_form);
        double x = (w * rho_true).trace().real();
        if (noise_sigma > 0.0) x += noise_sigma * rng.normal();
        rec.values.push_back(x);
        rec.sigmas.push_back(noise_sigma);
    }
    return rec;
}

ReconstructionResult reconstruct(const WignerPointSet& point_set,
                                 const MeasurementRecord& record) {
    point_set.validate();
    if (record.values.size() != point_set.settings.size())
        throw std::invalid_argument("reconstruct: record/settings size mismatch");
    ReconstructionResult res;
    Eigen::MatrixXd m = build_measurement_matrix(point_set, res.condition_number);
    const int nc = static_cast<int>(m.cols());
    const int drec = product_of(point_set.recon_dims);

    Eigen::VectorXd x(record.values.size());
    for (std::size_t i = 0; i < record.values.size(); ++i) x(i) = record.values[i];

    // Bordered normal equations: minimize ||M r - x||^2 subject to the unit
    // trace, which in this basis reads sum of the first drec coords = 1.
    Eigen::VectorXd tvec = Eigen::VectorXd::Zero(nc);
    for (int i = 0; i < drec; ++i) tvec(i) = 1.0;
    Eigen::MatrixXd k(nc + 1, nc + 1);
    k.topLeftCorner(nc, nc) = m.transpose() * m;
    k.topRightCorner(nc, 1) = tvec;
    k.bottomLeftCorner(1, nc) = tvec.transpose();
    k(nc, nc) = 0.0;
    Eigen::VectorXd b(nc + 1);
    b.head(nc) = m.transpose() * x;
    b(nc) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    if (!lu.isInvertible())
        throw std::runtime_error("reconstruct: singular bordered system (uninvertible set)");
    Eigen::VectorXd coords = lu.solve(b).head(nc);

    RowBuilder rb(point_set.op_dims, point_set.recon_dims);
    ComplexMatrix raw = rb.unpack(coords); // Hermitian by construction
    res.residual = (m * coords - x).norm();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(raw, Eigen::EigenvaluesOnly);
    res.psd_adjustment = -es.eigenvalues().cwiseMin(0.0).sum();
    res.rho = smolin_project(raw);
    return res;
}

ComplexMatrix smolin_project(const ComplexMatrix& rho_raw) {
    if (!is_hermitian(rho_raw, 1e-8))
        throw std::invalid_argument("smolin_project: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_raw);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.maxCoeff() <= 0.0)
        throw std::invalid_argument("smolin_project: no positive eigenvalue");
    // Zero the negatives and pull their mass equally from the remaining
    // positive eigenvalues; repeat if that drives new ones negative.
    while (true) {
        double deficit = 0.0;
        int n_pos = 0;
        for (int i = 0; i < ev.size(); ++i) {
            if (ev(i) < 0.0) {
                deficit += ev(i);
                ev(i) = 0.0;
            } else if (ev(i) > 0.0) {
                ++n_pos;
            }
        }
        if (deficit == 0.0) break;
        if (n_pos == 0)
            throw std::invalid_argument("smolin_project: mass cannot be redistributed");
        double share = deficit / n_pos;
        for (int i = 0; i < ev.size(); ++i)
            if (ev(i) > 0.0) ev(i) += share;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> contrast_correction(const std::vector<double>& values, double c1,
                                        double c2) {
    if (c1 <= c2) throw std::invalid_argument("contrast_correction: c1 must exceed c2");
    std::vector<double> out;
    for (double x : values) out.push_back((x - c2) / (c1 - c2));
    return out;
}

std::vector<double> contrast_correction(const std::vector<double>& values,
                                        const std::vector<double>& c1,
                                        const std::vector<double>& c2) {
    if (c1.size() != values.size() || c2.size() != values.size())
        throw std::invalid_argument("contrast_correction: calibration size mismatch");
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (c1[i] <= c2[i])
            throw std::invalid_argument("contrast_correction: c1 must exceed c2");
        out.push_back((values[i] - c2[i]) / (c1[i] - c2[i]));
    }
    return out;
}

void WignerPointSet::save_csv(const std::string& path) const {
    validate();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("WignerPointSet::save_csv: cannot open " + path);
    auto list = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    os << "# op_dims = " << list(op_dims) << "\n";
    os << "# recon_dims = " << list(recon_dims) << "\n";
    os << "# kappa = " << format_double(condition_number) << "\n";
    os << "# product_form = " << (product_form ? 1 : 0) << "\n";
    os << "setting_id,mode,re_alpha,im_alpha,theta\n";
    for (std::size_t i = 0; i < settings.size(); ++i)
        for (std::size_t m = 0; m < op_dims.size(); ++m)
            os << i << "," << m << "," << format_double(settings[i].alphas[m].real()) << ","
               << format_double(settings[i].alphas[m].imag()) << ","
               << format_double(settings[i].thetas[m]) << "\n";
}

WignerPointSet WignerPointSet::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("WignerPointSet::load_csv: cannot open " + path);
    WignerPointSet ps;
    std::string line;
    auto parse_int_list = [](const std::string& s) {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
        return out;
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            std::string val = line.substr(eq + 1);
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
                return s;
            };
            key = trim(key);
            val = trim(val);
            if (key == "op_dims") ps.op_dims = parse_int_list(val);
            else if (key == "recon_dims") ps.recon_dims = parse_int_list(val);
            else if (key == "kappa") ps.condition_number = std::stod(val);
            else if (key == "product_form") ps.product_form = std::stoi(val) != 0;
            continue;
        }
        if (line.rfind("setting_id", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw std::runtime_error("WignerPointSet::load_csv: malformed row");
        std::size_t id = std::stoul(cells[0]);
        std::size_t mode = std::stoul(cells[1]);
        if (id >= ps.settings.size()) ps.settings.resize(id + 1);
        auto& s = ps.settings[id];
        if (s.alphas.size() <= mode) {
            s.alphas.resize(mode + 1);
            s.thetas.resize(mode + 1);
        }
        s.alphas[mode] = Complex(std::stod(cells[2]), std::stod(cells[3]));
        s.thetas[mode] = std::stod(cells[4]);
    }
    ps.validate();
    return ps;
}

void MeasurementRecord::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("MeasurementRecord::save_csv: cannot open " + path);
    os << "setting_id,value,sigma\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << i << "," << format_double(values[i]) << ","
           << format_double(i < sigmas.size() ? sigmas[i] : 0.0) << "\n";
}

MeasurementRecord MeasurementRecord::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("MeasurementRecord::load_csv: cannot open " + path);
    MeasurementRecord rec;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("setting_id", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2)
            throw std::runtime_error("MeasurementRecord::load_csv: malformed row");
        rec.values.push_back(std::stod(cells[1]));
        rec.sigmas.push_back(cells.size() > 2 ? std::stod(cells[2]) : 0.0);
    }
    return rec;
}

} // namespace blockade
