#include "blockade/operators.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace blockade {

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    ComplexMatrix d = a.adjoint() * a;
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff() < tol;
}

ComplexMatrix annihilation_op(int dim) {
    if (dim < 1) throw std::invalid_argument("annihilation_op: dim must be >= 1");
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix number_op(int dim) {
    if (dim < 1) throw std::invalid_argument("number_op: dim must be >= 1");
    ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

ComplexMatrix displacement_op(int dim, Complex alpha) {
    if (dim < 1) throw std::invalid_argument("displacement_op: dim must be >= 1");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw std::invalid_argument("displacement_op: alpha must be finite");
    ComplexMatrix a = annihilation_op(dim);
    ComplexMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();
}

ComplexMatrix embed_operator(const SystemLayout& layout, int site, const ComplexMatrix& op) {
    if (site < 0 || site >= layout.n_sites())
        throw std::out_of_range("embed_operator: site out of range");
    if (op.rows() != op.cols() || op.rows() != layout.site_dim(site))
        throw std::invalid_argument("embed_operator: operator dim does not match site dim");

    // dim_left x d x dim_right block structure of the flat index.
    int d = layout.site_dim(site);
    int left = 1, right = 1;
    for (int s = 0; s < site; ++s) left *= layout.site_dim(s);
    for (int s = site + 1; s < layout.n_sites(); ++s) right *= layout.site_dim(s);

    ComplexMatrix out = ComplexMatrix::Zero(layout.total_dim(), layout.total_dim());
    for (int l = 0; l < left; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (op(i, j) == Complex(0.0, 0.0)) continue;
                for (int r = 0; r < right; ++r)
                    out((l * d + i) * right + r, (l * d + j) * right + r) = op(i, j);
            }
    return out;
}

ComplexMatrix transmon_projector(const SystemLayout& layout, int level) {
    ComplexMatrix p = ComplexMatrix::Zero(layout.transmon_levels(), layout.transmon_levels());
    p(level, level) = 1.0;
    return embed_operator(layout, 0, p);
}

ComplexMatrix transmon_transition(const SystemLayout& layout, int to, int from) {
    ComplexMatrix t = ComplexMatrix::Zero(layout.transmon_levels(), layout.transmon_levels());
    t(to, from) = 1.0;
    return embed_operator(layout, 0, t);
}

ComplexMatrix mode_number(const SystemLayout& layout, int mode) {
    return embed_operator(layout, mode + 1, number_op(layout.mode_dims().at(mode)));
}

ComplexMatrix mode_annihilation(const SystemLayout& layout, int mode) {
    return embed_operator(layout, mode + 1, annihilation_op(layout.mode_dims().at(mode)));
}

ComplexVector fock_state(const SystemLayout& layout, int transmon_level,
                         const std::vector<int>& occupations) {
    ComplexVector v = ComplexVector::Zero(layout.total_dim());
    v(layout.index_of(transmon_level, occupations)) = 1.0;
    return v;
}

ComplexVector coherent_state(int dim, Complex alpha) {
    if (dim < 1) throw std::invalid_argument("coherent_state: dim must be >= 1");
    ComplexVector v(dim);
    Complex amp = 1.0;
    v(0) = amp;
    for (int n = 1; n < dim; ++n) {
        amp *= alpha / std::sqrt(static_cast<double>(n));
        v(n) = amp;
    }
    v *= std::exp(-0.5 * std::norm(alpha));
    v.normalize();
    return v;
}

} // namespace blockade
