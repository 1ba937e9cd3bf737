#include "blockade/states.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace blockade {

ComplexMatrix pure_density(const ComplexVector& psi) { return psi * psi.adjoint(); }

DensityCheck check_density(const ComplexMatrix& rho) {
    DensityCheck c;
    c.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

ComplexMatrix trace_out_transmon(const SystemLayout& layout, const ComplexMatrix& rho) {
    int q = layout.transmon_levels();
    int d = layout.total_dim() / q;
    if (rho.rows() != layout.total_dim())
        throw std::invalid_argument("trace_out_transmon: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < q; ++k) out += rho.block(k * d, k * d, d, d);
    return out;
}

ComplexMatrix restrict_modes(const std::vector<int>& old_dims,
                             const std::vector<int>& new_dims, const ComplexMatrix& op) {
    if (old_dims.size() != new_dims.size())
        throw std::invalid_argument("restrict_modes: mode count mismatch");
    SystemLayout lo(1, old_dims), ln(1, new_dims);
    if (op.rows() != lo.total_dim())
        throw std::invalid_argument("restrict_modes: dimension mismatch");
    // map[i] = -1 marks a target basis state beyond the source truncation
    // (possible when a mode is enlarged); such rows/columns are zero-padded.
    std::vector<int> map(ln.total_dim());
    for (int i = 0; i < ln.total_dim(); ++i) {
        auto [lvl, occ] = ln.occupations_of(i);
        bool inside = true;
        for (std::size_t m = 0; m < occ.size(); ++m)
            if (occ[m] >= old_dims[m]) inside = false;
        map[i] = inside ? lo.index_of(lvl, occ) : -1;
    }
    ComplexMatrix out(ln.total_dim(), ln.total_dim());
    for (int i = 0; i < ln.total_dim(); ++i)
        for (int j = 0; j < ln.total_dim(); ++j)
            out(i, j) = (map[i] < 0 || map[j] < 0) ? Complex(0.0, 0.0) : op(map[i], map[j]);
    return out;
}

double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    ComplexMatrix sqrt_rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(sqrt_rho * sigma * sqrt_rho);
    double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

double state_fidelity(const ComplexMatrix& rho, const ComplexVector& psi) {
    if (rho.rows() != psi.size())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    return std::real(psi.dot(rho * psi));
}

double state_overlap(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("state_overlap: dimension mismatch");
    return std::real((rho * sigma).trace());
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    ComplexMatrix d = rho - sigma;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (d + d.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace blockade
