#ifndef BLOCKADE_OPERATORS_HPP
#define BLOCKADE_OPERATORS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "blockade/layout.hpp"

namespace blockade {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);
bool is_unitary(const ComplexMatrix& a, double tol = 1e-8);

/// Truncated bosonic lowering operator: (n-1, n) entry sqrt(n).
ComplexMatrix annihilation_op(int dim);

/// Photon number operator diag(0, 1, ..., dim-1).
ComplexMatrix number_op(int dim);

/// Displacement D(alpha) = exp(alpha a^dag - alpha* a) on the truncated space.
/// Accurate (unitary to ~1e-8) while |alpha|^2 <= dim/4; the guard is
/// advisory, large displacements simply lose accuracy to truncation.
ComplexMatrix displacement_op(int dim, Complex alpha);

/// Lift `op` (acting on subsystem `site`, 0 = transmon) into the full space,
/// identity elsewhere.
ComplexMatrix embed_operator(const SystemLayout& layout, int site, const ComplexMatrix& op);

/// |e><e| style projector on a transmon level, lifted into the full space.
ComplexMatrix transmon_projector(const SystemLayout& layout, int level);

/// |to><from| transmon transition operator, lifted into the full space.
ComplexMatrix transmon_transition(const SystemLayout& layout, int to, int from);

/// Number operator of mode `mode`, lifted into the full space.
ComplexMatrix mode_number(const SystemLayout& layout, int mode);

/// Lowering operator of mode `mode`, lifted into the full space.
ComplexMatrix mode_annihilation(const SystemLayout& layout, int mode);

/// Basis state |transmon_level; n_0, n_1, ...>.
ComplexVector fock_state(const SystemLayout& layout, int transmon_level,
                         const std::vector<int>& occupations);

/// Truncated coherent state on a single mode (normalized after truncation).
ComplexVector coherent_state(int dim, Complex alpha);

} // namespace blockade

#endif
