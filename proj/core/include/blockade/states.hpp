#ifndef BLOCKADE_STATES_HPP
#define BLOCKADE_STATES_HPP

#include "blockade/operators.hpp"

namespace blockade {

/// |psi><psi|
ComplexMatrix pure_density(const ComplexVector& psi);

/// Checks for a physical density matrix: Hermitian, unit trace, PSD.
struct DensityCheck {
    double hermiticity_defect; // max|rho - rho^dag|
    double trace_defect;       // |Tr rho - 1|
    double min_eigenvalue;
    bool physical(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double eig_tol = -1e-10) const {
        return hermiticity_defect < herm_tol && trace_defect < trace_tol &&
               min_eigenvalue > eig_tol;
    }
};
DensityCheck check_density(const ComplexMatrix& rho);

/// Trace out the transmon, leaving the joint cavity-mode density matrix.
ComplexMatrix trace_out_transmon(const SystemLayout& layout, const ComplexMatrix& rho);

/// Restrict a cavity-space operator/density (layout without transmon) to the
/// subspace with at most new_dims[m]-1 photons per mode. Modes may also be
/// enlarged; the added basis states are zero-padded.
ComplexMatrix restrict_modes(const std::vector<int>& old_dims,
                             const std::vector<int>& new_dims, const ComplexMatrix& op);

/// <psi| rho |psi> for a pure target.
double state_fidelity(const ComplexMatrix& rho, const ComplexVector& psi);

/// Tr[rho sigma]; exact fidelity when at least one input is pure.
double state_overlap(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// (1/2)||rho - sigma||_1
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 — exact fidelity for two mixed
/// states; reduces to <psi|sigma|psi> when rho is pure.
double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

} // namespace blockade

#endif
