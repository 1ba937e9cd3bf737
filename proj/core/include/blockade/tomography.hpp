#ifndef BLOCKADE_TOMOGRAPHY_HPP
#define BLOCKADE_TOMOGRAPHY_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blockade/operators.hpp"

namespace blockade {

/// One measurement setting: a displacement and a Ramsey angle per mode.
struct WignerSetting {
    std::vector<Complex> alphas;
    std::vector<double> thetas;
};

/// A displacement/angle design for generalized Wigner tomography.
/// Operators are built on `op_dims` (roomy truncations); the state is
/// reconstructed on the smaller `recon_dims` subspace.
struct WignerPointSet {
    std::vector<int> op_dims;
    std::vector<int> recon_dims;
    std::vector<WignerSetting> settings;
    double condition_number = 0.0;
    bool product_form = false; // per-mode cos factors instead of the joint cosine

    int n_modes() const { return static_cast<int>(op_dims.size()); }
    int recon_total() const {
        int d = 1;
        for (int r : recon_dims) d *= r;
        return d;
    }
    void validate() const;

    /// CSV with `# key = value` comment headers (dims, kappa) and columns
    /// `setting_id, mode, re_alpha, im_alpha, theta`.
    void save_csv(const std::string& path) const;
    static WignerPointSet load_csv(const std::string& path);
};

struct MeasurementRecord {
    std::vector<double> values;
    std::vector<double> sigmas; // per-value noise scale (may be empty)

    void save_csv(const std::string& path) const;
    static MeasurementRecord load_csv(const std::string& path);
};

struct ReconstructionResult {
    ComplexMatrix rho;       // on the recon subspace, PSD, unit trace
    double condition_number = 0.0;
    double residual = 0.0;       // ||M rho_vec - x|| before PSD projection
    double psd_adjustment = 0.0; // eigenvalue mass redistributed by projection
};

/// W(alpha, theta) = (prod_m D(alpha_m)) cos(sum_m theta_m N_m)
/// (prod_m D(-alpha_m)); Hermitian with spectrum in [-1, 1]. With
/// product_form the central factor is prod_m cos(theta_m N_m) instead.
ComplexMatrix generalized_wigner_operator(const std::vector<int>& op_dims,
                                          const std::vector<Complex>& alphas,
                                          const std::vector<double>& thetas,
                                          bool product_form = false);

/// Row i = coordinates of W_i restricted to the recon subspace, in the
/// orthonormal Hermitian basis (diagonal units, then sqrt(2)-normalized
/// symmetric/antisymmetric pairs). Sets kappa = sigma_max/sigma_min; throws
/// std::runtime_error if sigma_min < 1e-12 (uninvertible set).
Eigen::MatrixXd build_measurement_matrix(const WignerPointSet& point_set, double& kappa,
                                         int jobs = 1);

struct PointSetOptions {
    int n_proposals = 2000;
    double rmax = 0.0; // max |alpha|; 0 = 0.4 * sqrt(max op_dim)
    /// Angle tuples cycled over every displacement tuple; default one
    /// all-pi set. Each tuple must have one angle per mode.
    std::vector<std::vector<double>> angle_sets;
    /// "kappa" (condition number) or "aopt" (sqrt of summed inverse squared
    /// singular values); "auto" = kappa for one mode, aopt for several.
    std::string objective = "auto";
};

/// Simulated-annealing random descent over displacement tuples from a
/// seeded random start; returns the best design found (never throws on a
/// poor search). Deterministic per seed.
WignerPointSet optimize_point_set(const std::vector<int>& op_dims,
                                  const std::vector<int>& recon_dims, int n_tuples,
                                  const PointSetOptions& options, std::uint64_t seed);

/// x_i = Tr[W_i rho] + gaussian(0, noise_sigma), seeded. rho_true lives on
/// the op_dims space (smaller mode truncations are zero-padded).
MeasurementRecord simulate_measurements(const ComplexMatrix& rho_true,
                                        const WignerPointSet& point_set, double noise_sigma,
                                        std::uint64_t seed);

/// Least-squares inversion with the trace pinned by a Lagrange multiplier
/// (bordered normal system), followed by Hermitization and smolin_project.
ReconstructionResult reconstruct(const WignerPointSet& point_set,
                                 const MeasurementRecord& record);

/// Eigenvalue redistribution onto the PSD cone: repeatedly zero negative
/// eigenvalues and subtract their mass equally from the remaining positive
/// ones. Throws std::invalid_argument if no eigenvalue is positive.
ComplexMatrix smolin_project(const ComplexMatrix& rho_raw);

/// x -> (x - c2) / (c1 - c2), per point. Throws on c1 <= c2.
std::vector<double> contrast_correction(const std::vector<double>& values, double c1, double c2);
std::vector<double> contrast_correction(const std::vector<double>& values,
                                        const std::vector<double>& c1,
                                        const std::vector<double>& c2);

} // namespace blockade

#endif
