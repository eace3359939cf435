#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gausscap {

/// Real symmetric 2n x 2n matrix of quadrature second moments, ordered
/// (q1, p1, ..., qn, pn). Vacuum is (1/2)*I; first moments are not tracked.
struct CovarianceMatrix {
    int n_modes;
    Eigen::MatrixXd entries;

    CovarianceMatrix(int modes, Eigen::MatrixXd m);

    int dim() const { return 2 * n_modes; }
};

struct ThermalSpec {
    double n_mean;

    explicit ThermalSpec(double n);
};

/// Single-mode Gaussian input of energy E = Tr[(a^dag a + 1/2) rho] and shape
/// x in (0, 1], where x = 1 is thermal and x < 1 squeezed; `angle` rotates the
/// squeezing axis. The implied thermal occupation obeys N + 1/2 = E*sqrt(x).
struct GaussianInputParams {
    double energy;
    double x;
    double angle;

    GaussianInputParams(double energy_, double x_, double angle_ = 0.0);
};

/// 2n x 2n symplectic form, block-diagonal [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Williamson eigenvalues, descending. Computed as the paired singular values
/// of sqrt(cov) * Omega * sqrt(cov).
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cov);

/// Von Neumann entropy of the Gaussian state, in bits: sum g(nu_i - 1/2).
/// Throws if some nu_i < 1/2 - 1e-9 (unphysical covariance).
double gaussian_entropy(const CovarianceMatrix& cov);

/// Total mean photon number: tr(cov)/2 - n/2.
double mean_photon(const CovarianceMatrix& cov);

CovarianceMatrix vacuum_cov(int n_modes);
CovarianceMatrix thermal_cov(const ThermalSpec& spec);

/// Two-mode squeezed vacuum purifying thermal(N): diagonal blocks (N+1/2)*I,
/// cross block sqrt(N(N+1))*diag(1,-1). Both symplectic eigenvalues are 1/2.
CovarianceMatrix tmsv_cov(const ThermalSpec& spec);

/// rotation(angle) * diag(nu e^{2s}, nu e^{-2s}) * rotation(angle)^T with
/// nu = E*sqrt(x) and cosh(2s) = 1/sqrt(x), so det = (E sqrt x)^2, tr/2 = E.
CovarianceMatrix make_gaussian_input(const GaussianInputParams& params);

/// Pure two-mode covariance whose mode-0 reduction is make_gaussian_input(p).
CovarianceMatrix purified_input_cov(const GaussianInputParams& params);

Eigen::Matrix2d rotation_symplectic(double angle);
Eigen::Matrix2d squeeze_symplectic(double s);

/// S * cov * S^T for a symplectic S acting on all modes.
CovarianceMatrix apply_symplectic(const CovarianceMatrix& cov, const Eigen::MatrixXd& s);

}  // namespace gausscap
