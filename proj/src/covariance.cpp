#include "gausscap/covariance.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gausscap/entropy.hpp"

namespace gausscap {

namespace {

void check_symmetric(const Eigen::MatrixXd& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("covariance matrix must be symmetric");
    }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(int modes, Eigen::MatrixXd m)
    : n_modes(modes), entries(std::move(m)) {
    if (n_modes <= 0) {
        throw std::invalid_argument("covariance matrix needs at least one mode");
    }
    if (entries.rows() != 2 * n_modes || entries.cols() != 2 * n_modes) {
        throw std::invalid_argument("covariance matrix has wrong dimensions");
    }
    check_symmetric(entries);
}

ThermalSpec::ThermalSpec(double n) : n_mean(n) {
    if (!(n >= 0.0)) {
        throw std::domain_error("thermal mean photon number must be >= 0");
    }
}

GaussianInputParams::GaussianInputParams(double energy_, double x_, double angle_)
    : energy(energy_), x(x_), angle(angle_) {
    if (!(x > 0.0) || x > 1.0 + 1e-12) {
        throw std::domain_error("shape parameter x must lie in (0, 1]");
    }
    if (!(energy * std::sqrt(x) >= 0.5 - 1e-12)) {
        throw std::domain_error("energy too small: E*sqrt(x) must be >= 1/2");
    }
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.entries);
    const double top = std::max(1.0, es.eigenvalues().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-9 * top) {
        throw std::invalid_argument("covariance matrix is not positive semidefinite");
    }
    Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd root = es.eigenvectors() * clamped.asDiagonal() *
                           es.eigenvectors().transpose();
    Eigen::MatrixXd m = root * symplectic_form(cov.n_modes) * root;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    Eigen::VectorXd sv = svd.singularValues();  // descending, paired
    std::vector<double> nus(cov.n_modes);
    for (int i = 0; i < cov.n_modes; ++i) {
        nus[i] = 0.5 * (sv(2 * i) + sv(2 * i + 1));
    }
    std::sort(nus.begin(), nus.end(), std::greater<double>());
    return nus;
}

double gaussian_entropy(const CovarianceMatrix& cov) {
    double total = 0.0;
    for (double nu : symplectic_eigenvalues(cov)) {
        if (nu < 0.5 - 1e-9) {
            throw std::invalid_argument("unphysical covariance: symplectic eigenvalue below 1/2");
        }
        total += entropy_from_symplectic(nu);
    }
    return total;
}

double mean_photon(const CovarianceMatrix& cov) {
    return 0.5 * cov.entries.trace() - 0.5 * cov.n_modes;
}

CovarianceMatrix vacuum_cov(int n_modes) {
    return CovarianceMatrix(
        n_modes, 0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

CovarianceMatrix thermal_cov(const ThermalSpec& spec) {
    return CovarianceMatrix(
        1, (spec.n_mean + 0.5) * Eigen::MatrixXd::Identity(2, 2));
}

CovarianceMatrix tmsv_cov(const ThermalSpec& spec) {
    const double nu = spec.n_mean + 0.5;
    const double c = std::sqrt(spec.n_mean * (spec.n_mean + 1.0));
    Eigen::MatrixXd m = nu * Eigen::MatrixXd::Identity(4, 4);
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    return CovarianceMatrix(2, m);
}

Eigen::Matrix2d rotation_symplectic(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

Eigen::Matrix2d squeeze_symplectic(double s) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m(0, 0) = std::exp(s);
    m(1, 1) = std::exp(-s);
    return m;
}

CovarianceMatrix make_gaussian_input(const GaussianInputParams& params) {
    const double nu = params.energy * std::sqrt(params.x);
    const double cosh2s = std::max(1.0, 1.0 / std::sqrt(params.x));
    const double e2s = cosh2s + std::sqrt(cosh2s * cosh2s - 1.0);
    Eigen::Matrix2d core = Eigen::Matrix2d::Zero();
    core(0, 0) = nu * e2s;
    core(1, 1) = nu / e2s;
    const Eigen::Matrix2d r = rotation_symplectic(params.angle);
    Eigen::Matrix2d m = r * core * r.transpose();
    m = 0.5 * (m + m.transpose().eval());
    return CovarianceMatrix(1, m);
}

CovarianceMatrix purified_input_cov(const GaussianInputParams& params) {
    const double nph = params.energy * std::sqrt(params.x) - 0.5;
    CovarianceMatrix joint = tmsv_cov(ThermalSpec(nph));
    const double s = 0.5 * std::acosh(std::max(1.0, 1.0 / std::sqrt(params.x)));
    const Eigen::Matrix2d local =
        rotation_symplectic(params.angle) * squeeze_symplectic(s);
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(4, 4);
    big.block<2, 2>(0, 0) = local;
    return apply_symplectic(joint, big);
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix& cov, const Eigen::MatrixXd& s) {
    if (s.rows() != cov.dim() || s.cols() != cov.dim()) {
        throw std::invalid_argument("symplectic matrix has wrong dimensions");
    }
    Eigen::MatrixXd m = s * cov.entries * s.transpose();
    m = 0.5 * (m + m.transpose().eval());
    return CovarianceMatrix(cov.n_modes, std::move(m));
}

}  // namespace gausscap
