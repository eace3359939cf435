#include "gausscap/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gausscap/coherent_info.hpp"
#include "gausscap/entropy.hpp"

namespace gausscap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

Eigen::MatrixXcd phase_conjugate(const Eigen::VectorXcd& ph,
                                 const Eigen::MatrixXd& core) {
    return ph.asDiagonal() * core.cast<Complex>() * ph.conjugate().asDiagonal();
}

}  // namespace

FockDensityMatrix::FockDensityMatrix(int cutoff_, int n_modes_, Eigen::MatrixXcd m)
    : cutoff(cutoff_), n_modes(n_modes_), entries(std::move(m)) {
    if (cutoff < 2) throw std::invalid_argument("fock cutoff must be >= 2");
    if (n_modes < 1 || n_modes > 2) {
        throw std::invalid_argument("fock states support 1 or 2 modes");
    }
    long expect = 1;
    for (int i = 0; i < n_modes; ++i) expect *= cutoff;
    if (entries.rows() != expect || entries.cols() != expect) {
        throw std::invalid_argument("fock matrix has wrong dimensions");
    }
}

QuadratureSpec::QuadratureSpec(int radial, int angular, double scale)
    : radial_nodes(radial), angular_nodes(angular), radius_scale(scale) {
    if (radial < 8 || angular < 8) {
        throw std::invalid_argument("quadrature needs at least 8 nodes per direction");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("quadrature radius scale must be positive");
    }
}

void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Golub-Welsch on the Jacobi matrix of the Laguerre recurrence.
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        j(i, i) = 2.0 * i + 1.0;
        if (i > 0) {
            j(i, i - 1) = j(i - 1, i) = static_cast<double>(i);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = v0 * v0;
    }
}

namespace {

Complex ipow(Complex base, int e) {
    Complex out(1.0, 0.0);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace

Complex displacement_element(int i, int j, Complex mu) {
    if (i < 0 || j < 0) throw std::invalid_argument("negative Fock index");
    const double t = std::norm(mu);
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    const int alpha = hi - lo;
    // generalized Laguerre by upward recurrence
    double lm1 = 0.0;
    double l = 1.0;
    for (int n = 0; n < lo; ++n) {
        const double lp = ((2.0 * n + 1.0 + alpha - t) * l - (n + alpha) * lm1) / (n + 1.0);
        lm1 = l;
        l = lp;
    }
    const double pref = std::exp(0.5 * (log_factorial(lo) - log_factorial(hi)) - 0.5 * t);
    const Complex amp = (i >= j) ? ipow(mu, i - j) : ipow(-std::conj(mu), j - i);
    return pref * amp * l;
}

Eigen::MatrixXd displacement_matrix_real(double r, int d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    if (r <= 0.0) {
        m.setIdentity();
        return m;
    }
    // Element-wise Laguerre evaluation. A column recurrence would climb out of
    // deeply underflowed column heads at large r and lose the small elements;
    // the per-element form keeps absolute errors near machine precision.
    const double t = r * r;
    std::vector<double> loghalf(d);
    for (int i = 0; i < d; ++i) loghalf[i] = 0.5 * log_factorial(i);
    const double lr = std::log(r);
    for (int j = 0; j < d; ++j) {
        // generalized Laguerre recurrence upward in degree for every alpha
        for (int i = j; i < d; ++i) {
            const int alpha = i - j;
            double lm1 = 0.0, l = 1.0;
            for (int n = 0; n < j; ++n) {
                const double lp =
                    ((2.0 * n + 1.0 + alpha - t) * l - (n + alpha) * lm1) / (n + 1.0);
                lm1 = l;
                l = lp;
            }
            const double mag = std::exp(loghalf[j] - loghalf[i] + alpha * lr - 0.5 * t);
            m(i, j) = mag * l;                                  // <i|D(r)|j>, i >= j
            if (i != j) {
                m(j, i) = (alpha % 2 == 0) ? m(i, j) : -m(i, j);  // <j|D(r)|i>
            }
        }
    }
    return m;
}

FockDensityMatrix thermal_fock(double n_mean, int cutoff, double tail_tol) {
    if (!(n_mean >= 0.0)) throw std::domain_error("thermal mean photon must be >= 0");
    const double v = n_mean / (n_mean + 1.0);
    const double tail = std::pow(v, cutoff);
    if (tail >= tail_tol) {
        throw std::runtime_error("thermal_fock: cutoff too small for requested tail bound");
    }
    Eigen::VectorXd p(cutoff);
    for (int n = 0; n < cutoff; ++n) p(n) = (1.0 - v) * std::pow(v, n);
    p /= p.sum();
    Eigen::MatrixXcd m = p.cast<Complex>().asDiagonal();
    return FockDensityMatrix(cutoff, 1, std::move(m));
}

FockDensityMatrix tmsv_fock(double n_mean, int cutoff) {
    const double v = n_mean / (n_mean + 1.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff * cutoff);
    for (int n = 0; n < cutoff; ++n) {
        psi(n * cutoff + n) = std::sqrt((1.0 - v) * std::pow(v, n));
    }
    return FockDensityMatrix(cutoff, 2, psi * psi.adjoint());
}

namespace {

Eigen::MatrixXcd charfn_pass(const std::function<Complex(Complex)>& chi, int d,
                             int nrad, int nang, double scale) {
    std::vector<double> nodes, weights;
    gauss_laguerre(nrad, nodes, weights);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd ph(d);
    for (int i = 0; i < nrad; ++i) {
        const double u = nodes[i];
        if (u > 700.0) continue;  // weight regime below double range
        const double t = u / scale;
        const double r = std::sqrt(t);
        // largest displacement element at this radius; skip negligible nodes
        double dmax = -0.5 * t;
        if (t > 1.0) {
            dmax = std::max(dmax, -0.5 * t + (d - 1) * std::log(t) - log_factorial(d - 1));
        }
        if (dmax < std::log(1e-24)) continue;
        const Eigen::MatrixXd core = displacement_matrix_real(r, d);
        const double boost = std::exp(u) * weights[i] / (scale * nang);
        for (int a = 0; a < nang; ++a) {
            const double theta = 2.0 * kPi * a / nang;
            const Complex mu = std::polar(r, theta);
            const Complex w = boost * chi(mu);
            if (w == Complex(0.0, 0.0)) continue;
            for (int row = 0; row < d; ++row) {
                ph(row) = std::polar(1.0, (theta + kPi) * row);
            }
            acc += w * phase_conjugate(ph, core);
        }
    }
    return acc;
}

}  // namespace

FockDensityMatrix state_from_charfn(const std::function<Complex(Complex)>& chi,
                                    int cutoff, const QuadratureSpec& quad) {
    Eigen::MatrixXcd coarse = charfn_pass(chi, cutoff, quad.radial_nodes,
                                          quad.angular_nodes, quad.radius_scale);
    Eigen::MatrixXcd fine = charfn_pass(chi, cutoff, quad.radial_nodes + 8,
                                        quad.angular_nodes + 16, quad.radius_scale);
    const double dev = (coarse - fine).cwiseAbs().maxCoeff();
    if (dev > 1e-6) {
        throw std::runtime_error(
            "state_from_charfn: quadrature levels disagree beyond 1e-6 (dev " +
            std::to_string(dev) + "), refine the rule");
    }
    Eigen::MatrixXcd herm = 0.5 * (fine + fine.adjoint().eval());
    return FockDensityMatrix(cutoff, 1, std::move(herm));
}

namespace {

// I(n, beta, kappa; p) = int_0^inf e^{-pt} t^{beta+kappa} L_n^{(beta)}(t) dt,
// evaluated as (-d/dp)^kappa of Gamma(n+beta+1)/n! (p-1)^n p^{-(n+beta+1)}.
// Terms stay proportional to (p-1)^{n-i} p^{-(n+beta+1+kappa-i)}, i <= kappa.
double laguerre_transform_moment(int n, int beta, int kappa, double p) {
    std::vector<double> coef(kappa + 1, 0.0);
    coef[0] = 1.0;  // bucket i: coefficient of (p-1)^{n-i} p^{-(M+k-i)} after k derivatives
    const double m0 = n + beta + 1.0;
    for (int step = 0; step < kappa; ++step) {
        std::vector<double> next(kappa + 1, 0.0);
        for (int i = 0; i <= step; ++i) {
            if (coef[i] == 0.0) continue;
            // term: coef * (p-1)^{n-i} * p^{-(m0 + step - i)}
            next[i + 1] += coef[i] * (n - i);            // lowers (p-1) power
            next[i] += coef[i] * (-(m0 + step - i));     // raises 1/p power
        }
        coef.swap(next);
    }
    const double base_log = std::lgamma(m0) - log_factorial(n);
    const double lp = std::log(p);
    const double lq = std::log(p - 1.0);
    double total = 0.0;
    for (int i = 0; i <= kappa; ++i) {
        if (coef[i] == 0.0 || n - i < 0) continue;
        const double mag = base_log + (n - i) * lq - (m0 + kappa - i) * lp;
        total += coef[i] * std::exp(mag);
    }
    return (kappa % 2 == 0) ? total : -total;
}

}  // namespace

Eigen::MatrixXd thermal_moment_op(int k, int l, double n_mean, int cutoff) {
    if (k < 0 || l < 0) throw std::invalid_argument("moment exponents must be >= 0");
    if (!(n_mean > 0.0)) {
        throw std::domain_error("thermal_moment_op: thermal base needs N > 0");
    }
    const double p = n_mean + 1.0;
    const int delta = l - k;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(cutoff, cutoff);
    if (delta >= 0) {
        const double sign = (delta % 2 == 0) ? 1.0 : -1.0;
        for (int q = 0; q + delta < cutoff; ++q) {
            const int row = q + delta;
            const double pref =
                sign * std::exp(0.5 * (log_factorial(q) - log_factorial(row)));
            t(row, q) = pref * laguerre_transform_moment(q, delta, k, p);
        }
    } else {
        const int gap = -delta;
        for (int row = 0; row + gap < cutoff; ++row) {
            const int q = row + gap;
            const double pref =
                std::exp(0.5 * (log_factorial(row) - log_factorial(q)));
            t(row, q) = pref * laguerre_transform_moment(row, gap, l, p);
        }
    }
    return t;
}

QuadratureSpec default_quadrature(double n_mean, int cutoff) {
    return QuadratureSpec(cutoff + 16, 2 * cutoff + 16, n_mean + 0.5);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXd creation_op(int cutoff) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int n = 0; n + 1 < cutoff; ++n) {
        m(n + 1, n) = std::sqrt(n + 1.0);
    }
    return m;
}

PerturbedState perturbed_state(const PerturbationSpec& spec, double n_mean,
                               int cutoff, const QuadratureSpec& quad) {
    const int n_modes = spec.n_modes();
    if (n_modes > 2) {
        throw std::invalid_argument("perturbed_state supports at most two modes");
    }
    if (!(n_mean > 0.0)) {
        throw std::domain_error("perturbed_state: thermal base needs N > 0");
    }

    // cross-check the closed-form radial transforms against the quadrature
    const int check_dim = std::min(cutoff, 24);
    {
        const int k0 = spec.k[0];
        const int l0 = spec.l[0];
        const double nu = n_mean + 0.5;
        auto chi = [nu, k0, l0](Complex mu) {
            return std::exp(-nu * std::norm(mu)) * ipow(mu, k0) *
                   ipow(std::conj(mu), l0);
        };
        const Eigen::MatrixXcd quad_op =
            charfn_pass(chi, check_dim, quad.radial_nodes, quad.angular_nodes,
                        quad.radius_scale);
        const Eigen::MatrixXd exact =
            thermal_moment_op(k0, l0, n_mean, check_dim);
        const double dev = (quad_op - exact.cast<Complex>()).cwiseAbs().maxCoeff();
        if (dev > 1e-6) {
            throw std::runtime_error(
                "perturbed_state: quadrature disagrees with radial transforms (dev " +
                std::to_string(dev) + ")");
        }
    }

    Eigen::MatrixXcd term_c = thermal_moment_op(spec.k[0], spec.l[0], n_mean, cutoff)
                                  .cast<Complex>();
    Eigen::MatrixXcd term_cc = thermal_moment_op(spec.l[0], spec.k[0], n_mean, cutoff)
                                   .cast<Complex>();
    Eigen::MatrixXcd base = thermal_fock(n_mean, cutoff, 1.0).entries;
    if (n_modes == 2) {
        term_c = kron(term_c,
                      thermal_moment_op(spec.k[1], spec.l[1], n_mean, cutoff)
                          .cast<Complex>());
        term_cc = kron(term_cc,
                       thermal_moment_op(spec.l[1], spec.k[1], n_mean, cutoff)
                           .cast<Complex>());
        base = kron(base, base);
    }
    Eigen::MatrixXcd phi = spec.c * term_c + std::conj(spec.c) * term_cc;
    if (std::abs(phi.trace()) > 1e-8) {
        throw std::runtime_error("perturbed_state: perturbation operator is not traceless");
    }
    Eigen::MatrixXcd rho = base + spec.epsilon * phi;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw std::runtime_error(
            "perturbed_state: truncated state not positive at this epsilon; reduce epsilon");
    }
    return PerturbedState{FockDensityMatrix(cutoff, n_modes, std::move(rho)),
                          FockDensityMatrix(cutoff, n_modes, std::move(phi))};
}

namespace {

Eigen::SparseMatrix<double> build_loss_superop(double eta, int d, int env_cutoff) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(d) * d);
    std::vector<double> kj(d);
    const int jmax = std::min(env_cutoff, d - 1);
    for (int j = 0; j <= jmax; ++j) {
        for (int n = j; n < d; ++n) {
            const double logc = log_factorial(n) - log_factorial(j) - log_factorial(n - j);
            double val = 0.5 * logc + 0.5 * (n - j) * std::log(std::max(eta, 1e-300)) +
                         0.5 * j * std::log(std::max(1.0 - eta, 1e-300));
            kj[n] = std::exp(val);
            if (eta == 0.0 && n != j) kj[n] = 0.0;
            if (eta == 1.0 && j != 0) kj[n] = 0.0;
        }
        if (eta == 1.0 && j > 0) continue;
        for (int n = j; n < d; ++n) {
            if (kj[n] == 0.0) continue;
            for (int n2 = j; n2 < d; ++n2) {
                if (kj[n2] == 0.0) continue;
                trips.emplace_back((n - j) * d + (n2 - j), n * d + n2, kj[n] * kj[n2]);
            }
        }
    }
    Eigen::SparseMatrix<double> s(d * d, d * d);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

Eigen::SparseMatrix<double> build_noise_superop(double n_noise, int d,
                                                int radial_nodes) {
    std::vector<double> nodes, weights;
    gauss_laguerre(radial_nodes, nodes, weights);
    std::vector<Eigen::MatrixXd> disp;
    std::vector<double> w;
    for (int i = 0; i < radial_nodes; ++i) {
        const double r = std::sqrt(n_noise * nodes[i]);
        if (weights[i] < 1e-300) continue;
        disp.push_back(displacement_matrix_real(r, d));
        w.push_back(weights[i]);
    }
    std::vector<Eigen::Triplet<double>> trips;
    for (int delta = -(d - 1); delta <= d - 1; ++delta) {
        for (int n = std::max(0, -delta); n + std::max(0, delta) < d; ++n) {
            const int m = n + delta;
            for (int n2 = std::max(0, -delta); n2 + std::max(0, delta) < d; ++n2) {
                const int m2 = n2 + delta;
                double s = 0.0;
                for (size_t i = 0; i < disp.size(); ++i) {
                    s += w[i] * disp[i](m, n) * disp[i](m2, n2);
                }
                trips.emplace_back(m * d + m2, n * d + n2, s);
            }
        }
    }
    Eigen::SparseMatrix<double> s(d * d, d * d);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

}  // namespace

Eigen::MatrixXcd ChannelSuperop::apply_vec(const Eigen::MatrixXcd& columns) const {
    Eigen::MatrixXd re = loss * columns.real();
    Eigen::MatrixXd im = loss * columns.imag();
    if (has_noise) {
        re = noise * re;
        im = noise * im;
    }
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

ChannelSuperop build_channel_superop(const ChannelParams& params, int cutoff,
                                     int env_cutoff, int radial_nodes) {
    if (env_cutoff < 0) env_cutoff = cutoff;
    if (radial_nodes < 0) radial_nodes = cutoff + 12;
    ChannelSuperop s;
    s.cutoff = cutoff;
    s.loss = build_loss_superop(params.eta, cutoff, env_cutoff);
    s.has_noise = params.n_noise > 0.0;
    if (s.has_noise) {
        s.noise = build_noise_superop(params.n_noise, cutoff, radial_nodes);
    }
    return s;
}

FockDensityMatrix apply_channel_to_mode(const ChannelSuperop& superop,
                                        const FockDensityMatrix& rho, int mode) {
    const int d = rho.cutoff;
    if (superop.cutoff != d) {
        throw std::invalid_argument("superoperator cutoff mismatch");
    }
    if (mode < 0 || mode >= rho.n_modes) {
        throw std::out_of_range("channel mode index out of range");
    }
    if (rho.n_modes == 1) {
        Eigen::MatrixXcd v = rho.entries.reshaped(d * d, 1);
        Eigen::MatrixXcd out = superop.apply_vec(v);
        return FockDensityMatrix(d, 1, out.reshaped(d, d).eval());
    }
    // two modes: gather the target-mode index pair into superoperator layout
    Eigen::MatrixXcd packed(d * d, d * d);
    for (int q = 0; q < d; ++q) {
        for (int r = 0; r < d; ++r) {
            for (int q2 = 0; q2 < d; ++q2) {
                for (int r2 = 0; r2 < d; ++r2) {
                    const int row = (mode == 0) ? q * d + q2 : r * d + r2;
                    const int col = (mode == 0) ? r * d + r2 : q * d + q2;
                    packed(row, col) = rho.entries(q * d + r, q2 * d + r2);
                }
            }
        }
    }
    Eigen::MatrixXcd mapped = superop.apply_vec(packed);
    Eigen::MatrixXcd out(d * d, d * d);
    for (int q = 0; q < d; ++q) {
        for (int r = 0; r < d; ++r) {
            for (int q2 = 0; q2 < d; ++q2) {
                for (int r2 = 0; r2 < d; ++r2) {
                    const int row = (mode == 0) ? q * d + q2 : r * d + r2;
                    const int col = (mode == 0) ? r * d + r2 : q * d + q2;
                    out(q * d + r, q2 * d + r2) = mapped(row, col);
                }
            }
        }
    }
    return FockDensityMatrix(d, 2, std::move(out));
}

FockDensityMatrix apply_channel_fock(const ChannelParams& params,
                                     const FockDensityMatrix& rho,
                                     int env_cutoff, int noise_radial_nodes) {
    const ChannelSuperop s =
        build_channel_superop(params, rho.cutoff, env_cutoff, noise_radial_nodes);
    FockDensityMatrix out = apply_channel_to_mode(s, rho, 0);
    const double tin = rho.trace_real();
    if (std::abs(out.trace_real() - tin) > 1e-6 * std::max(1.0, std::abs(tin))) {
        throw std::runtime_error(
            "apply_channel_fock: trace leaked past the cutoff; enlarge the space");
    }
    return out;
}

namespace {

Eigen::VectorXd state_eigenvalues(const FockDensityMatrix& rho) {
    const double scale = std::max(1.0, rho.entries.cwiseAbs().maxCoeff());
    if ((rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("state is not Hermitian");
    }
    if (rho.entries.imag().cwiseAbs().maxCoeff() < 1e-13 * scale) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.entries.real(),
                                                          Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double entropy_from_eigenvalues_nats(const Eigen::VectorXd& lam) {
    if (lam.minCoeff() < -1e-6) {
        throw std::invalid_argument("not a state: eigenvalue below -1e-6");
    }
    double s = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        const double x = lam(i);
        if (x > 1e-300) s -= x * std::log(x);
    }
    return s;
}

}  // namespace

double von_neumann_entropy_nats(const FockDensityMatrix& rho) {
    return entropy_from_eigenvalues_nats(state_eigenvalues(rho));
}

double von_neumann_entropy(const FockDensityMatrix& rho) {
    return von_neumann_entropy_nats(rho) / kLn2;
}

double trace_quotient(const FockDensityMatrix& phi, const FockDensityMatrix& rho,
                      double eigen_floor) {
    if (phi.dim() != rho.dim()) {
        throw std::invalid_argument("trace_quotient: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries);
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < eigen_floor) {
        throw std::runtime_error(
            "trace_quotient: base-state eigenvalue below the conditioning floor; "
            "reduce the cutoff or lower the floor for analytically exact inputs");
    }
    const Eigen::MatrixXcd m = es.eigenvectors().adjoint() * phi.entries * es.eigenvectors();
    double total = 0.0;
    for (int a = 0; a < m.rows(); ++a) {
        total += m.row(a).squaredNorm() / lam(a);
    }
    return total;
}

Eigen::SparseMatrix<double> two_mode_squeeze_matrix(double r, int cutoff) {
    const int d = cutoff;
    const double tau = std::tanh(r);
    const double lc = std::log(std::cosh(r));
    std::vector<Eigen::Triplet<double>> ta, tb;
    for (int j = 0; j < d; ++j) {
        const double ljf = log_factorial(j);
        for (int mm = 0; mm + j < d; ++mm) {
            for (int nn = 0; nn + j < d; ++nn) {
                const double lmag =
                    j * std::log(std::max(std::abs(tau), 1e-300)) - ljf +
                    0.5 * (log_factorial(mm + j) - log_factorial(mm) +
                           log_factorial(nn + j) - log_factorial(nn));
                double val = (tau == 0.0 && j > 0) ? 0.0 : std::exp(lmag);
                if (tau < 0.0 && (j % 2 == 1)) val = -val;
                if (val == 0.0) continue;
                ta.emplace_back((mm + j) * d + (nn + j), mm * d + nn, val);
                tb.emplace_back(mm * d + nn, (mm + j) * d + (nn + j),
                                (j % 2 == 0) ? val : -val);
            }
        }
    }
    Eigen::SparseMatrix<double> a(d * d, d * d), b(d * d, d * d);
    a.setFromTriplets(ta.begin(), ta.end());
    b.setFromTriplets(tb.begin(), tb.end());
    Eigen::VectorXd mid(d * d);
    for (int mm = 0; mm < d; ++mm) {
        for (int nn = 0; nn < d; ++nn) {
            mid(mm * d + nn) = std::exp(-lc * (mm + nn + 1));
        }
    }
    Eigen::SparseMatrix<double> dm(d * d, d * d);
    std::vector<Eigen::Triplet<double>> td;
    for (int i = 0; i < d * d; ++i) td.emplace_back(i, i, mid(i));
    dm.setFromTriplets(td.begin(), td.end());
    return (a * dm * b).pruned(1e-300);
}

FockDensityMatrix normal_form_joint_state(const ChannelParams& params,
                                          double n_mean, int cutoff) {
    const JointSpectrum js = joint_spectrum(params, ThermalSpec(n_mean));
    const Eigen::MatrixXcd core =
        kron(thermal_fock(js.n_a, cutoff, 1.0).entries,
             thermal_fock(js.n_b, cutoff, 1.0).entries);
    const Eigen::SparseMatrix<double> u = two_mode_squeeze_matrix(js.r, cutoff);
    Eigen::MatrixXd re = u * core.real() * u.transpose();
    return FockDensityMatrix(cutoff, 2, re.cast<Complex>());
}

namespace {

Eigen::SparseMatrix<Complex> ladder_power_on_mode(int power, bool raising, int mode,
                                                  int d) {
    // (adag^power or a^power) acting on one mode of a two-mode space
    Eigen::MatrixXd single = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd adag = creation_op(d);
    for (int i = 0; i < power; ++i) {
        single = raising ? (adag * single).eval() : (adag.transpose() * single).eval();
    }
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (single(i, j) == 0.0) continue;
            for (int other = 0; other < d; ++other) {
                if (mode == 0) {
                    trips.emplace_back(i * d + other, j * d + other, Complex(single(i, j)));
                } else {
                    trips.emplace_back(other * d + i, other * d + j, Complex(single(i, j)));
                }
            }
        }
    }
    Eigen::SparseMatrix<Complex> out(d * d, d * d);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

double lemma_check(int k, int m, double n_mean, const ChannelParams& params,
                   int cutoff, bool lowering_first) {
    if (k < 0 || m < 0) throw std::invalid_argument("lemma_check: negative exponent");
    const double v = n_mean / (n_mean + 1.0);
    const int d = cutoff;
    const FockDensityMatrix rho_qr = tmsv_fock(n_mean, d);

    const auto left_q = ladder_power_on_mode(k, !lowering_first, 0, d);
    const auto right_q = ladder_power_on_mode(m, lowering_first, 0, d);
    Eigen::MatrixXcd lhs_in = left_q * rho_qr.entries;
    lhs_in = (right_q.transpose() * lhs_in.transpose()).transpose();
    const ChannelSuperop s = build_channel_superop(params, d);
    const FockDensityMatrix lhs =
        apply_channel_to_mode(s, FockDensityMatrix(d, 2, std::move(lhs_in)), 0);

    const FockDensityMatrix rho_ref = normal_form_joint_state(params, n_mean, d);
    const auto left_r = ladder_power_on_mode(k, lowering_first, 1, d);
    const auto right_r = ladder_power_on_mode(m, !lowering_first, 1, d);
    Eigen::MatrixXcd rhs = left_r * rho_ref.entries;
    rhs = (right_r.transpose() * rhs.transpose()).transpose();
    rhs *= std::pow(v, (lowering_first ? 0.5 : -0.5) * (k + m));
    return (lhs.entries - rhs).cwiseAbs().maxCoeff();
}

double fock_mean_photon(const FockDensityMatrix& rho) {
    const int d = rho.cutoff;
    double total = 0.0;
    if (rho.n_modes == 1) {
        for (int n = 0; n < d; ++n) total += n * rho.entries(n, n).real();
    } else {
        for (int q = 0; q < d; ++q) {
            for (int r = 0; r < d; ++r) {
                total += (q + r) * rho.entries(q * d + r, q * d + r).real();
            }
        }
    }
    return total;
}

namespace {

// Entropy (nats) of the pure-state loss-channel output via the Kraus Gram
// matrix: eigenvalues of sum_j |K_j psi><K_j psi| equal those of the Gram.
double lossy_joint_entropy_nats(const Eigen::MatrixXcd& amp, double eta) {
    const int d = amp.rows();
    std::vector<Eigen::MatrixXcd> imgs;
    imgs.reserve(d);
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXd kj = Eigen::MatrixXd::Zero(d, d);
        bool any = false;
        for (int n = j; n < d; ++n) {
            const double logc =
                log_factorial(n) - log_factorial(j) - log_factorial(n - j);
            const double val =
                std::exp(0.5 * logc + 0.5 * (n - j) * std::log(std::max(eta, 1e-300)) +
                         0.5 * j * std::log(std::max(1.0 - eta, 1e-300)));
            if (eta == 1.0 && j > 0) break;
            kj(n - j, n) = (eta == 0.0 && n != j) ? 0.0 : val;
            any = any || kj(n - j, n) != 0.0;
        }
        if (any) imgs.push_back(kj * amp);
    }
    const int nk = static_cast<int>(imgs.size());
    Eigen::MatrixXcd gram(nk, nk);
    for (int i = 0; i < nk; ++i) {
        for (int j = i; j < nk; ++j) {
            const Complex g = (imgs[j].adjoint() * imgs[i]).trace();
            gram(j, i) = g;
            gram(i, j) = std::conj(g);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    double s = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) > 1e-300) s -= lam(i) * std::log(lam(i));
    }
    return s;
}

Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

EntropyShiftCoefficients entropy_shift_oracle(const PerturbationSpec& spec,
                                              double n_mean,
                                              const ChannelParams& params,
                                              const std::vector<double>& epsilons,
                                              int cutoff) {
    if (epsilons.size() < 3) {
        throw std::invalid_argument("entropy_shift_oracle: need at least 3 epsilon values");
    }
    for (size_t i = 0; i + 1 < epsilons.size(); ++i) {
        if (std::abs(epsilons[i] - 2.0 * epsilons[i + 1]) > 1e-12 * epsilons[i]) {
            throw std::invalid_argument("entropy_shift_oracle: epsilons must halve");
        }
    }
    const int n_modes = spec.n_modes();
    const QuadratureSpec quad = default_quadrature(n_mean, cutoff);
    PerturbationSpec unit_spec(spec.k, spec.l, spec.c, 0.0);
    const PerturbedState parts = perturbed_state(unit_spec, n_mean, cutoff, quad);
    const Eigen::MatrixXcd& base = parts.state.entries;
    const Eigen::MatrixXcd& phi = parts.phi.entries;

    const ChannelSuperop chan = build_channel_superop(params, cutoff);
    const bool joint_possible = (n_modes == 1);

    auto entropies = [&](double eps) {
        Eigen::MatrixXcd rho = base + eps * phi;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8) {
            throw std::runtime_error(
                "entropy_shift_oracle: state not positive at epsilon " +
                std::to_string(eps) + "; reduce epsilon");
        }
        const double s_in = entropy_from_eigenvalues_nats(es.eigenvalues().cwiseMax(0.0));

        FockDensityMatrix state(cutoff, n_modes, rho);
        FockDensityMatrix out = apply_channel_to_mode(chan, state, 0);
        if (n_modes == 2) out = apply_channel_to_mode(chan, out, 1);
        const double s_out = von_neumann_entropy_nats(out);

        double s_joint = 0.0;
        if (joint_possible) {
            const Eigen::MatrixXcd amp = matrix_sqrt_psd(rho);
            if (!chan.has_noise) {
                s_joint = lossy_joint_entropy_nats(amp, params.eta);
            } else {
                Eigen::MatrixXcd psi = amp.reshaped(cutoff * cutoff, 1);
                FockDensityMatrix joint(cutoff, 2, (psi * psi.adjoint()).eval());
                s_joint = von_neumann_entropy_nats(apply_channel_to_mode(chan, joint, 0));
            }
        }
        return std::array<double, 3>{s_in, s_out, s_joint};
    };

    const auto s0 = entropies(0.0);
    std::vector<std::array<double, 3>> c2;
    for (double e : epsilons) {
        const auto sp = entropies(e);
        const auto sm = entropies(-e);
        c2.push_back({(sp[0] + sm[0] - 2.0 * s0[0]) / (2.0 * e * e),
                      (sp[1] + sm[1] - 2.0 * s0[1]) / (2.0 * e * e),
                      (sp[2] + sm[2] - 2.0 * s0[2]) / (2.0 * e * e)});
    }
    EntropyShiftCoefficients out{};
    out.has_joint = joint_possible;
    out.residual = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
        if (comp == 2 && !joint_possible) break;
        std::vector<double> level;
        for (const auto& row : c2) level.push_back(row[comp]);
        // Richardson in eps^2 over the halving ladder
        std::vector<double> rich;
        for (size_t i = 0; i + 1 < level.size(); ++i) {
            rich.push_back((4.0 * level[i + 1] - level[i]) / 3.0);
        }
        const double coef = rich.back();
        const double resid = rich.size() >= 2
                                 ? std::abs(rich.back() - rich[rich.size() - 2])
                                 : std::abs(rich.back() - level.back());
        if (std::abs(coef) > 1e-12 && resid > 0.1 * std::abs(coef)) {
            throw std::runtime_error(
                "entropy_shift_oracle: non-quadratic scaling detected");
        }
        if (comp == 0) out.input = coef;
        if (comp == 1) out.output = coef;
        if (comp == 2) out.joint = coef;
        out.residual = std::max(out.residual, resid);
    }
    return out;
}

}  // namespace gausscap
