#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <functional>
#include <vector>

#include "gausscap/channel.hpp"
#include "gausscap/perturbation.hpp"

namespace gausscap {

using Complex = std::complex<double>;

/// Truncated photon-number-basis operator on 1 or 2 modes. For two modes the
/// composite index is q * cutoff + r with mode 0 (Q) major.
struct FockDensityMatrix {
    int cutoff;
    int n_modes;
    Eigen::MatrixXcd entries;

    FockDensityMatrix(int cutoff_, int n_modes_, Eigen::MatrixXcd m);

    int dim() const { return entries.rows() == 0 ? 0 : static_cast<int>(entries.rows()); }
    double trace_real() const { return entries.trace().real(); }
};

/// Deterministic polar quadrature: Gauss-Laguerre radial rule scaled so the
/// weight absorbs the dominant Gaussian decay of the characteristic function,
/// uniform angular rule.
struct QuadratureSpec {
    int radial_nodes;
    int angular_nodes;
    double radius_scale;

    QuadratureSpec(int radial, int angular, double scale);
};

/// Nodes and weights of the n-point Gauss-Laguerre rule for weight e^{-x}.
void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// <i|D(mu)|j> for D(mu) = exp(mu a^dag - conj(mu) a).
Complex displacement_element(int i, int j, Complex mu);

/// D(r) for real r, all elements up to dim d, via stable column recurrence.
Eigen::MatrixXd displacement_matrix_real(double r, int d);

/// Thermal state, diagonal geometric distribution renormalized on the
/// truncation. Throws when v^cutoff exceeds tail_tol.
FockDensityMatrix thermal_fock(double n_mean, int cutoff, double tail_tol = 1e-12);

/// Two-mode squeezed vacuum purifying thermal(N), truncated (no tail guard).
FockDensityMatrix tmsv_fock(double n_mean, int cutoff);

/// Single-mode operator int (d^2mu/pi) chi(mu) <i|D(-mu)|j> by the polar rule.
/// Computed at two node levels; throws when the pair disagrees beyond 1e-6.
FockDensityMatrix state_from_charfn(const std::function<Complex(Complex)>& chi,
                                    int cutoff, const QuadratureSpec& quad);

/// Moment operator int (d^2mu/pi) chi_N(mu) mu^k conj(mu)^l D(-mu): a single
/// band, with radial Laguerre-transform integrals evaluated in closed form.
Eigen::MatrixXd thermal_moment_op(int k, int l, double n_mean, int cutoff);

struct PerturbedState {
    FockDensityMatrix state;  // thermal^n + eps * phi
    FockDensityMatrix phi;    // bare traceless perturbation operator
};

/// Builds the perturbed product-thermal state for up to two modes. The bare
/// phi comes from the closed-form moment operators; the quadrature spec is
/// used for an embedded cross-check of the first mode's factor and triggers a
/// convergence error on disagreement. Positivity of the truncated state is
/// verified; failure suggests a smaller epsilon.
PerturbedState perturbed_state(const PerturbationSpec& spec, double n_mean,
                               int cutoff, const QuadratureSpec& quad);

QuadratureSpec default_quadrature(double n_mean, int cutoff);

/// Single-mode channel action as a sparse superoperator on vec(rho):
/// photon-loss Kraus ladder followed by Gaussian displacement averaging
/// (radial Gauss-Laguerre; the uniform angular rule is exact and reduces to
/// index-difference conservation).
struct ChannelSuperop {
    int cutoff;
    bool has_noise;
    Eigen::SparseMatrix<double> loss;
    Eigen::SparseMatrix<double> noise;

    Eigen::MatrixXcd apply_vec(const Eigen::MatrixXcd& columns) const;
};

ChannelSuperop build_channel_superop(const ChannelParams& params, int cutoff,
                                     int env_cutoff = -1, int radial_nodes = -1);

/// Applies the channel to one mode of a 1- or 2-mode state.
FockDensityMatrix apply_channel_to_mode(const ChannelSuperop& superop,
                                        const FockDensityMatrix& rho, int mode);

/// Channel on mode 0 (the Q mode). Trace preservation within 1e-6 is
/// enforced; a violation indicates an inadequate cutoff.
FockDensityMatrix apply_channel_fock(const ChannelParams& params,
                                     const FockDensityMatrix& rho,
                                     int env_cutoff = -1,
                                     int noise_radial_nodes = -1);

double von_neumann_entropy_nats(const FockDensityMatrix& rho);
double von_neumann_entropy(const FockDensityMatrix& rho);  // bits

/// Tr(phi rho^{-1} phi) in rho's eigenbasis. Eigenvalues below eigen_floor
/// raise a conditioning error; callers with analytically exact phi may lower
/// the floor deliberately.
double trace_quotient(const FockDensityMatrix& phi, const FockDensityMatrix& rho,
                      double eigen_floor = 1e-14);

/// exp(r (a^dag b^dag - a b)) on the truncated two-mode space.
Eigen::SparseMatrix<double> two_mode_squeeze_matrix(double r, int cutoff);

/// Joint output state for thermal(N) input built independently of the channel
/// code: thermal(n_a) x thermal(n_b) conjugated by the two-mode squeeze from
/// the closed-form normal-mode data.
FockDensityMatrix normal_form_joint_state(const ChannelParams& params,
                                          double n_mean, int cutoff);

/// Max elementwise deviation between the channel image of
/// adag^k rho_QR a^m and v^{-(k+m)/2} b^k rho_QR' bdag^m, with rho_QR' built
/// by the normal-form route. With lowering_first the mirrored identity is
/// checked instead: a^k rho_QR adag^m against v^{+(k+m)/2} bdag^k rho_QR' b^m.
double lemma_check(int k, int m, double n_mean, const ChannelParams& params,
                   int cutoff, bool lowering_first = false);

struct EntropyShiftCoefficients {
    double input;     // nats per eps^2
    double output;    // nats per eps^2
    double joint;     // nats per eps^2 (single-mode specs only)
    bool has_joint;
    double residual;  // largest extrapolation residual across the three
};

/// Quadratic (eps^2) coefficients of the input, output and joint entropy
/// responses, extracted by symmetric second differences over a halving
/// epsilon ladder (>= 3 values) with Richardson extrapolation. Odd-order
/// drifts cancel by construction. Throws a diagnostic error when the
/// residual exceeds 10% of a coefficient.
EntropyShiftCoefficients entropy_shift_oracle(const PerturbationSpec& spec,
                                              double n_mean,
                                              const ChannelParams& params,
                                              const std::vector<double>& epsilons,
                                              int cutoff);

/// Mean photon number sum over all modes of a Fock state.
double fock_mean_photon(const FockDensityMatrix& rho);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// a^dag as a cutoff x cutoff matrix (and its transpose for a).
Eigen::MatrixXd creation_op(int cutoff);

}  // namespace gausscap
