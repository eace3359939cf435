#pragma once

#include <complex>
#include <vector>

#include "gausscap/channel.hpp"

namespace gausscap {

/// First-order modulation of the product-thermal characteristic function by
/// eps * (c * prod_i mu_i^{k_i} conj(mu_i)^{l_i} + c.c.), with the balance
/// sum k_i = sum l_i = m >= 1 that keeps the perturbation number-conserving.
struct PerturbationSpec {
    std::vector<int> k;
    std::vector<int> l;
    std::complex<double> c;
    double epsilon;

    PerturbationSpec(std::vector<int> k_, std::vector<int> l_,
                     std::complex<double> c_, double epsilon_);

    int n_modes() const { return static_cast<int>(k.size()); }
    int order() const;  // m = sum k_i
    bool diagonal() const { return k == l; }
};

/// Amplitude weight as conventionally quoted: |c|^2 for k != l, 4 Re(c)^2
/// for k = l.
double c_zero(const PerturbationSpec& spec);

/// Tr(phi^2 / rho^n) for the bare perturbation operator phi around product
/// thermal(N):  2 (|c|^2 + [k=l] Re(c^2)) * prod(k_i! l_i!) / [N(N+1)]^m.
/// The k = l weight is half of c_zero; the Fock oracle pins this value.
double moment_trace(const PerturbationSpec& spec, double n_mean);

/// Second-order input entropy shift, nats: -(eps^2/2) * moment_trace.
double input_entropy_shift(const PerturbationSpec& spec, double n_mean);

/// Second-order output entropy shift, nats. The channel maps the modulation
/// amplitude c to c * eta^m, so the shift carries eta^{2m}:
/// -(eps^2/2) * eta^{2m} * 2 (|c|^2 + [k=l] Re(c^2)) prod(k_i! l_i!) / [N'(N'+1)]^m.
double output_entropy_shift(const PerturbationSpec& spec, double n_mean,
                            const ChannelParams& params);

/// Second-order entropy shift of the joint output state, nats:
/// -(eps^2/2) * 2 (|c|^2 + [k=l] Re(c^2)) prod(k_i! l_i!) / [N(N+1)]^{2m}
///   * sum_{j=0}^m binom(m,j)^2 B^j A^{m-j},
/// A = n_a(n_a+1) sinh^4 r, B = n_b(n_b+1) cosh^4 r. This is the
/// number-conserving part of the shift; it is exact when n_a = 0 (in
/// particular for n_noise = 0) and an underestimate otherwise.
double joint_entropy_shift(const PerturbationSpec& spec, double n_mean,
                           const ChannelParams& params);

/// (1/[N(N+1)]^m) * sum_j binom(m,j)^2 B^j A^{m-j}; < 1 whenever
/// N > n_noise/(1-eta). Requires 0 < eta < 1.
double normalized_sum(int m, double n_mean, const ChannelParams& params);

/// Mean photon number above which the output state is colder than the input
/// (N' < N): n_noise / (1 - eta).
double noise_threshold_mean_photon(const ChannelParams& params);

struct ShiftReport {
    double d_s_in;     // nats
    double d_s_out;    // nats
    double d_s_joint;  // nats
    double d_ic;       // nats, = d_s_out - d_s_joint
};

ShiftReport coherent_info_shift(const PerturbationSpec& spec, double n_mean,
                                const ChannelParams& params);

/// Tr(phi_a phi_b / rho^n) for two perturbation operators around the same
/// product thermal(N). Vanishes unless (k',l') equals (k,l) or the
/// conjugate-swapped pair (l,k):
///   prod(k_i! l_i!)/[N(N+1)]^m *
///     (2 Re(c_a conj(c_b)) [kl = k'l'] + 2 Re(c_a c_b) [lk = k'l']).
double cross_term(const PerturbationSpec& a, const PerturbationSpec& b,
                  double n_mean);

}  // namespace gausscap
