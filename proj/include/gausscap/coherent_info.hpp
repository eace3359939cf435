#pragma once

#include <vector>

#include "gausscap/channel.hpp"
#include "gausscap/covariance.hpp"

namespace gausscap {

/// Normal-mode data of the joint output state for a thermal input:
/// occupations n_a (output-like) and n_b (reference-like), discriminant
/// d_big = n_a + n_b + 1 and two-mode squeezing parameter r, tied together by
/// N = n_b cosh^2 r + (n_a + 1) sinh^2 r.
struct JointSpectrum {
    double d_big;
    double n_a;
    double n_b;
    double r;

    double cosh2_r() const;  // cosh^2 r
    double sinh2_r() const;  // sinh^2 r
};

struct CoherentInfoReport {
    double value;     // bits
    double term_out;  // g(N')
    double term_a;    // g(n_a)
    double term_b;    // g(n_b)
};

/// Symplectic spectrum data of the joint output for thermal(N) input:
///   D = sqrt((N'+N+1)^2 - 4 eta N(N+1)),
///   n_{a,b} = (D +- (N'-N) - 1)/2,
///   tanh 2r = 2 sqrt(eta N(N+1)) / (N'+N+1).
/// The assignment n_a - n_b = N' - N is fixed so the occupation relation
/// above holds; {n_a+1/2, n_b+1/2} equal the Williamson eigenvalues of
/// joint_output_cov.
JointSpectrum joint_spectrum(const ChannelParams& params, const ThermalSpec& spec);

/// I_c = g(N') - g(n_a) - g(n_b) for thermal input, in bits.
CoherentInfoReport thermal_coherent_info(const ChannelParams& params,
                                         const ThermalSpec& spec);

/// Large-N limit of the thermal coherent information, unclamped:
/// log2(eta) - log2(1-eta) - g(n_noise / (1-eta)). Requires 0 < eta < 1.
double thermal_ci_limit(const ChannelParams& params);

/// Conjectured quantum capacity max{0, thermal_ci_limit}. By convention
/// returns 0 at eta = 0 and +infinity at eta = 1 (noise cannot erase the
/// identity channel's unbounded thermal coherent information).
double capacity_conjecture(const ChannelParams& params);

/// Symplectic eigenvalues d0 (output) and d1 >= d2 (joint output) for a
/// single-mode Gaussian input of energy E and shape x.
struct GaussianSpectrum {
    double d0;
    double d1;
    double d2;
};

GaussianSpectrum gaussian_spectrum(const ChannelParams& params,
                                   const GaussianInputParams& input);

/// I_c = g(d0-1/2) - g(d1-1/2) - g(d2-1/2); equals the thermal formula at
/// x = 1 with N = E - 1/2.
CoherentInfoReport gaussian_coherent_info(const ChannelParams& params,
                                          const GaussianInputParams& input);

/// Closed-form dI_c/dx at fixed energy, via
/// f(z) = (1/2z) log2((z+1/2)/(z-1/2)) d(z^2)/dx.
/// Throws if any d_i <= 1/2 + 1e-9 (pure-state direction, f singular).
double dIc_dx(const ChannelParams& params, const GaussianInputParams& input);

/// The three f-terms of the derivative, dI_c/dx = f_d0 - f_d1 - f_d2.
struct DerivativeTerms {
    double f_d0;
    double f_d1;
    double f_d2;
};

DerivativeTerms dIc_dx_terms(const ChannelParams& params,
                             const GaussianInputParams& input);

/// Large-energy behaviour at fixed x, for 0 < eta < 1:
///  - f(d0) - f(d1) tends to f0_minus_f1 (itself O(1/E)),
///  - E * f(d2) tends to f2_times_energy (0 when n_noise = 0),
///  - d2 tends to d2_limit = damping / (1 - eta).
struct LargeEAsymptotics {
    double f0_minus_f1;
    double f2_times_energy;
    double d2_limit;
};

LargeEAsymptotics large_e_asymptotics(const ChannelParams& params,
                                      const GaussianInputParams& input);

/// Grid argmax of gaussian_coherent_info over x at fixed energy.
/// When the large-E derivative margin is positive (high-transmissivity
/// channels), the maximiser is the thermal point x = 1 for energies above
/// roughly kThermalOptimumEnergyThreshold.
double argmax_over_x(const ChannelParams& params, double energy,
                     const std::vector<double>& x_grid);

inline constexpr double kThermalOptimumEnergyThreshold = 50.0;

}  // namespace gausscap
