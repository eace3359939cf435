#pragma once

#include <vector>

#include "gausscap/covariance.hpp"

namespace gausscap {

/// Lossy channel with additive classical Gaussian noise: transmissivity
/// eta in [0, 1] and noise photons n_noise >= 0. Endpoints are admitted as
/// exact degenerate cases (eta=1 identity-plus-noise, eta=0 replacement).
struct ChannelParams {
    double eta;
    double n_noise;

    ChannelParams(double eta_, double n_noise_);
};

/// Action on characteristic functions:
/// chi'(mu) = chi(scale * mu) * exp(-damping * |mu|^2).
struct CharTransform {
    double scale;    // sqrt(eta)
    double damping;  // n_noise + (1 - eta)/2
};

CharTransform char_transform(const ChannelParams& params);

/// Mean photon number after the channel: eta * n_in + n_noise.
double output_mean_photon(const ChannelParams& params, double n_in);

/// Covariance action: channel-mode blocks gamma -> eta*gamma + damping*I,
/// cross blocks to untouched modes scaled by sqrt(eta).
CovarianceMatrix apply_to_cov(const ChannelParams& params,
                              const CovarianceMatrix& cov,
                              const std::vector<int>& channel_modes);

/// Channel applied to mode Q of the purification of thermal(N):
/// Q block (N'+1/2)I, R block (N+1/2)I, cross sqrt(eta*N(N+1))*diag(1,-1).
CovarianceMatrix joint_output_cov(const ChannelParams& params, const ThermalSpec& spec);

}  // namespace gausscap
