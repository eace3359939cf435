#include "gausscap/channel.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gausscap {

ChannelParams::ChannelParams(double eta_, double n_noise_)
    : eta(eta_), n_noise(n_noise_) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("transmissivity eta must lie in [0, 1]");
    }
    if (!(n_noise >= 0.0)) {
        throw std::domain_error("noise photon number must be >= 0");
    }
}

CharTransform char_transform(const ChannelParams& params) {
    return CharTransform{std::sqrt(params.eta),
                         params.n_noise + 0.5 * (1.0 - params.eta)};
}

double output_mean_photon(const ChannelParams& params, double n_in) {
    if (!(n_in >= 0.0)) {
        throw std::domain_error("input mean photon number must be >= 0");
    }
    return params.eta * n_in + params.n_noise;
}

CovarianceMatrix apply_to_cov(const ChannelParams& params,
                              const CovarianceMatrix& cov,
                              const std::vector<int>& channel_modes) {
    std::set<int> seen;
    for (int m : channel_modes) {
        if (m < 0 || m >= cov.n_modes) {
            throw std::out_of_range("channel mode index out of range");
        }
        if (!seen.insert(m).second) {
            throw std::invalid_argument("duplicate channel mode index");
        }
    }
    const CharTransform t = char_transform(params);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(cov.dim());
    for (int m : channel_modes) {
        scale(2 * m) = t.scale;
        scale(2 * m + 1) = t.scale;
    }
    Eigen::MatrixXd out =
        scale.asDiagonal() * cov.entries * scale.asDiagonal();
    for (int m : channel_modes) {
        out(2 * m, 2 * m) += t.damping;
        out(2 * m + 1, 2 * m + 1) += t.damping;
    }
    return CovarianceMatrix(cov.n_modes, std::move(out));
}

CovarianceMatrix joint_output_cov(const ChannelParams& params, const ThermalSpec& spec) {
    return apply_to_cov(params, tmsv_cov(spec), {0});
}

}  // namespace gausscap
