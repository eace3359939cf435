#include "gausscap/perturbation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gausscap/coherent_info.hpp"

namespace gausscap {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
    return b;
}

double factorial_product(const PerturbationSpec& spec) {
    double p = 1.0;
    for (int v : spec.k) p *= factorial(v);
    for (int v : spec.l) p *= factorial(v);
    return p;
}

// |c|^2 + [k=l] Re(c^2); the quadratic weight entering every trace formula.
double quadratic_weight(const PerturbationSpec& spec) {
    const double norm2 = std::norm(spec.c);
    if (!spec.diagonal()) return norm2;
    return norm2 + (spec.c * spec.c).real();
}

double binomial_moment_sum(int m, const JointSpectrum& js) {
    const double ch2 = js.cosh2_r();
    const double sh2 = js.sinh2_r();
    const double a_term = js.n_a * (js.n_a + 1.0) * sh2 * sh2;
    const double b_term = js.n_b * (js.n_b + 1.0) * ch2 * ch2;
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double cmj = binomial(m, j);
        sum += cmj * cmj * std::pow(b_term, j) * std::pow(a_term, m - j);
    }
    return sum;
}

}  // namespace

PerturbationSpec::PerturbationSpec(std::vector<int> k_, std::vector<int> l_,
                                   std::complex<double> c_, double epsilon_)
    : k(std::move(k_)), l(std::move(l_)), c(c_), epsilon(epsilon_) {
    if (k.empty() || k.size() != l.size()) {
        throw std::invalid_argument("perturbation exponent vectors must match and be nonempty");
    }
    for (int v : k) {
        if (v < 0) throw std::invalid_argument("perturbation exponents must be >= 0");
    }
    for (int v : l) {
        if (v < 0) throw std::invalid_argument("perturbation exponents must be >= 0");
    }
    const int mk = std::accumulate(k.begin(), k.end(), 0);
    const int ml = std::accumulate(l.begin(), l.end(), 0);
    if (mk != ml) {
        throw std::invalid_argument(
            "unbalanced perturbation (sum k != sum l) has no first-order effect and is rejected");
    }
    if (mk < 1) {
        throw std::invalid_argument("perturbation order m must be >= 1");
    }
}

int PerturbationSpec::order() const {
    return std::accumulate(k.begin(), k.end(), 0);
}

double c_zero(const PerturbationSpec& spec) {
    if (spec.diagonal()) {
        const double cr = spec.c.real();
        return 4.0 * cr * cr;
    }
    return std::norm(spec.c);
}

double moment_trace(const PerturbationSpec& spec, double n_mean) {
    if (!(n_mean > 0.0)) {
        throw std::domain_error("moment_trace: thermal state must have full support (N > 0)");
    }
    const int m = spec.order();
    return 2.0 * quadratic_weight(spec) * factorial_product(spec) /
           std::pow(n_mean * (n_mean + 1.0), m);
}

double input_entropy_shift(const PerturbationSpec& spec, double n_mean) {
    return -0.5 * spec.epsilon * spec.epsilon * moment_trace(spec, n_mean);
}

double output_entropy_shift(const PerturbationSpec& spec, double n_mean,
                            const ChannelParams& params) {
    const double np = output_mean_photon(params, n_mean);
    if (!(np > 0.0)) {
        throw std::domain_error("output_entropy_shift: output state must have full support");
    }
    const int m = spec.order();
    const double trace_out = 2.0 * quadratic_weight(spec) * factorial_product(spec) *
                             std::pow(params.eta, 2 * m) /
                             std::pow(np * (np + 1.0), m);
    return -0.5 * spec.epsilon * spec.epsilon * trace_out;
}

double joint_entropy_shift(const PerturbationSpec& spec, double n_mean,
                           const ChannelParams& params) {
    if (!(n_mean > 0.0)) {
        throw std::domain_error("joint_entropy_shift: thermal state must have full support");
    }
    const int m = spec.order();
    const JointSpectrum js = joint_spectrum(params, ThermalSpec(n_mean));
    const double sum = binomial_moment_sum(m, js);
    const double trace_joint = 2.0 * quadratic_weight(spec) * factorial_product(spec) *
                               sum / std::pow(n_mean * (n_mean + 1.0), 2 * m);
    return -0.5 * spec.epsilon * spec.epsilon * trace_joint;
}

double normalized_sum(int m, double n_mean, const ChannelParams& params) {
    if (m < 1) {
        throw std::invalid_argument("normalized_sum: order m must be >= 1");
    }
    if (!(params.eta > 0.0 && params.eta < 1.0)) {
        throw std::domain_error("normalized_sum requires 0 < eta < 1");
    }
    if (!(n_mean > 0.0)) {
        throw std::domain_error("normalized_sum: N must be > 0");
    }
    const JointSpectrum js = joint_spectrum(params, ThermalSpec(n_mean));
    return binomial_moment_sum(m, js) / std::pow(n_mean * (n_mean + 1.0), m);
}

double noise_threshold_mean_photon(const ChannelParams& params) {
    if (!(params.eta < 1.0)) {
        throw std::domain_error("noise threshold undefined at eta = 1");
    }
    return params.n_noise / (1.0 - params.eta);
}

ShiftReport coherent_info_shift(const PerturbationSpec& spec, double n_mean,
                                const ChannelParams& params) {
    ShiftReport rep;
    rep.d_s_in = input_entropy_shift(spec, n_mean);
    rep.d_s_out = output_entropy_shift(spec, n_mean, params);
    rep.d_s_joint = joint_entropy_shift(spec, n_mean, params);
    rep.d_ic = rep.d_s_out - rep.d_s_joint;
    return rep;
}

double cross_term(const PerturbationSpec& a, const PerturbationSpec& b,
                  double n_mean) {
    if (a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("cross_term: mode counts differ");
    }
    if (!(n_mean > 0.0)) {
        throw std::domain_error("cross_term: N must be > 0");
    }
    if (a.order() != b.order()) {
        return 0.0;
    }
    double weight = 0.0;
    if (a.k == b.k && a.l == b.l) {
        weight += 2.0 * (a.c * std::conj(b.c)).real();
    }
    if (a.l == b.k && a.k == b.l) {
        weight += 2.0 * (a.c * b.c).real();
    }
    if (weight == 0.0) {
        return 0.0;
    }
    return weight * factorial_product(a) /
           std::pow(n_mean * (n_mean + 1.0), a.order());
}

}  // namespace gausscap
