#include "gausscap/coherent_info.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gausscap/entropy.hpp"

namespace gausscap {

double JointSpectrum::cosh2_r() const {
    const double c = std::cosh(2.0 * r);
    return 0.5 * (1.0 + c);
}

double JointSpectrum::sinh2_r() const {
    const double c = std::cosh(2.0 * r);
    return 0.5 * (c - 1.0);
}

JointSpectrum joint_spectrum(const ChannelParams& params, const ThermalSpec& spec) {
    const double n = spec.n_mean;
    const double np = output_mean_photon(params, n);
    const double sum1 = np + n + 1.0;
    const double disc = sum1 * sum1 - 4.0 * params.eta * n * (n + 1.0);
    const double d = std::sqrt(std::max(0.0, disc));
    JointSpectrum js;
    js.d_big = d;
    js.n_a = std::max(0.0, 0.5 * (d + (np - n) - 1.0));
    js.n_b = std::max(0.0, 0.5 * (d - (np - n) - 1.0));
    const double cosh2r = std::max(1.0, sum1 / d);
    js.r = 0.5 * std::acosh(cosh2r);
    return js;
}

CoherentInfoReport thermal_coherent_info(const ChannelParams& params,
                                         const ThermalSpec& spec) {
    const JointSpectrum js = joint_spectrum(params, spec);
    CoherentInfoReport rep;
    rep.term_out = bosonic_entropy(output_mean_photon(params, spec.n_mean));
    rep.term_a = bosonic_entropy(js.n_a);
    rep.term_b = bosonic_entropy(js.n_b);
    rep.value = rep.term_out - rep.term_a - rep.term_b;
    return rep;
}

double thermal_ci_limit(const ChannelParams& params) {
    if (!(params.eta > 0.0 && params.eta < 1.0)) {
        throw std::domain_error("thermal_ci_limit requires 0 < eta < 1");
    }
    return std::log2(params.eta) - std::log2(1.0 - params.eta) -
           bosonic_entropy(params.n_noise / (1.0 - params.eta));
}

double capacity_conjecture(const ChannelParams& params) {
    if (params.eta == 0.0) {
        return 0.0;
    }
    if (params.eta == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(0.0, thermal_ci_limit(params));
}

namespace {

struct GaussianPolys {
    double npp;  // damping n_noise + (1-eta)/2
    double x_big;
    double y_big;
    double root;  // sqrt(X^2 - 4Y)
};

GaussianPolys gaussian_polys(const ChannelParams& params,
                             const GaussianInputParams& input) {
    const double eta = params.eta;
    const double e = input.energy;
    const double x = input.x;
    GaussianPolys p;
    p.npp = params.n_noise + 0.5 * (1.0 - eta);
    p.x_big = p.npp * p.npp + 2.0 * eta * e * p.npp + 0.5 * eta +
              (1.0 - eta) * (1.0 - eta) * e * e * x;
    p.y_big = 0.5 * eta * e * p.npp + eta * eta / 16.0 + e * e * p.npp * p.npp * x;
    const double disc = p.x_big * p.x_big - 4.0 * p.y_big;
    if (disc < -1e-9 * p.x_big * p.x_big) {
        throw std::logic_error("gaussian spectrum discriminant is negative");
    }
    p.root = std::sqrt(std::max(0.0, disc));
    return p;
}

double f_of(double z, double dz2_dx) {
    return (0.5 / z) * std::log2((z + 0.5) / (z - 0.5)) * dz2_dx;
}

}  // namespace

GaussianSpectrum gaussian_spectrum(const ChannelParams& params,
                                   const GaussianInputParams& input) {
    const GaussianPolys p = gaussian_polys(params, input);
    const double eta = params.eta;
    const double e = input.energy;
    GaussianSpectrum gs;
    gs.d0 = std::sqrt(p.npp * p.npp + 2.0 * eta * e * p.npp +
                      eta * eta * e * e * input.x);
    gs.d1 = std::sqrt(0.5 * (p.x_big + p.root));
    gs.d2 = std::sqrt(2.0 * p.y_big / (p.x_big + p.root));
    return gs;
}

CoherentInfoReport gaussian_coherent_info(const ChannelParams& params,
                                          const GaussianInputParams& input) {
    const GaussianSpectrum gs = gaussian_spectrum(params, input);
    CoherentInfoReport rep;
    rep.term_out = entropy_from_symplectic(gs.d0);
    rep.term_a = entropy_from_symplectic(gs.d1);
    rep.term_b = entropy_from_symplectic(gs.d2);
    rep.value = rep.term_out - rep.term_a - rep.term_b;
    return rep;
}

DerivativeTerms dIc_dx_terms(const ChannelParams& params,
                             const GaussianInputParams& input) {
    const GaussianPolys p = gaussian_polys(params, input);
    const GaussianSpectrum gs = gaussian_spectrum(params, input);
    if (gs.d0 <= 0.5 + 1e-9 || gs.d1 <= 0.5 + 1e-9 || gs.d2 <= 0.5 + 1e-9) {
        throw std::domain_error(
            "dIc_dx: symplectic eigenvalue at the pure-state limit, derivative singular");
    }
    const double eta = params.eta;
    const double e = input.energy;
    const double dd0 = eta * eta * e * e;
    const double xp = (1.0 - eta) * (1.0 - eta) * e * e;
    const double yp = e * e * p.npp * p.npp;
    const double ratio = (p.x_big * xp - 2.0 * yp) / p.root;
    const double dd1 = 0.5 * (xp + ratio);
    const double dd2 = 0.5 * (xp - ratio);
    return DerivativeTerms{f_of(gs.d0, dd0), f_of(gs.d1, dd1), f_of(gs.d2, dd2)};
}

double dIc_dx(const ChannelParams& params, const GaussianInputParams& input) {
    const DerivativeTerms t = dIc_dx_terms(params, input);
    return t.f_d0 - t.f_d1 - t.f_d2;
}

LargeEAsymptotics large_e_asymptotics(const ChannelParams& params,
                                      const GaussianInputParams& input) {
    const double eta = params.eta;
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::domain_error("large_e_asymptotics requires 0 < eta < 1");
    }
    const double x = input.x;
    const double e = input.energy;
    const double npp = params.n_noise + 0.5 * (1.0 - eta);
    LargeEAsymptotics out;
    out.f0_minus_f1 =
        -(npp / (x * e * kLn2)) * (1.0 / eta - eta / ((1.0 - eta) * (1.0 - eta)));
    out.d2_limit = npp / (1.0 - eta);
    if (params.n_noise == 0.0) {
        out.f2_times_energy = 0.0;  // bracket and log singularity cancel to zero
    } else {
        const double half = 0.5 * (1.0 - eta);
        const double bracket = npp * npp - half * half;
        out.f2_times_energy = eta * bracket /
                              (x * x * (1.0 - eta) * (1.0 - eta) * (1.0 - eta)) *
                              std::log2((npp + half) / (npp - half));
    }
    return out;
}

double argmax_over_x(const ChannelParams& params, double energy,
                     const std::vector<double>& x_grid) {
    if (x_grid.empty()) {
        throw std::invalid_argument("argmax_over_x: empty grid");
    }
    double best_x = x_grid.front();
    double best_v = -std::numeric_limits<double>::infinity();
    for (double x : x_grid) {
        const double v =
            gaussian_coherent_info(params, GaussianInputParams(energy, x)).value;
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace gausscap
