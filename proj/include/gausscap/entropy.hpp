#pragma once

#include <cmath>
#include <stdexcept>

namespace gausscap {

inline constexpr double kLn2 = 0.69314718055994530942;

/// Entropy of a thermal state with mean photon number s, in nats:
/// (s+1)ln(s+1) - s ln s, extended continuously to g(0) = 0.
inline double bosonic_entropy_nats(double s) {
    if (s < 0.0) {
        throw std::domain_error("bosonic_entropy: mean photon number must be >= 0");
    }
    if (s < 1e-15) {
        return 0.0;
    }
    return s * std::log1p(1.0 / s) + std::log1p(s);
}

/// g(s) = (s+1)log2(s+1) - s log2 s, in bits.
inline double bosonic_entropy(double s) {
    return bosonic_entropy_nats(s) / kLn2;
}

/// Entropy contribution of one symplectic eigenvalue nu (>= 1/2), in bits.
/// Values within fp noise below 1/2 are treated as the uncertainty limit.
inline double entropy_from_symplectic(double nu) {
    const double s = nu - 0.5;
    return bosonic_entropy(s < 0.0 ? 0.0 : s);
}

}  // namespace gausscap
