#pragma once

#include <cmath>
#include <span>

namespace infoscout {

inline double normal_pdf(double x, double mu, double sigma) {
    double u = (x - mu) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * M_PI));
}

inline double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// Entropy in bits of a normalized discrete distribution.
inline double entropy_bits(std::span<const double> p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

inline double binary_entropy_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace infoscout
