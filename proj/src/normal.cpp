#include "qsr/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace qsr {

double std_normal_cdf(double z) {
    if (std::isnan(z)) throw std::invalid_argument("std_normal_cdf: NaN argument");
    // erfc keeps relative accuracy for z << 0, where 0.5*(1+erf) would cancel.
    return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

double inverse_std_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_std_normal_cdf: p outside (0, 1)");
    double lo = -40.0, hi = 40.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qsr
