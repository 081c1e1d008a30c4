// Standard normal CDF and its inverse.
#pragma once

namespace qsr {

// Phi(z) for the standard normal.  Absolute error below 1e-14 over the full
// double range; implemented through the complementary error function so the
// deep tails keep relative accuracy.
double std_normal_cdf(double z);

// Inverse of std_normal_cdf by bisection to an interval of width 1e-13.
// Matches the true quantile to about 1e-12 for |result| <= 3.5; accuracy in
// the deeper tails is limited by the double resolution of p near 0 and 1.
// Requires p strictly inside (0, 1).
double inverse_std_normal_cdf(double p);

}  // namespace qsr
