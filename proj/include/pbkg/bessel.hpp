#ifndef PBKG_BESSEL_HPP
#define PBKG_BESSEL_HPP

namespace pbkg {

/// Modified Bessel function of the second kind, order zero.
///
/// Three regimes stitched together: the ascending series for z <= 2, an
/// exponentially convergent trapezoid rule on the cosh-integral
/// representation for 2 < z < 30, and the scaled large-z asymptotic series
/// beyond.  Relative accuracy is better than 1e-13 on [1e-6, 700].
/// Throws parameter_error for z <= 0 (K0 diverges at the origin).
double bessel_k0(double z);

/// Modified Bessel function of the second kind, order one.  Same regime
/// structure and accuracy as bessel_k0.
double bessel_k1(double z);

} // namespace pbkg

#endif
