#include "pbkg/bessel.hpp"

#include <cmath>
#include <string>

#include "pbkg/errors.hpp"

namespace pbkg {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kSeriesCut = 2.0;
constexpr double kAsymptoticCut = 30.0;

void require_positive(double z, const char* fn) {
    if (!(z > 0.0)) {
        throw parameter_error(std::string(fn) + ": argument must be positive, got " +
                              std::to_string(z));
    }
}

// Ascending series, valid for small z.  All sums have positive terms, so the
// only cancellation is against the log prefactor, which costs at most one
// digit below z = 2.
double k0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;      // q^k / (k!)^2
    double i0 = 1.0;
    double hk = 0.0;        // harmonic number H_k
    double sum = 0.0;       // sum of term * H_k
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        i0 += term;
        hk += 1.0 / k;
        sum += term * hk;
        if (term < 1e-19 * i0) break;
    }
    return -(std::log(0.5 * z) + kEulerGamma) * i0 + sum;
}

double k1_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;      // q^k / (k! (k+1)!)
    double i1 = 1.0;        // I1(z) = (z/2) * i1
    double psum = 0.0;      // sum of term * (psi(k+1) + psi(k+2))
    double psi_a = -kEulerGamma;        // psi(1)
    double psi_b = 1.0 - kEulerGamma;   // psi(2)
    psum = psi_a + psi_b;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        i1 += term;
        psi_a += 1.0 / k;
        psi_b += 1.0 / (k + 1);
        psum += term * (psi_a + psi_b);
        if (term < 1e-19 * i1) break;
    }
    const double half_z = 0.5 * z;
    return 1.0 / z + std::log(half_z) * half_z * i1 - 0.5 * half_z * psum;
}

// exp(z) * K_nu(z) by the trapezoid rule on
//   e^z K_nu(z) = int_0^inf exp(-2 z sinh^2(t/2)) cosh(nu t) dt.
// The integrand extends to an even analytic function of t, so the trapezoid
// converges geometrically in 1/h; h = 0.08 leaves the rule's own error far
// below double roundoff over the z range where this branch is used.
double k_scaled_coshint(int nu, double z) {
    const double h = 0.08;
    const double t_max = std::acosh(1.0 + 48.0 / z) + 1.0;
    double acc = 0.5; // t = 0 contributes cosh(0) = 1, half weight
    const int n = static_cast<int>(t_max / h) + 1;
    for (int i = 1; i <= n; ++i) {
        const double t = h * i;
        const double s = std::sinh(0.5 * t);
        const double w = std::exp(-2.0 * z * s * s);
        acc += (nu == 0) ? w : w * std::cosh(t);
    }
    return acc * h;
}

// exp(z) * K_nu(z) by the large-z asymptotic series.
double k_scaled_asymptotic(int nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        term *= (mu - odd * odd) / (8.0 * z * (k + 1));
        sum += term;
        if (std::fabs(term) < 1e-18) break;
    }
    return std::sqrt(M_PI / (2.0 * z)) * sum;
}

double bessel_k(int nu, double z) {
    if (z <= kSeriesCut) {
        return (nu == 0) ? k0_series(z) : k1_series(z);
    }
    const double scaled = (z < kAsymptoticCut) ? k_scaled_coshint(nu, z)
                                               : k_scaled_asymptotic(nu, z);
    return scaled * std::exp(-z);
}

} // namespace

double bessel_k0(double z) {
    require_positive(z, "bessel_k0");
    return bessel_k(0, z);
}

double bessel_k1(double z) {
    require_positive(z, "bessel_k1");
    return bessel_k(1, z);
}

} // namespace pbkg
