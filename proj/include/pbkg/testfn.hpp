#ifndef PBKG_TESTFN_HPP
#define PBKG_TESTFN_HPP

#include <complex>
#include <vector>

#include "pbkg/quadrature.hpp"

namespace pbkg {

using Complex = std::complex<double>;

/// Parametric Schwartz-class test function.
///
/// gaussian: f(x) = normalization * exp(-(x-center)^2 / (2 width^2)), so the
/// integral is normalization * width * sqrt(2 pi) and the Fourier transform
/// is available in closed form.
///
/// bump: the standard smooth exp(-1/(1-u^2)) profile scaled to
/// [center - width, center + width] and normalized numerically so the
/// integral equals `normalization` exactly.
class TestFunction {
public:
    enum class Family { gaussian, bump };

    static TestFunction gaussian(double center, double width, double normalization);
    static TestFunction bump(double center, double width, double normalization);

    Family family() const noexcept { return family_; }
    double center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    double normalization() const noexcept { return normalization_; }

    double operator()(double x) const;

    /// Support interval; for the gaussian this is the effective support
    /// outside of which the function is below 1e-22 of its peak.
    double support_lo() const;
    double support_hi() const;

    bool has_analytic_hat() const noexcept { return family_ == Family::gaussian; }

private:
    TestFunction(Family family, double center, double width, double normalization);
    Family family_;
    double center_;
    double width_;
    double normalization_;
};

/// Unitary Fourier transform f_hat(p) = (1/sqrt(2 pi)) int f(u) e^{-i p u} du.
/// Closed form for gaussians; Gauss-Legendre over the support for bumps
/// (node count grows with |p| width so the oscillation stays resolved).
Complex fourier_hat(const TestFunction& f, double p);

/// delta_n(x) = n * mother(n x) for a mother bump supported in [-1, 1] with
/// unit integral.  Construction checks both hypotheses.
struct DeltaSequence {
    TestFunction mother;
    int n;

    DeltaSequence(TestFunction mother_fn, int index);
};

/// The n-th member as a TestFunction (bump with support and width shrunk by
/// 1/n, integral still 1).
TestFunction delta_member(const DeltaSequence& seq);

/// Uniformly sampled kernel for convolution tests.
struct GridFunction {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values;

    double x_last() const { return x0 + dx * (static_cast<double>(values.size()) - 1.0); }
    double eval(double x) const; // local cubic interpolation
};

/// int f(y - x) kernel(x) dx over the overlap of the supports.  Throws
/// coverage_error when the grid does not cover the full overlap window.
double convolve(const GridFunction& kernel, const TestFunction& f, double y);

/// Smeared momentum two-point function at the boundary angle:
///   -(i / (2 sqrt(2 pi))) int_R w_k f_hat(2k) e^{2iky} dk,
/// always finite: the transform's rapid decay beats the linear growth of w_k.
Complex smear_g2(const TestFunction& f, double y, double m, const QuadSpec& quad);

/// Same integral with an explicit exp(-eps|k|) damping; pairing this with a
/// direct x-side convolution of the equally damped kernel checks the
/// change-of-integration step behind the smeared form.
Complex smear_g2_regulated(const TestFunction& f, double y, double m, double eps,
                           const QuadSpec& quad);

} // namespace pbkg

#endif
