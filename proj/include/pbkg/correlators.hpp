#ifndef PBKG_CORRELATORS_HPP
#define PBKG_CORRELATORS_HPP

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbkg/bessel.hpp"
#include "pbkg/pseudoboson.hpp"
#include "pbkg/quadrature.hpp"

namespace pbkg {

/// Complex value of one continuum integral plus bookkeeping.  converged
/// means the error estimate met the tolerance the method can honor: the bare
/// abs_tol for direct quadrature, the extrapolation level for regulated
/// limits (recorded in `regulator`).
struct CorrelatorResult {
    Complex value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    std::string method;
    std::string regulator; // empty when no regulator was involved
    bool converged = false;
};

/// Cutoff study of a logarithmically divergent integral: values of the
/// real equal-point two-point piece at finite cutoffs, with the a*ln(L)+b fit.
struct DivergenceScan {
    std::vector<double> cutoffs;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;
};

/// The default regulator schedule used by every eps -> 0 extrapolation here.
std::vector<double> default_regulator_schedule();

/// Default cutoff schedule for divergence scans (scaled by the mass).
std::vector<double> default_scan_cutoffs(double m);

/// int dk/(4 pi w) e^{i k (x-y) - i w (t-s)}.  Finite away from coincident
/// points; at equal times it equals K0(m|x-y|)/(2 pi).  Throws
/// divergence_error at the coincident point, carrying the log slope 1/(2 pi).
CorrelatorResult delta_plus(double x, double y, double t, double s, double m,
                            const QuadSpec& quad);

/// Equal-time two-point function of the deformed field,
///   (1/2pi) [cos(2 theta) I(|x-y|) + i sin(2 theta) I(|x+y|)],
/// I(b) = int_0^inf cos(bk)/w dk.  Throws divergence_error whenever a
/// nonvanishing coefficient multiplies a divergent piece (b = 0); the error
/// carries the finite remainder when one exists.
CorrelatorResult f2_equal_time(ThetaParam theta, double x, double y, double m,
                               const QuadSpec& quad);

/// Split of the equal-point limit y -> x into the divergent-coefficient and
/// the finite part; this is what cutoff scans and tables consume.
struct EqualPointSplit {
    double divergent_coefficient = 0.0; // of ln(Lambda); equals cos(2 theta)/(2 pi)
    Complex finite_part{0.0, 0.0};      // i sin(2 theta) K0(2 m |x|)/(2 pi), by quadrature
    double finite_err = 0.0;
    bool finite_exists = false; // false at x = 0
};
EqualPointSplit f2_equal_point_split(ThetaParam theta, double x, double m, const QuadSpec& quad);

/// Equal-point value on the |theta| = pi/4 boundary, where the divergent
/// coefficient vanishes: quadrature of (i/2pi) int_0^inf cos(2kx)/w dk next
/// to its Bessel oracle (i/2pi) K0(2m|x|).
struct F2BoundaryResult {
    CorrelatorResult quadrature;
    Complex oracle{0.0, 0.0};
    double rel_diff = 0.0;
};
F2BoundaryResult f2_pi4(double x, double m, const QuadSpec& quad);

/// Evaluates the real part of the equal-point two-point function at finite
/// cutoffs and fits slope * ln(Lambda) + intercept.  The slope converges to
/// cos(2 theta)/(2 pi).
DivergenceScan divergence_scan(ThetaParam theta, double x, double m,
                               std::span<const double> cutoffs, const QuadSpec& quad);

/// Momentum-field equal-point two-point function at the boundary angle,
/// regulated by exp(-eps k) and extrapolated to eps = 0.  The oracle is the
/// regularized closed form i m K1(2m|x|) / (4 pi |x|)  (derived, not a bare
/// integral: the unregulated integrand grows linearly).
struct G2Regularized {
    std::vector<std::pair<double, Complex>> values; // (eps, value)
    Complex extrapolated{0.0, 0.0};
    double extrapolation_err = 0.0;
    Complex oracle{0.0, 0.0};
};
G2Regularized g2_pi4_regularized(double x, double m, std::span<const double> eps_schedule,
                                 const QuadSpec& quad);

/// Both printed-form (difference-argument) and mode-algebra (sum-argument)
/// commutator kernels for the field and its momentum, all under the same
/// exp(-eps k) regulator with Richardson extrapolation.  All four vanish at
/// t = 0 and at theta = 0.
struct CommutatorKernels {
    Complex phi_diff{0.0, 0.0}; // -(sin2t/pi) int cos(k(x-y)) sin(2wt)/w
    Complex phi_mode{0.0, 0.0}; // -(sin2t/pi) int cos(k(x+y)) sin(2wt)/w
    Complex pi_diff{0.0, 0.0};  // +(sin2t/pi) int w cos(k(x-y)) sin(2wt)
    Complex pi_mode{0.0, 0.0};  // +(sin2t/pi) int w cos(k(x+y)) sin(2wt)
    double err = 0.0;
};
CommutatorKernels comm_kernels(ThetaParam theta, double x, double y, double t, double m,
                               const QuadSpec& quad);

} // namespace pbkg

#endif
