#ifndef PBKG_QUADRATURE_HPP
#define PBKG_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace pbkg {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence and cached.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

template <typename T>
struct BasicQuadResult {
    T value{};
    double err = 0.0;       // conservative absolute estimate
    bool converged = false;
    long evals = 0;
};
using QuadResult = BasicQuadResult<double>;
using QuadResultC = BasicQuadResult<std::complex<double>>;

/// How the semi-infinite oscillatory tail is summed.
enum class TailMethod {
    between_zeros_acceleration, // partial integrals between analytic zeros + Wynn epsilon
    exp_regulator_extrapolation // exp(-eps k) damping + Richardson limit eps -> 0
};

struct QuadSpec {
    double abs_tol = 1e-10;
    double finite_cutoff = 40.0; // where tail handling takes over
    TailMethod tail_method = TailMethod::between_zeros_acceleration;
    int max_subdivisions = 4000;
    int acceleration_depth = 14;

    void validate() const; // throws parameter_error on nonsense
};

enum class OscPhase { cosine, sine };

/// Adaptive panel integration of f over the finite interval [a, b].
/// Panels use an embedded GL15/GL31 pair; the worst panel is bisected until
/// the summed error estimate drops below abs_tol.  seed_width caps the
/// initial panel width so oscillations are resolved from the start.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_subdivisions = 4000,
                              double seed_width = 0.0);
QuadResultC integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double abs_tol, int max_subdivisions = 4000,
                               double seed_width = 0.0);

/// int_0^inf amplitude(k) * cos(freq k) dk   (or sin).
///
/// The finite segment [0, first zero past finite_cutoff] is integrated
/// adaptively; the tail is summed between consecutive analytic zeros of the
/// oscillation and accelerated with Wynn's epsilon algorithm, or damped by
/// exp(-eps k) and extrapolated, per spec.tail_method.  The amplitude must be
/// continuous on (0, inf) with amplitude * phase extending continuously to 0;
/// it should decay eventually for the between-zeros route to converge.
QuadResult integrate_oscillatory(const std::function<double(double)>& amplitude, double freq,
                                 OscPhase phase, const QuadSpec& spec);

/// Extended-precision variant (between-zeros tail only, freq > 0).  Needed
/// when the answer is exponentially smaller than the oscillating partial
/// sums that produce it: the cancellation then eats the double mantissa, and
/// the value floors near 1e-16 in absolute terms.  The long double path
/// pushes that floor three to four digits lower.
struct QuadResultL {
    long double value = 0.0L;
    long double err = 0.0L;
    bool converged = false;
    long evals = 0;
};
QuadResultL integrate_oscillatory_ld(const std::function<long double(long double)>& amplitude,
                                     long double freq, OscPhase phase, const QuadSpec& spec);

struct ExtrapolationResult {
    double limit = 0.0;
    double err = 0.0;
};

/// Polynomial-in-eps extrapolation of samples (eps_i, value_i) to eps = 0,
/// of the given order (Neville tableau, degree capped at `order`).
/// Requires at least 4 samples with strictly decreasing eps.
ExtrapolationResult richardson_extrapolate(std::span<const std::pair<double, double>> samples,
                                           int order);

struct LogFitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS misfit
};

/// Least-squares fit values ~ slope * ln(cutoff) + intercept.
LogFitResult fit_log_divergence(std::span<const double> cutoffs, std::span<const double> values);

/// Wynn epsilon acceleration of a sequence of partial sums; used by the
/// oscillatory tail and exposed for tests.
struct AccelResult {
    double limit = 0.0;
    double err = 0.0;
    bool ok = false;
};
AccelResult wynn_epsilon(std::span<const double> partial_sums);

} // namespace pbkg

#endif
