#include "pbkg/correlators.hpp"

#include <cmath>

#include "pbkg/errors.hpp"
#include "pbkg/modespace.hpp"

namespace pbkg {

namespace {

const Complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * M_PI;

// int_0^inf cos(b k) / omega dk by the oscillatory engine (equals K0(m|b|)).
// Runs in extended precision: at large m|b| the answer is exponentially
// smaller than the oscillating partial sums, and the double-precision floor
// near 1e-16 would cap the relative accuracy well above 1e-8.
QuadResult cos_over_omega(double b, double m, const QuadSpec& quad) {
    const long double ml = m;
    auto amplitude = [ml](long double k) { return 1.0L / std::sqrt(k * k + ml * ml); };
    const auto res = integrate_oscillatory_ld(amplitude, std::fabs((long double)b),
                                              OscPhase::cosine, quad);
    QuadResult out;
    out.value = static_cast<double>(res.value);
    out.err = static_cast<double>(res.err);
    out.converged = res.converged;
    out.evals = res.evals;
    return out;
}

// eps -> 0 limit of int_0^inf f(k) e^{-eps k} dk for a complex integrand
// whose oscillations have combined frequency <= osc_scale.
struct RegulatedLimit {
    Complex value{0.0, 0.0};
    double err = 0.0;
};

RegulatedLimit regulated_limit(const std::function<Complex(double)>& f, double osc_scale,
                               std::span<const double> eps_schedule, const QuadSpec& quad) {
    if (eps_schedule.size() < 4) {
        throw insufficient_data_error("regulated_limit: need >= 4 regulator values");
    }
    const double seed = 0.45 * kTwoPi / std::max(osc_scale, 0.25);
    const double tol = std::max(quad.abs_tol, 1e-9);
    std::vector<std::pair<double, double>> re, im;
    double quad_err = 0.0;
    for (double eps : eps_schedule) {
        const double reach = std::max(quad.finite_cutoff, 42.0 / eps);
        auto damped = [&](double k) { return f(k) * std::exp(-eps * k); };
        auto res = integrate_adaptive(std::function<std::complex<double>(double)>(damped), 0.0,
                                      reach, tol, quad.max_subdivisions, seed);
        quad_err = std::max(quad_err, res.err);
        re.emplace_back(eps, res.value.real());
        im.emplace_back(eps, res.value.imag());
    }
    const auto re_lim = richardson_extrapolate(re, 4);
    const auto im_lim = richardson_extrapolate(im, 4);
    RegulatedLimit out;
    out.value = Complex(re_lim.limit, im_lim.limit);
    out.err = re_lim.err + im_lim.err + quad_err;
    return out;
}

} // namespace

std::vector<double> default_regulator_schedule() { return {0.2, 0.1, 0.05, 0.025, 0.0125}; }

std::vector<double> default_scan_cutoffs(double m) {
    return {20.0 * m, 40.0 * m, 80.0 * m, 160.0 * m, 320.0 * m};
}

CorrelatorResult delta_plus(double x, double y, double t, double s, double m,
                            const QuadSpec& quad) {
    if (!(m > 0.0)) throw parameter_error("delta_plus: mass must be positive");
    const double dx = x - y;
    const double dt = t - s;
    if (dx == 0.0 && dt == 0.0) {
        throw divergence_error(
            "delta_plus: coincident points, the integral diverges logarithmically "
            "(run a divergence scan for the cutoff behaviour)",
            1.0 / kTwoPi);
    }
    CorrelatorResult out;
    if (dt == 0.0) {
        const auto res = cos_over_omega(dx, m, quad);
        out.value = res.value / kTwoPi;
        out.abs_error_estimate = res.err / kTwoPi;
        out.method = "oscillatory/between-zeros";
        out.converged = out.abs_error_estimate <= quad.abs_tol;
        return out;
    }
    // Unequal times: two oscillation sources (k dx and w dt), handled by the
    // exp regulator plus extrapolation.
    auto integrand = [=](double k) {
        const double w = omega(k, m);
        return std::cos(k * dx) * std::exp(Complex(0.0, -w * dt)) / w;
    };
    const auto lim = regulated_limit(integrand, std::fabs(dx) + std::fabs(dt),
                                     default_regulator_schedule(), quad);
    out.value = lim.value / kTwoPi;
    out.abs_error_estimate = lim.err / kTwoPi;
    out.method = "regulated+extrapolated";
    out.regulator = "eps schedule";
    // a regulated limit cannot honor the bare quadrature tolerance; its
    // requested tolerance is the extrapolation level
    out.converged = out.abs_error_estimate <= std::max(quad.abs_tol, 1e-6);
    return out;
}

EqualPointSplit f2_equal_point_split(ThetaParam theta, double x, double m,
                                     const QuadSpec& quad) {
    EqualPointSplit out;
    out.divergent_coefficient = theta.cos_2theta() / kTwoPi;
    const double s2 = theta.sin_2theta();
    if (x != 0.0 && s2 != 0.0) {
        const auto res = cos_over_omega(2.0 * x, m, quad);
        out.finite_part = kI * s2 * res.value / kTwoPi;
        out.finite_err = res.err / kTwoPi;
        out.finite_exists = true;
    } else if (s2 == 0.0) {
        out.finite_exists = true; // the oscillatory piece is absent entirely
    }
    return out;
}

CorrelatorResult f2_equal_time(ThetaParam theta, double x, double y, double m,
                               const QuadSpec& quad) {
    if (!(m > 0.0)) throw parameter_error("f2_equal_time: mass must be positive");
    const double diff = x - y;
    const double sum = x + y;
    const double c2 = theta.cos_2theta();
    const double s2 = theta.sin_2theta();

    const bool diff_diverges = (c2 != 0.0 && diff == 0.0);
    const bool sum_diverges = (s2 != 0.0 && sum == 0.0);
    if (diff_diverges || sum_diverges) {
        Complex finite{0.0, 0.0};
        bool has_finite = false;
        double slope = 0.0;
        if (diff_diverges) {
            slope += c2 / kTwoPi;
            if (!sum_diverges && s2 != 0.0) {
                const auto split = f2_equal_point_split(theta, x, m, quad);
                finite = split.finite_part;
                has_finite = split.finite_exists;
            }
        }
        if (sum_diverges) slope += s2 / kTwoPi; // divergent piece sits in the imaginary part
        throw divergence_error("f2_equal_time: divergent at (x, y) = (" + std::to_string(x) +
                                   ", " + std::to_string(y) + ")",
                               slope, finite, has_finite);
    }

    CorrelatorResult out;
    out.method = "oscillatory/between-zeros";
    if (c2 != 0.0) {
        const auto res = cos_over_omega(diff, m, quad);
        out.value += c2 * res.value / kTwoPi;
        out.abs_error_estimate += std::fabs(c2) * res.err / kTwoPi;
    }
    if (s2 != 0.0) {
        const auto res = cos_over_omega(sum, m, quad);
        out.value += kI * s2 * res.value / kTwoPi;
        out.abs_error_estimate += std::fabs(s2) * res.err / kTwoPi;
    }
    out.converged = out.abs_error_estimate <= quad.abs_tol;
    return out;
}

F2BoundaryResult f2_pi4(double x, double m, const QuadSpec& quad) {
    if (!(m > 0.0)) throw parameter_error("f2_pi4: mass must be positive");
    if (x == 0.0) {
        throw divergence_error("f2_pi4: K0(2m|x|) diverges as x -> 0", 1.0 / kTwoPi);
    }
    F2BoundaryResult out;
    const auto res = cos_over_omega(2.0 * x, m, quad);
    out.quadrature.value = kI * res.value / kTwoPi;
    out.quadrature.abs_error_estimate = res.err / kTwoPi;
    out.quadrature.method = "oscillatory/between-zeros";
    out.quadrature.converged = out.quadrature.abs_error_estimate <= quad.abs_tol;
    out.oracle = kI * bessel_k0(2.0 * m * std::fabs(x)) / kTwoPi;
    out.rel_diff = std::abs(out.quadrature.value - out.oracle) / std::abs(out.oracle);
    return out;
}

DivergenceScan divergence_scan(ThetaParam theta, double x, double m,
                               std::span<const double> cutoffs, const QuadSpec& quad) {
    if (cutoffs.size() < 4) {
        throw insufficient_data_error("divergence_scan: need at least 4 cutoffs");
    }
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 10.0 * m) {
            throw parameter_error("divergence_scan: cutoffs must be >= 10 m");
        }
        if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) {
            throw parameter_error("divergence_scan: cutoffs must be strictly increasing");
        }
    }
    (void)x; // the real part of the equal-point function does not depend on x
    DivergenceScan out;
    out.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    const double coeff = theta.cos_2theta() / kTwoPi;
    auto one_over_omega = [m](double k) { return 1.0 / omega(k, m); };
    for (double cutoff : cutoffs) {
        const auto res = integrate_adaptive(std::function<double(double)>(one_over_omega), 0.0,
                                            cutoff, quad.abs_tol, quad.max_subdivisions);
        out.values.push_back(coeff * res.value);
    }
    const auto fit = fit_log_divergence(out.cutoffs, out.values);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.fit_residual = fit.residual;
    return out;
}

G2Regularized g2_pi4_regularized(double x, double m, std::span<const double> eps_schedule,
                                 const QuadSpec& quad) {
    if (!(m > 0.0)) throw parameter_error("g2_pi4_regularized: mass must be positive");
    if (x == 0.0) {
        throw divergence_error("g2_pi4_regularized: quadratic divergence at x = 0", 0.0);
    }
    if (eps_schedule.size() < 4) {
        throw insufficient_data_error("g2_pi4_regularized: need >= 4 regulator values");
    }
    for (std::size_t i = 1; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] < eps_schedule[i - 1]) || !(eps_schedule[i] > 0.0)) {
            throw parameter_error("g2_pi4_regularized: eps must be positive decreasing");
        }
    }
    G2Regularized out;
    std::vector<std::pair<double, double>> imag_samples;
    for (double eps : eps_schedule) {
        auto amplitude = [=](double k) { return omega(k, m) * std::exp(-eps * k); };
        // the damped amplitude keeps growing until k = 1/eps; the accelerated
        // tail must start beyond that hump
        QuadSpec spec_eps = quad;
        spec_eps.finite_cutoff = std::max(quad.finite_cutoff, 2.0 / eps);
        const auto res = integrate_oscillatory(amplitude, 2.0 * std::fabs(x), OscPhase::cosine,
                                               spec_eps);
        const Complex v = -kI * res.value / kTwoPi;
        out.values.emplace_back(eps, v);
        imag_samples.emplace_back(eps, v.imag());
    }
    const auto lim = richardson_extrapolate(imag_samples, 4);
    out.extrapolated = Complex(0.0, lim.limit);
    out.extrapolation_err = lim.err;
    out.oracle = kI * m * bessel_k1(2.0 * m * std::fabs(x)) / (4.0 * M_PI * std::fabs(x));
    return out;
}

CommutatorKernels comm_kernels(ThetaParam theta, double x, double y, double t, double m,
                               const QuadSpec& quad) {
    const double s2 = theta.sin_2theta();
    const auto eps = default_regulator_schedule();
    CommutatorKernels out;

    const auto kernel = [&](double b, bool momentum) {
        auto integrand = [=](double k) -> Complex {
            const double w = omega(k, m);
            const double base = std::cos(b * k) * std::sin(2.0 * w * t);
            return Complex(momentum ? base * w : base / w, 0.0);
        };
        const double osc = std::fabs(b) + 2.0 * std::fabs(t) + 1.0;
        const auto lim = regulated_limit(integrand, osc, eps, quad);
        out.err = std::max(out.err, std::fabs(s2) / M_PI * lim.err);
        return (s2 / M_PI) * lim.value;
    };

    out.phi_diff = -kernel(x - y, false);
    out.phi_mode = -kernel(x + y, false);
    out.pi_diff = kernel(x - y, true);
    out.pi_mode = kernel(x + y, true);
    return out;
}

} // namespace pbkg
