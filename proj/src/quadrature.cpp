#include "pbkg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "pbkg/errors.hpp"

namespace pbkg {

namespace {

GaussLegendreRule make_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P_n'(x)
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

template <typename T>
double norm_of(T v) {
    if constexpr (std::is_same_v<T, double>) {
        return std::fabs(v);
    } else {
        return std::abs(v);
    }
}

template <typename T>
struct Panel {
    double a, b;
    T value;
    double err;
};

template <typename T>
struct PanelCmp {
    bool operator()(const Panel<T>& lhs, const Panel<T>& rhs) const { return lhs.err < rhs.err; }
};

// Embedded GL15 / GL31 pair on one panel.
template <typename T, typename F>
Panel<T> evaluate_panel(const F& f, double a, double b, long& evals) {
    const auto& lo = gauss_legendre(15);
    const auto& hi = gauss_legendre(31);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    T coarse{};
    for (int i = 0; i < 15; ++i) coarse += lo.weights[i] * f(mid + hw * lo.nodes[i]);
    T fine{};
    for (int i = 0; i < 31; ++i) fine += hi.weights[i] * f(mid + hw * hi.nodes[i]);
    evals += 46;
    coarse *= hw;
    fine *= hw;
    return Panel<T>{a, b, fine, norm_of<T>(fine - coarse)};
}

template <typename T>
BasicQuadResult<T> adaptive_impl(const std::function<T(double)>& f, double a, double b,
                                 double abs_tol, int max_subdivisions, double seed_width) {
    if (!(abs_tol > 0.0)) throw parameter_error("integrate_adaptive: abs_tol must be positive");
    BasicQuadResult<T> result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    std::priority_queue<Panel<T>, std::vector<Panel<T>>, PanelCmp<T>> queue;
    T total{};
    double total_err = 0.0;
    int seeds = 1;
    if (seed_width > 0.0) {
        seeds = std::max(1, static_cast<int>(std::ceil(std::fabs(b - a) / seed_width)));
        seeds = std::min(seeds, 200000);
    }
    for (int i = 0; i < seeds; ++i) {
        const double pa = a + (b - a) * static_cast<double>(i) / seeds;
        const double pb = a + (b - a) * static_cast<double>(i + 1) / seeds;
        auto panel = evaluate_panel<T>(f, pa, pb, result.evals);
        total += panel.value;
        total_err += panel.err;
        queue.push(std::move(panel));
    }
    int splits = 0;
    while (total_err > abs_tol && splits < max_subdivisions) {
        const Panel<T> worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // width at roundoff, give up on this panel
            total += worst.value;
            total_err += worst.err;
            break;
        }
        for (const auto& [pa, pb] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            auto panel = evaluate_panel<T>(f, pa, pb, result.evals);
            total += panel.value;
            total_err += panel.err;
            queue.push(std::move(panel));
        }
        ++splits;
    }
    result.value = total;
    result.err = total_err;
    result.converged = total_err <= abs_tol;
    return result;
}

// Single fixed GL31 segment; used for the half-period tail pieces where the
// integrand is smooth and short.
template <typename F>
std::pair<double, double> gl31_segment(const F& f, double a, double b, long& evals) {
    const auto& lo = gauss_legendre(15);
    const auto& hi = gauss_legendre(31);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double coarse = 0.0, fine = 0.0;
    for (int i = 0; i < 15; ++i) coarse += lo.weights[i] * f(mid + hw * lo.nodes[i]);
    for (int i = 0; i < 31; ++i) fine += hi.weights[i] * f(mid + hw * hi.nodes[i]);
    evals += 46;
    return {fine * hw, std::fabs(fine - coarse) * hw};
}

} // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 2) throw parameter_error("gauss_legendre: order must be >= 2");
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

void QuadSpec::validate() const {
    if (!(abs_tol > 0.0)) throw parameter_error("QuadSpec: abs_tol must be positive");
    if (!(finite_cutoff > 0.0)) throw parameter_error("QuadSpec: finite_cutoff must be positive");
    if (acceleration_depth < 3) throw parameter_error("QuadSpec: acceleration_depth must be >= 3");
    if (max_subdivisions < 8) throw parameter_error("QuadSpec: max_subdivisions must be >= 8");
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_subdivisions, double seed_width) {
    return adaptive_impl<double>(f, a, b, abs_tol, max_subdivisions, seed_width);
}

QuadResultC integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                               double b, double abs_tol, int max_subdivisions, double seed_width) {
    return adaptive_impl<std::complex<double>>(f, a, b, abs_tol, max_subdivisions, seed_width);
}

AccelResult wynn_epsilon(std::span<const double> partial_sums) {
    AccelResult out;
    const std::size_t n = partial_sums.size();
    if (n < 3) return out;
    // eps-algorithm table, kept as two rolling columns.
    std::vector<double> prev(n + 1, 0.0); // epsilon_{-1}
    std::vector<double> curr(partial_sums.begin(), partial_sums.end());
    double best = curr.back();
    double best_err = std::numeric_limits<double>::infinity();
    double last_even = best;
    for (std::size_t col = 1; col < n; ++col) {
        std::vector<double> next(n - col, 0.0);
        for (std::size_t i = 0; i + col < n; ++i) {
            const double denom = curr[i + 1] - curr[i];
            if (denom == 0.0) {
                next[i] = std::numeric_limits<double>::infinity();
            } else {
                next[i] = prev[i + 1] + 1.0 / denom;
            }
        }
        prev = std::move(curr);
        curr = std::move(next);
        if (col % 2 == 0 && !curr.empty() && std::isfinite(curr.back())) {
            const double cand = curr.back();
            const double diff = std::fabs(cand - last_even);
            if (diff < best_err) {
                best = cand;
                best_err = diff;
            }
            last_even = cand;
        }
        if (curr.size() < 2) break;
    }
    out.limit = best;
    out.err = std::isfinite(best_err) ? best_err : std::fabs(partial_sums.back() - best);
    out.ok = std::isfinite(best_err);
    return out;
}

namespace {

double phase_value(OscPhase phase, double arg) {
    return phase == OscPhase::cosine ? std::cos(arg) : std::sin(arg);
}

// k-positions of the zeros of cos/sin(freq k), freq > 0, computed analytically.
double nth_zero(OscPhase phase, double freq, long n) {
    if (phase == OscPhase::cosine) return (0.5 * M_PI + n * M_PI) / freq;
    return (n + 1) * M_PI / freq; // skip the zero at k = 0
}

QuadResult oscillatory_b0(const std::function<double(double)>& amplitude, OscPhase phase,
                          const QuadSpec& spec) {
    QuadResult result;
    if (phase == OscPhase::sine) { // sin(0) kills the integrand
        result.converged = true;
        return result;
    }
    auto finite = integrate_adaptive(amplitude, 0.0, spec.finite_cutoff, 0.5 * spec.abs_tol,
                                     spec.max_subdivisions);
    result.value = finite.value;
    result.err = finite.err;
    result.evals = finite.evals;
    double a = spec.finite_cutoff;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 48; ++i) {
        const double b = 2.0 * a;
        auto seg = integrate_adaptive(amplitude, a, b, 0.25 * spec.abs_tol, 200);
        result.value += seg.value;
        result.err += seg.err;
        result.evals += seg.evals;
        const double mag = std::fabs(seg.value);
        if (mag < 0.25 * spec.abs_tol) {
            result.err += mag; // bound the remaining tail by the last segment
            result.converged = true;
            return result;
        }
        if (i > 6 && mag > prev_mag) {
            throw divergence_error(
                "integrate_oscillatory: amplitude is not integrable at freq = 0", 0.0);
        }
        prev_mag = mag;
        a = b;
    }
    throw divergence_error("integrate_oscillatory: tail did not decay at freq = 0", 0.0);
}

} // namespace

QuadResult integrate_oscillatory(const std::function<double(double)>& amplitude, double freq,
                                 OscPhase phase, const QuadSpec& spec) {
    spec.validate();
    if (freq < 0.0) {
        // cos is even, sin odd: fold the sign out.
        auto res = integrate_oscillatory(amplitude, -freq, phase, spec);
        if (phase == OscPhase::sine) res.value = -res.value;
        return res;
    }
    if (freq == 0.0) return oscillatory_b0(amplitude, phase, spec);

    const std::function<double(double)> integrand = [&amplitude, freq, phase](double k) {
        return amplitude(k) * phase_value(phase, freq * k);
    };

    const double period = 2.0 * M_PI / freq;
    // First oscillation zero at or past the finite cutoff.
    long n0 = 0;
    while (nth_zero(phase, freq, n0) < spec.finite_cutoff) ++n0;
    const double z0 = nth_zero(phase, freq, n0);

    QuadResult result;
    auto finite = integrate_adaptive(integrand, 0.0, z0, 0.5 * spec.abs_tol,
                                     spec.max_subdivisions, 0.45 * period);
    result.value = finite.value;
    result.err = finite.err;
    result.evals = finite.evals;

    if (spec.tail_method == TailMethod::between_zeros_acceleration) {
        const int max_intervals = std::max(48, 16 * spec.acceleration_depth);
        std::vector<double> partial_sums;
        partial_sums.reserve(max_intervals);
        double running = 0.0;
        double seg_err = 0.0;
        double prev_term = std::numeric_limits<double>::infinity();
        int growth_streak = 0;
        int tiny_streak = 0;
        AccelResult accel;
        for (int i = 0; i < max_intervals; ++i) {
            const double a = nth_zero(phase, freq, n0 + i);
            const double b = nth_zero(phase, freq, n0 + i + 1);
            auto [val, err] = gl31_segment(integrand, a, b, result.evals);
            running += val;
            seg_err += err;
            partial_sums.push_back(running);
            const double mag = std::fabs(val);
            tiny_streak = (mag < 0.05 * spec.abs_tol) ? tiny_streak + 1 : 0;
            if (tiny_streak >= 3) {
                // the tail is already converging absolutely, no acceleration needed
                accel = AccelResult{running, 3.0 * mag + 1e-18, true};
                break;
            }
            growth_streak = (mag > prev_term) ? growth_streak + 1 : 0;
            prev_term = mag;
            if (growth_streak > 24) {
                throw convergence_error(
                    "integrate_oscillatory: between-zeros terms keep growing; "
                    "use the regulator tail method for this integrand");
            }
            if (partial_sums.size() >= 8 && i % 2 == 1) {
                accel = wynn_epsilon(partial_sums);
                if (accel.ok && accel.err < 0.2 * spec.abs_tol && mag < 1e3 * spec.abs_tol) break;
            }
        }
        if (!accel.ok && partial_sums.size() >= 8) accel = wynn_epsilon(partial_sums);
        if (!accel.ok) {
            throw convergence_error("integrate_oscillatory: tail acceleration failed");
        }
        result.value += accel.limit;
        result.err += std::max(accel.err, seg_err * 1e-3);
        result.converged = result.err <= 10.0 * spec.abs_tol;
        return result;
    }

    // exp-regulator tail: damp, integrate, extrapolate the damping away.
    // The damped tail is analytic in eps with a pole at eps = i freq, so the
    // schedule must stay well inside that radius for the polynomial
    // extrapolation to settle.
    const double eps0 = std::min(0.2, freq / 8.0);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 5; ++i) {
        const double eps = eps0 / std::pow(2.0, i);
        const double reach = 42.0 / eps;
        auto damped = [&](double k) { return integrand(k) * std::exp(-eps * (k - z0)); };
        auto tail = integrate_adaptive(std::function<double(double)>(damped), z0, z0 + reach,
                                       0.25 * spec.abs_tol, spec.max_subdivisions, 0.45 * period);
        result.evals += tail.evals;
        result.err += 0.2 * tail.err;
        samples.emplace_back(eps, tail.value);
    }
    auto extrap = richardson_extrapolate(samples, 4);
    result.value += extrap.limit;
    result.err += extrap.err;
    result.converged = result.err <= 10.0 * spec.abs_tol;
    return result;
}

namespace {

// Long-double mirror of the between-zeros machinery.  The helpers are
// templated on the scalar so the logic is written once; only the long double
// instantiation is used here.

template <typename Real>
struct GLRuleT {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

template <typename Real>
GLRuleT<Real> make_gauss_legendre_t(int n) {
    GLRuleT<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        Real x = std::cos(Real(M_PI) * (i + Real(0.75)) / (n + Real(0.5)));
        Real dp = 0;
        for (int it = 0; it < 200; ++it) {
            Real p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (std::fabs(static_cast<double>(dx)) < 1e-19) break;
        }
        const Real w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

template <typename Real>
const GLRuleT<Real>& gauss_legendre_t(int n) {
    static std::map<int, GLRuleT<Real>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre_t<Real>(n)).first;
    return it->second;
}

template <typename Real, typename F>
std::pair<Real, Real> gl_pair_segment_t(const F& f, Real a, Real b, long& evals) {
    const auto& lo = gauss_legendre_t<Real>(15);
    const auto& hi = gauss_legendre_t<Real>(31);
    const Real mid = (a + b) / 2;
    const Real hw = (b - a) / 2;
    Real coarse = 0, fine = 0;
    for (int i = 0; i < 15; ++i) coarse += lo.weights[i] * f(mid + hw * lo.nodes[i]);
    for (int i = 0; i < 31; ++i) fine += hi.weights[i] * f(mid + hw * hi.nodes[i]);
    evals += 46;
    return {fine * hw, std::fabs(static_cast<double>(fine - coarse)) * hw};
}

template <typename Real>
struct WynnResultT {
    Real limit = 0;
    Real err = 0;
    bool ok = false;
};

template <typename Real>
WynnResultT<Real> wynn_epsilon_t(const std::vector<Real>& partial_sums) {
    WynnResultT<Real> out;
    const std::size_t n = partial_sums.size();
    if (n < 3) return out;
    std::vector<Real> prev(n + 1, 0);
    std::vector<Real> curr(partial_sums.begin(), partial_sums.end());
    Real best = curr.back();
    Real best_err = std::numeric_limits<Real>::infinity();
    Real last_even = best;
    for (std::size_t col = 1; col < n; ++col) {
        std::vector<Real> next(n - col, 0);
        for (std::size_t i = 0; i + col < n; ++i) {
            const Real denom = curr[i + 1] - curr[i];
            next[i] = (denom == 0) ? std::numeric_limits<Real>::infinity()
                                   : prev[i + 1] + 1 / denom;
        }
        prev = std::move(curr);
        curr = std::move(next);
        if (col % 2 == 0 && !curr.empty() && std::isfinite(static_cast<double>(curr.back()))) {
            const Real cand = curr.back();
            const Real diff = std::fabs(static_cast<double>(cand - last_even));
            if (diff < best_err) {
                best = cand;
                best_err = diff;
            }
            last_even = cand;
        }
        if (curr.size() < 2) break;
    }
    out.limit = best;
    out.err = std::isfinite(static_cast<double>(best_err))
                  ? best_err
                  : std::fabs(static_cast<double>(partial_sums.back() - best));
    out.ok = std::isfinite(static_cast<double>(best_err));
    return out;
}

} // namespace

QuadResultL integrate_oscillatory_ld(const std::function<long double(long double)>& amplitude,
                                     long double freq, OscPhase phase, const QuadSpec& spec) {
    spec.validate();
    if (!(freq > 0.0L)) {
        throw parameter_error("integrate_oscillatory_ld: needs a positive frequency");
    }
    using Real = long double;
    auto integrand = [&](Real k) {
        return amplitude(k) * (phase == OscPhase::cosine ? std::cos(freq * k)
                                                         : std::sin(freq * k));
    };
    auto zero_at = [&](long n) -> Real {
        if (phase == OscPhase::cosine) return (Real(0.5) * M_PI + n * Real(M_PI)) / freq;
        return (n + 1) * Real(M_PI) / freq;
    };

    long n0 = 0;
    while (zero_at(n0) < Real(spec.finite_cutoff)) ++n0;

    QuadResultL result;
    // finite part: fixed bisection depth per half period keeps this simple
    // and already far below the long double tail floor
    {
        const Real z0 = zero_at(n0);
        const Real period = Real(M_PI) / freq;
        const long segments = std::max<long>(8, static_cast<long>(z0 / (0.45L * period)) + 1);
        Real acc = 0, err = 0;
        for (long i = 0; i < segments; ++i) {
            const Real a = z0 * i / segments;
            const Real b = z0 * (i + 1) / segments;
            auto coarse = gl_pair_segment_t<Real>(integrand, a, b, result.evals);
            const Real mid = (a + b) / 2;
            auto left = gl_pair_segment_t<Real>(integrand, a, mid, result.evals);
            auto right = gl_pair_segment_t<Real>(integrand, mid, b, result.evals);
            acc += left.first + right.first;
            err += std::fabs(static_cast<double>(left.first + right.first - coarse.first));
        }
        result.value = acc;
        result.err = err; // conservative: bounds the unrefined value
    }

    const int max_intervals = std::max(64, 16 * spec.acceleration_depth);
    std::vector<Real> partial_sums;
    partial_sums.reserve(max_intervals);
    Real running = 0;
    int tiny_streak = 0;
    WynnResultT<Real> accel;
    for (int i = 0; i < max_intervals; ++i) {
        const Real a = zero_at(n0 + i);
        const Real b = zero_at(n0 + i + 1);
        auto [val, err] = gl_pair_segment_t<Real>(integrand, a, b, result.evals);
        (void)err;
        running += val;
        partial_sums.push_back(running);
        const double mag = std::fabs(static_cast<double>(val));
        tiny_streak = (mag < 1e-22) ? tiny_streak + 1 : 0;
        if (tiny_streak >= 3) {
            accel = WynnResultT<Real>{running, Real(mag), true};
            break;
        }
        if (partial_sums.size() >= 10 && i % 2 == 1) {
            accel = wynn_epsilon_t<Real>(partial_sums);
            if (accel.ok && static_cast<double>(accel.err) < 1e-19 * std::max(1.0, mag)) break;
        }
    }
    if (!accel.ok && partial_sums.size() >= 10) accel = wynn_epsilon_t<Real>(partial_sums);
    if (!accel.ok) {
        throw convergence_error("integrate_oscillatory_ld: tail acceleration failed");
    }
    result.value += accel.limit;
    result.err += accel.err;
    result.converged = static_cast<double>(result.err) <= 10.0 * spec.abs_tol;
    return result;
}

ExtrapolationResult richardson_extrapolate(std::span<const std::pair<double, double>> samples,
                                           int order) {
    if (samples.size() < 4) {
        throw insufficient_data_error("richardson_extrapolate: need at least 4 samples");
    }
    if (order < 1) throw parameter_error("richardson_extrapolate: order must be >= 1");
    const std::size_t n = samples.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (!(samples[i].first < samples[i - 1].first)) {
            throw parameter_error("richardson_extrapolate: eps must be strictly decreasing");
        }
    }
    // Neville tableau evaluated at eps = 0, degree capped at `order`.
    std::vector<std::vector<double>> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i].resize(std::min<std::size_t>(i, static_cast<std::size_t>(order)) + 1);
        t[i][0] = samples[i].second;
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 1; j < t[i].size(); ++j) {
            const double ei = samples[i].first;
            const double ej = samples[i - j].first;
            t[i][j] = (ei * t[i - 1][j - 1] - ej * t[i][j - 1]) / (ei - ej);
        }
    }
    ExtrapolationResult out;
    out.limit = t[n - 1].back();
    const double d1 = std::fabs(t[n - 1].back() - t[n - 1][t[n - 1].size() - 2]);
    const double d2 = std::fabs(t[n - 1].back() - t[n - 2].back());
    out.err = std::max(d1, d2);
    return out;
}

LogFitResult fit_log_divergence(std::span<const double> cutoffs, std::span<const double> values) {
    if (cutoffs.size() < 4 || cutoffs.size() != values.size()) {
        throw insufficient_data_error("fit_log_divergence: need >= 4 matched points");
    }
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > cutoffs[i - 1])) {
            throw fit_error("fit_log_divergence: cutoffs must be strictly increasing");
        }
    }
    const std::size_t n = cutoffs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(cutoffs[i]);
        sx += x;
        sy += values[i];
        sxx += x * x;
        sxy += x * values[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::fabs(det) < 1e-14 * n * sxx) {
        throw fit_error("fit_log_divergence: degenerate design");
    }
    LogFitResult out;
    out.slope = (n * sxy - sx * sy) / det;
    out.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = values[i] - (out.slope * std::log(cutoffs[i]) + out.intercept);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / n);
    return out;
}

} // namespace pbkg
