#include "pbkg/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pbkg/errors.hpp"
#include "pbkg/modespace.hpp"

namespace pbkg {

namespace {

const Complex kI{0.0, 1.0};
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);
constexpr double kGaussSupportSigmas = 10.0;

double unit_bump(double u) {
    if (std::fabs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

// integral of the unit bump over [-1, 1], computed once
double unit_bump_integral() {
    static const double value = [] {
        auto res = integrate_adaptive(std::function<double(double)>(unit_bump), -1.0, 1.0,
                                      1e-15, 2000);
        return res.value;
    }();
    return value;
}

// H(s) = (1 / (c_g sqrt(2 pi))) int_{-1}^{1} unit_bump(u) cos(s u) du,
// the canonical bump transform every bump-family hat reduces to.
// Rule sizes are tiered so only a handful of Gauss-Legendre tables are ever
// built, with the weighted bump samples cached per tier.
double bump_hat_direct(double s) {
    struct Tier {
        int n = 0;
        std::vector<double> nodes;
        std::vector<double> weighted; // w_q * unit_bump(u_q)
    };
    static std::vector<Tier> tiers;
    static std::mutex mutex;

    s = std::fabs(s);
    const int wanted = std::max(64, static_cast<int>(1.25 * s) + 48);
    std::lock_guard<std::mutex> lock(mutex);
    if (tiers.empty()) {
        for (int n = 64; n <= (1 << 20); n = (3 * n) / 2) tiers.push_back(Tier{n, {}, {}});
    }
    Tier* tier = nullptr;
    for (auto& t : tiers) {
        if (t.n >= wanted) {
            tier = &t;
            break;
        }
    }
    if (tier == nullptr) tier = &tiers.back();
    if (tier->nodes.empty()) {
        const auto& rule = gauss_legendre(tier->n);
        tier->nodes = rule.nodes;
        tier->weighted.resize(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            tier->weighted[i] = rule.weights[i] * unit_bump(rule.nodes[i]);
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < tier->nodes.size(); ++i) {
        acc += tier->weighted[i] * std::cos(s * tier->nodes[i]);
    }
    return acc / (unit_bump_integral() * kSqrt2Pi);
}

// Lazily built uniform table of H with local cubic interpolation, plus a
// decreasing envelope for tail-cutoff estimates.  smear_g2 hits H millions
// of times; the direct rule is kept for one-off fourier_hat calls.
class BumpHatTable {
public:
    static BumpHatTable& instance() {
        static BumpHatTable table;
        return table;
    }

    double eval(double s) {
        s = std::fabs(s);
        ensure(s);
        const double pos = s / kStep;
        std::size_t i = static_cast<std::size_t>(pos);
        if (i + 2 >= values_.size()) return values_.back();
        if (i == 0) i = 1;
        const double w = pos - static_cast<double>(i);
        // 4-point cubic through (i-1, i, i+1, i+2)
        const double ym = values_[i - 1], y0 = values_[i], y1 = values_[i + 1],
                     y2 = values_[i + 2];
        const double a = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
        const double b = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
        const double c = 0.5 * (y1 - ym);
        return ((a * w + b) * w + c) * w + y0;
    }

private:
    static constexpr double kStep = 0.01;

    void ensure(double s) {
        std::lock_guard<std::mutex> lock(mutex_);
        const double want = std::max(s * 1.25 + 2.0, 64.0);
        if (want <= built_to_) return;
        const std::size_t count = static_cast<std::size_t>(want / kStep) + 3;
        const std::size_t old = values_.size();
        values_.resize(count);
        for (std::size_t i = old; i < count; ++i) {
            values_[i] = bump_hat_direct(static_cast<double>(i) * kStep);
        }
        built_to_ = want;
    }

    std::mutex mutex_;
    double built_to_ = 0.0;
    std::vector<double> values_;
};

// Upper envelope of |H(s)|: the transform decays like exp(-sqrt(2s)) with an
// algebraic prefactor, and the quadrature that produces it bottoms out at a
// cancellation floor of a few 1e-16.
double bump_hat_envelope_model(double s) {
    return std::max(2.5 * std::exp(-std::sqrt(2.0 * std::fabs(s))), 4e-16);
}

} // namespace

TestFunction::TestFunction(Family family, double center, double width, double normalization)
    : family_(family), center_(center), width_(width), normalization_(normalization) {
    if (!(width > 0.0)) throw parameter_error("TestFunction: width must be positive");
}

TestFunction TestFunction::gaussian(double center, double width, double normalization) {
    return TestFunction(Family::gaussian, center, width, normalization);
}

TestFunction TestFunction::bump(double center, double width, double normalization) {
    return TestFunction(Family::bump, center, width, normalization);
}

double TestFunction::operator()(double x) const {
    const double u = (x - center_) / width_;
    if (family_ == Family::gaussian) {
        return normalization_ * std::exp(-0.5 * u * u);
    }
    return normalization_ / (width_ * unit_bump_integral()) * unit_bump(u);
}

double TestFunction::support_lo() const {
    const double reach = (family_ == Family::bump) ? width_ : kGaussSupportSigmas * width_;
    return center_ - reach;
}

double TestFunction::support_hi() const {
    const double reach = (family_ == Family::bump) ? width_ : kGaussSupportSigmas * width_;
    return center_ + reach;
}

Complex fourier_hat(const TestFunction& f, double p) {
    const Complex shift = std::exp(-kI * p * f.center());
    if (f.family() == TestFunction::Family::gaussian) {
        const double w = f.width();
        return f.normalization() * w * shift * std::exp(-0.5 * w * w * p * p);
    }
    return f.normalization() * shift * bump_hat_direct(f.width() * p);
}

DeltaSequence::DeltaSequence(TestFunction mother_fn, int index)
    : mother(std::move(mother_fn)), n(index) {
    if (n < 1) throw construction_error("DeltaSequence: index must be >= 1");
    if (mother.family() != TestFunction::Family::bump) {
        throw construction_error("DeltaSequence: mother must be compactly supported (bump)");
    }
    if (mother.support_lo() < -1.0 - 1e-12 || mother.support_hi() > 1.0 + 1e-12) {
        throw construction_error("DeltaSequence: mother support must lie in [-1, 1]");
    }
    if (std::fabs(mother.normalization() - 1.0) > 1e-10) {
        throw construction_error("DeltaSequence: mother must integrate to 1");
    }
    // cross-check the numeric normalization invariant
    auto res = integrate_adaptive(std::function<double(double)>(
                                      [this](double x) { return mother(x); }),
                                  mother.support_lo(), mother.support_hi(), 1e-12, 2000);
    if (std::fabs(res.value - 1.0) > 1e-10) {
        throw construction_error("DeltaSequence: mother integral deviates from 1 beyond 1e-10");
    }
}

TestFunction delta_member(const DeltaSequence& seq) {
    // n * mother(n x): same bump family with support and center shrunk by n;
    // the integral normalization is untouched.
    return TestFunction::bump(seq.mother.center() / seq.n, seq.mother.width() / seq.n,
                              seq.mother.normalization());
}

double GridFunction::eval(double x) const {
    const double pos = (x - x0) / dx;
    if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) {
        throw coverage_error("GridFunction: evaluation outside the sampled window");
    }
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) i = values.size() - 2;
    const double w = pos - static_cast<double>(i);
    if (values.size() < 4 || i == 0 || i + 2 >= values.size()) {
        return values[i] * (1.0 - w) + values[i + 1] * w; // linear near the edges
    }
    const double ym = values[i - 1], y0 = values[i], y1 = values[i + 1], y2 = values[i + 2];
    const double a = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
    const double b = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    const double c = 0.5 * (y1 - ym);
    return ((a * w + b) * w + c) * w + y0;
}

double convolve(const GridFunction& kernel, const TestFunction& f, double y) {
    const double lo = y - f.support_hi();
    const double hi = y - f.support_lo();
    if (lo < kernel.x0 - 1e-12 || hi > kernel.x_last() + 1e-12) {
        throw coverage_error("convolve: kernel grid does not cover y -/+ support(f)");
    }
    auto integrand = [&](double x) { return f(y - x) * kernel.eval(x); };
    const auto res = integrate_adaptive(std::function<double(double)>(integrand), lo, hi,
                                        1e-11, 4000);
    return res.value;
}

namespace {

// Folded Fourier-side integrand pieces for smear_g2; the integral over R of
// w f_hat(2k) e^{2iky} splits into a [0, inf) integral of
// w [f_hat(2k) e^{2iky} + f_hat(-2k) e^{-2iky}].
Complex folded_hat_phase(const TestFunction& f, double k, double y) {
    const Complex fwd = fourier_hat(f, 2.0 * k) * std::exp(kI * 2.0 * k * y);
    const Complex bwd = fourier_hat(f, -2.0 * k) * std::exp(-kI * 2.0 * k * y);
    return fwd + bwd;
}

double gaussian_cutoff(const TestFunction& f) {
    // where normalization * width * exp(-2 w^2 k^2) * w_k drops below 1e-20
    return 3.6 / f.width() + 8.0;
}

double bump_cutoff(const TestFunction& f, double m, double tol) {
    const double scale = std::max(std::fabs(f.normalization()), 1e-30);
    const double w = f.width();
    double k = 8.0;
    while (k < 1.0e6) {
        const double env = bump_hat_envelope_model(2.0 * k * w);
        if (env <= 5e-16) break; // past this point the transform is pure noise
        // tail ~ envelope * omega * decay length of exp(-sqrt(2kw))
        const double decay_len = std::sqrt(2.0 * k * w) / w + 1.0;
        if (scale * env * omega(k, m) * decay_len < 0.5 * tol) break;
        k *= 1.3;
    }
    return k;
}

} // namespace

Complex smear_g2(const TestFunction& f, double y, double m, const QuadSpec& quad) {
    if (!(m > 0.0)) throw parameter_error("smear_g2: mass must be positive");
    const double tol = std::max(quad.abs_tol, 1e-9);
    const double osc = 2.0 * (std::fabs(y - f.center()) + 0.1);
    const double seed = 0.45 * 2.0 * M_PI / osc;

    Complex integral;
    if (f.family() == TestFunction::Family::gaussian) {
        auto integrand = [&](double k) {
            return omega(k, m) * folded_hat_phase(f, k, y);
        };
        const auto res = integrate_adaptive(std::function<Complex(double)>(integrand), 0.0,
                                            gaussian_cutoff(f), tol, quad.max_subdivisions,
                                            seed);
        integral = res.value;
    } else {
        auto& table = BumpHatTable::instance();
        const double cutoff = bump_cutoff(f, m, tol);
        const double w = f.width();
        const double c = f.center();
        const double scale = f.normalization();
        auto integrand = [&, w, c, scale](double k) {
            const double hat = scale * table.eval(2.0 * k * w);
            // phases of f_hat(+-2k) e^{+-2iky} combine to 2 cos(2k(y - c))
            return omega(k, m) * hat * 2.0 * std::cos(2.0 * k * (y - c));
        };
        const auto res = integrate_adaptive(std::function<double(double)>(integrand), 0.0,
                                            cutoff, tol, quad.max_subdivisions,
                                            std::min(seed, 0.25 * M_PI / std::max(w, 1e-6)));
        integral = Complex(res.value, 0.0);
    }
    return -kI / (2.0 * kSqrt2Pi) * integral;
}

Complex smear_g2_regulated(const TestFunction& f, double y, double m, double eps,
                           const QuadSpec& quad) {
    if (!(eps > 0.0)) throw parameter_error("smear_g2_regulated: eps must be positive");
    const double tol = std::max(quad.abs_tol, 1e-9);
    const double osc = 2.0 * (std::fabs(y - f.center()) + 0.1);
    const double seed = 0.45 * 2.0 * M_PI / osc;
    const double cutoff = (f.family() == TestFunction::Family::gaussian)
                              ? gaussian_cutoff(f)
                              : bump_cutoff(f, m, tol);
    auto integrand = [&](double k) {
        return omega(k, m) * std::exp(-eps * k) * folded_hat_phase(f, k, y);
    };
    const auto res = integrate_adaptive(std::function<Complex(double)>(integrand), 0.0, cutoff,
                                        tol, quad.max_subdivisions, seed);
    return -kI / (2.0 * kSqrt2Pi) * res.value;
}

} // namespace pbkg
