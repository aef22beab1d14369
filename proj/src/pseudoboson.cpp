#include "pbkg/pseudoboson.hpp"

#include <cmath>
#include <string>

#include "pbkg/errors.hpp"

namespace pbkg {

namespace {

constexpr double kQuarterPi = 0.78539816339744830961566084582;
const Complex kI{0.0, 1.0};

} // namespace

ThetaParam::ThetaParam(double theta) : theta_(theta) {
    const double a = std::fabs(theta);
    const double ulp = 4.0 * std::numeric_limits<double>::epsilon();
    if (a <= ulp) {
        regime_ = ThetaRegime::bosonic;
    } else if (std::fabs(a - kQuarterPi) <= ulp * kQuarterPi) {
        regime_ = ThetaRegime::boundary;
    } else if (a < kQuarterPi) {
        regime_ = ThetaRegime::regular;
    } else {
        regime_ = ThetaRegime::outside;
    }
}

double ThetaParam::cos_2theta() const noexcept {
    if (regime_ == ThetaRegime::boundary) return 0.0;
    return std::cos(2.0 * theta_);
}

double ThetaParam::sin_2theta() const noexcept { return std::sin(2.0 * theta_); }

PBMatrices pb_transform(ThetaParam theta, int d) {
    if (d < 2) throw parameter_error("pb_transform: d must be >= 2");
    const Eigen::MatrixXcd c = truncated_annihilator(d);
    const Eigen::MatrixXcd cd = c.adjoint();
    const double cs = std::cos(theta.value());
    const double sn = std::sin(theta.value());
    PBMatrices out{cs * c + kI * sn * cd, cs * cd + kI * sn * c, theta, d};
    return out;
}

PBCommutatorCheck pb_commutator_check(ThetaParam theta, int d) {
    if (d < 3) throw parameter_error("pb_commutator_check: d must be >= 3");
    const auto pb = pb_transform(theta, d);
    const auto pb_neg = pb_transform(-theta, d);
    const Eigen::MatrixXcd comm = pb.A * pb.B - pb.B * pb.A;
    PBCommutatorCheck out{
        (comm - Eigen::MatrixXcd::Identity(d, d)).topLeftCorner(d - 1, d - 1),
        (pb.A * pb_neg.A - pb_neg.A * pb.A)(0, 0)};
    return out;
}

double pb_tail_bound(ThetaParam theta, int d) {
    const double t = std::fabs(std::tan(theta.value()));
    return std::fabs(std::sin(theta.value())) * std::sqrt(static_cast<double>(d)) *
               std::pow(t, 0.5 * (d - 2)) +
           1e-15;
}

PBVacua pb_vacua(ThetaParam theta, int d) {
    if (d < 2) throw parameter_error("pb_vacua: d must be >= 2");
    if (theta.regime() != ThetaRegime::bosonic && theta.regime() != ThetaRegime::regular) {
        throw non_normalizable_error(
            "pb_vacua: deformed vacua are normalizable only for |theta| < pi/4 "
            "(|tan theta| >= 1 makes the coefficient series leave l^2)");
    }
    const double t = std::tan(theta.value());
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    phi[0] = Complex(1.0, 0.0);
    psi[0] = Complex(1.0, 0.0);
    // A phi = 0 and B^dag psi = 0 reduce to two-term recursions touching
    // even occupations only: v_{n+1} = -/+ i tan(theta) sqrt(n/(n+1)) v_{n-1}.
    for (int n = 1; n + 1 < d; n += 2) {
        const double ratio = std::sqrt(static_cast<double>(n) / (n + 1));
        phi[n + 1] = -kI * t * ratio * phi[n - 1];
        psi[n + 1] = kI * t * ratio * psi[n - 1];
    }
    phi.normalize(); // leading coefficient stays real positive
    const Complex overlap = phi.dot(psi);
    psi /= overlap;

    const auto pb = pb_transform(theta, d);
    PBVacua out{phi, psi, (pb.A * phi).norm(), (pb.B.adjoint() * psi).norm()};
    return out;
}

BiorthogonalFamily pb_family(ThetaParam theta, int d, int nmax) {
    if (nmax < 0) throw parameter_error("pb_family: nmax must be >= 0");
    if (nmax > d / 4) {
        throw truncation_budget_error("pb_family: nmax = " + std::to_string(nmax) +
                                      " too close to the truncation edge (need nmax <= d/4)");
    }
    const auto vac = pb_vacua(theta, d);
    const auto pb = pb_transform(theta, d);
    const Eigen::MatrixXcd a_dag = pb.A.adjoint();

    BiorthogonalFamily family{{vac.phi0}, {vac.psi0}, theta, d, nmax};
    for (int n = 1; n <= nmax; ++n) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(n));
        family.phis.push_back(inv * (pb.B * family.phis.back()));
        family.psis.push_back(inv * (a_dag * family.psis.back()));
    }
    return family;
}

Eigen::MatrixXcd gram_matrix(const BiorthogonalFamily& family) {
    const int n = family.nmax + 1;
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = family.phis[static_cast<std::size_t>(i)].dot(
                family.psis[static_cast<std::size_t>(j)]);
    return g;
}

MetricOps metric_ops(const BiorthogonalFamily& family) {
    const int d = family.d;
    MetricOps out{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d)};
    for (int n = 0; n <= family.nmax; ++n) {
        const auto& phi = family.phis[static_cast<std::size_t>(n)];
        const auto& psi = family.psis[static_cast<std::size_t>(n)];
        out.S_phi += phi * phi.adjoint();
        out.S_psi += psi * psi.adjoint();
    }
    return out;
}

Eigen::MatrixXcd swanson_hamiltonian(ThetaParam theta, int d) {
    if (theta.is_boundary() || theta.cos_2theta() == 0.0) {
        throw singular_frequency_error(
            "swanson_hamiltonian: cos(2 theta) = 0, frequency undefined");
    }
    const auto pb = pb_transform(theta, d);
    const double freq = 1.0 / theta.cos_2theta();
    return freq * (pb.B * pb.A + 0.5 * Eigen::MatrixXcd::Identity(d, d));
}

double intertwining_residual(ThetaParam theta, int d, int nmax) {
    const auto family = pb_family(theta, d, nmax);
    const auto metric = metric_ops(family);
    const auto pb = pb_transform(theta, d);
    const Eigen::MatrixXcd number_op = pb.B * pb.A;
    const Eigen::MatrixXcd defect =
        metric.S_psi * number_op - number_op.adjoint() * metric.S_psi;
    double worst = 0.0;
    for (const auto& phi : family.phis) worst = std::max(worst, (defect * phi).norm());
    return worst;
}

} // namespace pbkg
