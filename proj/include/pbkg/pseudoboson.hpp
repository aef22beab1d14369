#ifndef PBKG_PSEUDOBOSON_HPP
#define PBKG_PSEUDOBOSON_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pbkg/modespace.hpp"

namespace pbkg {

enum class ThetaRegime { bosonic, regular, boundary, outside };

/// Deformation angle with its regime.  bosonic <=> theta = 0, regular <=>
/// 0 < |theta| < pi/4, boundary <=> |theta| = pi/4 (within a few ulp),
/// outside otherwise.  cos_2theta() returns exactly 0 on the boundary so
/// downstream finite/divergent splits are not polluted by the 1e-16 residue
/// of cos(pi/2).
class ThetaParam {
public:
    ThetaParam(double theta); // NOLINT: implicit by design, theta is the value

    double value() const noexcept { return theta_; }
    ThetaRegime regime() const noexcept { return regime_; }
    bool is_bosonic() const noexcept { return regime_ == ThetaRegime::bosonic; }
    bool is_boundary() const noexcept { return regime_ == ThetaRegime::boundary; }

    double cos_2theta() const noexcept;
    double sin_2theta() const noexcept;

    ThetaParam operator-() const { return ThetaParam(-theta_); }

private:
    double theta_;
    ThetaRegime regime_;
};

/// Single-mode deformed ladder pair as truncated d x d matrices:
///   A = cos(theta) C + i sin(theta) C^dag,
///   B = cos(theta) C^dag + i sin(theta) C,
/// with C the truncated annihilator.
struct PBMatrices {
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    ThetaParam theta;
    int d;
};

PBMatrices pb_transform(ThetaParam theta, int d);

/// Deviation of the deformed pair from canonical behaviour, measured on the
/// truncated matrices.  ab_defect is (AB - BA) - 1 restricted to the top-left
/// (d-1) x (d-1) block (expected zero to machine epsilon); aa_neg_coeff is the
/// (0,0) element of [A_theta, A_{-theta}] (expected -i sin(2 theta)).
struct PBCommutatorCheck {
    Eigen::MatrixXcd ab_defect;
    Complex aa_neg_coeff;
};

PBCommutatorCheck pb_commutator_check(ThetaParam theta, int d);

/// The two deformed vacua: phi0 with A phi0 = 0, psi0 with B^dag psi0 = 0.
/// phi0 is normalized to unit length with a real positive leading
/// coefficient; psi0 is scaled so <phi0, psi0> = 1.  Residual norms report
/// how well the truncated vectors annihilate (bounded by the truncation
/// tail).  Throws non_normalizable_error outside the regular/bosonic
/// regimes: at |theta| = pi/4 the coefficient magnitudes decay like
/// n^{-1/4} and the l^2 norm diverges.
struct PBVacua {
    Eigen::VectorXcd phi0;
    Eigen::VectorXcd psi0;
    double phi_residual;
    double psi_residual;
};

PBVacua pb_vacua(ThetaParam theta, int d);

/// Analytic truncation-tail bound for the deformed vacuum residuals:
/// |sin(theta)| sqrt(d) |tan(theta)|^{(d-2)/2}.  Assertions downstream use a
/// 10x safety factor on top of this.
double pb_tail_bound(ThetaParam theta, int d);

/// Ladder-generated biorthogonal families phi_n = B^n phi0 / sqrt(n!),
/// psi_n = (A^dag)^n psi0 / sqrt(n!), n = 0..nmax.  Requires nmax <= d/4 so
/// the constructed states stay far from the truncation edge.
struct BiorthogonalFamily {
    std::vector<Eigen::VectorXcd> phis;
    std::vector<Eigen::VectorXcd> psis;
    ThetaParam theta;
    int d;
    int nmax;
};

BiorthogonalFamily pb_family(ThetaParam theta, int d, int nmax);

/// Gram matrix <phi_n, psi_m>; identity up to the truncation tail.
Eigen::MatrixXcd gram_matrix(const BiorthogonalFamily& family);

/// Finite-rank metric operators S_phi = sum |phi_n><phi_n| and
/// S_psi = sum |psi_n><psi_n|; Hermitian PSD, and S_phi psi_n ~ phi_n,
/// S_psi phi_n ~ psi_n on the family range.
struct MetricOps {
    Eigen::MatrixXcd S_phi;
    Eigen::MatrixXcd S_psi;
};

MetricOps metric_ops(const BiorthogonalFamily& family);

/// H = omega_theta (B A + 1/2), omega_theta = 1/cos(2 theta).  Non-Hermitian
/// for theta != 0; adjoint(H at theta) = H at -theta.  Throws
/// singular_frequency_error on the |theta| = pi/4 boundary.
Eigen::MatrixXcd swanson_hamiltonian(ThetaParam theta, int d);

/// max over n <= nmax of || (S_psi N - N^dag S_psi) phi_n ||, N = B A.
/// Zero for theta = 0 and tail-bounded in general.
double intertwining_residual(ThetaParam theta, int d, int nmax);

} // namespace pbkg

#endif
