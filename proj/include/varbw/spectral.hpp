#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "varbw/grid.hpp"
#include "varbw/profile.hpp"
#include "varbw/quadrature.hpp"

namespace varbw {

/// Spectral cutoff: the projection window is [0, lambda_max] in the spectral
/// parameter, [0, zeta_max] after the substitution zeta = sqrt(lambda). The
/// per-interval band limit is c_j = zeta_max * q_j.
struct SpectralCutoff {
  double lambda_max;
  double zeta_max;
  explicit SpectralCutoff(double lambda);
};

/// Density pair (G_minus, G_plus) on a strictly increasing zeta-grid inside
/// (0, zeta_max]. Between nodes the density is linear; it ramps to zero at
/// zeta = 0 and, when the last node sits below zeta_max, at zeta_max.
struct SpectralDensityPair {
  Eigen::VectorXd zeta;
  Eigen::VectorXcd g_minus;
  Eigen::VectorXcd g_plus;

  Complex minus_at(double z, double zeta_max) const;
  Complex plus_at(double z, double zeta_max) const;
};

SpectralDensityPair make_density(Eigen::VectorXd zeta, Eigen::VectorXcd g_minus,
                                 Eigen::VectorXcd g_plus);
void validate_density(const SpectralDensityPair& d, const SpectralCutoff& c);

/// Diagonal spectral-measure densities at lambda > 0:
///   s(lambda) = 1 / (4 pi p_N |b_N^-(sqrt(lambda))|^2 sqrt(lambda)),
/// with plus_weight = s / q_0 multiplying the plus solution and
/// minus_weight = s / q_N multiplying the minus solution.
struct SpectralWeights {
  double minus_weight;
  double plus_weight;
};
SpectralWeights spectral_weight(const CoefficientTable& table, double lambda);

/// Effective Fourier density of interval j:
///   zeta > 0:  b_j^-(zeta) G_-(zeta) + b_j^+(zeta) G_+(zeta)
///   zeta < 0:  a_j^-(-zeta) G_-(-zeta) + a_j^+(-zeta) G_+(-zeta)
Complex interval_fourier_density(const CoefficientTable& table,
                                 const SpectralCutoff& cutoff,
                                 const SpectralDensityPair& density, int j,
                                 double zeta);

/// f(x) = integral over [-zeta_max, zeta_max] of G_j(zeta) e^{-i q_j zeta x}
/// with j the interval containing x. Composite Gauss-Legendre with panel
/// edges on the density nodes (the integrand is smooth inside each panel).
Complex synthesize(const CoefficientTable& table, const SpectralCutoff& cutoff,
                   const SpectralDensityPair& density, double x,
                   const QuadratureConfig& quad = {});

/// Same integral with the interval index forced to j; evaluating at a
/// breakpoint from both sides gives the one-sided limits.
Complex synthesize_on_interval(const CoefficientTable& table,
                               const SpectralCutoff& cutoff,
                               const SpectralDensityPair& density, int j,
                               double x, const QuadratureConfig& quad = {});

Eigen::VectorXcd synthesize_many(const CoefficientTable& table,
                                 const SpectralCutoff& cutoff,
                                 const SpectralDensityPair& density,
                                 const Eigen::VectorXd& xs,
                                 const QuadratureConfig& quad = {});

/// Solves the 2x2 system
///   b_j^-(zeta) G_- + b_j^+(zeta) G_+ = fhat_pos
///   a_j^-(zeta) G_- + a_j^+(zeta) G_+ = fhat_neg
/// for (G_-, G_+). The determinant stays away from zero for every real zeta;
/// a near-zero value signals numerical trouble and is rejected.
std::pair<Complex, Complex> recover_density(const CoefficientTable& table,
                                            const SpectralCutoff& cutoff, int j,
                                            Complex fhat_pos, Complex fhat_neg,
                                            double zeta);

/// Forward spectral transform on a lambda-grid, by trapezoid quadrature over
/// the sample window. Window adequacy is reported, not guessed: the tail
/// fraction measures |f|^2 mass in the outer 10% of the window.
struct SpectralData {
  Eigen::VectorXd lambda;
  Eigen::VectorXcd f_plus;
  Eigen::VectorXcd f_minus;
  double window_tail_fraction = 0.0;
  double truncation_estimate = 0.0;
};
SpectralData forward_transform(const CoefficientTable& table,
                               const SpectralCutoff& cutoff,
                               const GridFunction& f,
                               const Eigen::VectorXd& lambda_grid);

/// Energy of the transform over zeta in [zeta_lo, zeta_hi] under the spectral
/// measure (zeta-substituted form).
double spectral_energy(const CoefficientTable& table, const GridFunction& f,
                       double zeta_lo, double zeta_hi,
                       const QuadratureConfig& quad = {});

/// ||F||^2_mu over the cutoff band divided by the windowed ||f||^2_2.
double parseval_ratio(const CoefficientTable& table,
                      const SpectralCutoff& cutoff, const GridFunction& f,
                      const QuadratureConfig& quad = {});

// ---------------------------------------------------------------------------
// Least-squares membership machinery.

struct FitConfig {
  int density_nodes = 33;
  QuadratureConfig quad{};
  double regularization = 1e-10;  // scaled by the largest Gram diagonal
};

/// Columns of the linear map from density node values to synthesized samples:
/// column k is the synthesis of the k-th minus-node hat, column K + k of the
/// k-th plus-node hat. Nodes are uniform on (0, zeta_max].
struct SynthesisBasis {
  Eigen::VectorXd zeta_nodes;
  Eigen::MatrixXcd columns;  // samples x 2K
};
SynthesisBasis build_synthesis_basis(const CoefficientTable& table,
                                     const SpectralCutoff& cutoff,
                                     const Eigen::VectorXd& xs,
                                     const FitConfig& fit = {});

struct DensityFit {
  double residual = 0.0;             // relative weighted L2 misfit
  Eigen::VectorXcd node_minus;       // fitted density at the basis nodes
  Eigen::VectorXcd node_plus;
  Eigen::VectorXcd fitted;           // model values at the samples
};

/// Normal-equation solver reused across right-hand sides (the Gram matrix and
/// its factorization depend only on the sample grid). Real inputs are fitted
/// by the real part of the synthesis model, which is the conjugation-closed
/// family the real members of the space live in; complex inputs use the full
/// complex model.
class DensityLeastSquares {
 public:
  DensityLeastSquares(const CoefficientTable& table,
                      const SpectralCutoff& cutoff, SynthesisBasis basis,
                      Eigen::VectorXd weights, double regularization);

  DensityFit solve_complex(const Eigen::VectorXcd& g) const;
  DensityFit solve_real(const Eigen::VectorXd& g) const;

  const SynthesisBasis& basis() const { return basis_; }
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  SynthesisBasis basis_;
  Eigen::VectorXd weights_;
  Eigen::LDLT<Eigen::MatrixXcd> complex_gram_;
  Eigen::LDLT<Eigen::MatrixXd> real_gram_;
  Eigen::MatrixXd real_design_;        // [Re A | -Im A]
  Eigen::VectorXcd conj_to_minus_;     // conjugation transfer at the nodes
  Eigen::VectorXcd conj_to_plus_;
  Eigen::VectorXcd conj_cross_minus_;
  Eigen::VectorXcd conj_cross_plus_;
};

struct MembershipResult {
  double residual;
  SpectralDensityPair density;
  Eigen::VectorXcd fitted;
};

/// Relative L2 distance of g from the synthesized family, by regularized
/// least squares over density node values on g's own grid.
MembershipResult membership_residual(const CoefficientTable& table,
                                     const SpectralCutoff& cutoff,
                                     const GridFunction& g,
                                     const FitConfig& fit = {});

}  // namespace varbw
