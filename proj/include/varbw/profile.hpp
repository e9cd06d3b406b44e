#pragma once

#include <Eigen/Core>
#include <complex>
#include <utility>
#include <vector>

namespace varbw {

using Complex = std::complex<double>;

/// Piecewise-constant bandwidth profile p with N jumps: intervals
/// I_j = (x_j, x_{j+1}], j = 0..N, value p_j on I_j, wavenumber scale
/// q_j = p_j^{-1/2}. A point x is assigned to the closure of the interval to
/// its left, so every breakpoint x_j belongs to I_{j-1}.
struct BandwidthProfile {
  Eigen::VectorXd breakpoints;        // x_1 < ... < x_N
  Eigen::VectorXd values;             // p_0, ..., p_N (> 0)
  Eigen::VectorXd wavenumber_scales;  // q_j = p_j^{-1/2}

  int jumps() const { return static_cast<int>(breakpoints.size()); }
  int intervals() const { return jumps() + 1; }

  /// Index j with x in (x_j, x_{j+1}]; 0 for x <= x_1, N for x > x_N.
  int interval_of(double x) const;

  double value_at(double x) const { return values[interval_of(x)]; }
  double scale_at(double x) const { return wavenumber_scales[interval_of(x)]; }
};

/// Validates breakpoints/values and derives the wavenumber scales.
BandwidthProfile make_profile(const Eigen::VectorXd& breakpoints,
                              const Eigen::VectorXd& values);

/// Finite sum t(z) = sum_k amp_k exp(i freq_k z), kept in normal form:
/// terms sorted by ascending frequency, frequencies closer than the merge
/// tolerance combined, exact-zero amplitudes dropped. Evaluation accumulates
/// in ascending-frequency order so results are bitwise reproducible.
class ExponentialSum {
 public:
  struct Term {
    Complex amp;
    double freq;
  };

  static constexpr double merge_tolerance = 1e-12;

  ExponentialSum() = default;
  explicit ExponentialSum(std::vector<Term> terms);

  static ExponentialSum zero() { return ExponentialSum(); }
  static ExponentialSum constant(Complex c);

  Complex eval(double z) const;

  /// amp * e^{i shift z} * this.
  ExponentialSum scaled(Complex amp, double freq_shift) const;

  ExponentialSum operator+(const ExponentialSum& other) const;

  /// sum_k |amp_k|; bounds |eval| for every real argument.
  double amplitude_bound() const;

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  void normalize();
  std::vector<Term> terms_;
};

Complex eval_exponential_sum(const ExponentialSum& sum, double zeta);

/// Coefficient pairs (a_j, b_j) of the plane-wave expansion
/// a_j(z) e^{i q_j z x} + b_j(z) e^{-i q_j z x} on I_j.
struct CoefficientPair {
  ExponentialSum a;
  ExponentialSum b;
};

/// Per-interval coefficients of the two fundamental solutions, built by
/// transfer-matrix propagation from the boundary data: the minus solution
/// starts at (0, 1) on I_0, the plus solution ends at (1, 0) on I_N.
struct CoefficientTable {
  BandwidthProfile profile;
  std::vector<CoefficientPair> plus;   // A_j^+
  std::vector<CoefficientPair> minus;  // A_j^-
};

/// Interface matrix L_j(z) coupling plane-wave coefficients across x_j, with
/// r = q_j / q_{j-1}:
///
///   [ (1+r) e^{-i x_j (q_j - q_{j-1}) z}   (1-r) e^{-i x_j (q_j + q_{j-1}) z} ]
///   [ (1-r) e^{+i x_j (q_j + q_{j-1}) z}   (1+r) e^{+i x_j (q_j - q_{j-1}) z} ]
///
/// The coefficient recursion is A_j = (1/2) L_j A_{j-1}; the diagonal phases
/// are fixed by continuity of both the solution and p times its derivative at
/// x_j. det L_j = 4 q_j / q_{j-1} for every z. Requires 1 <= j <= N.
Eigen::Matrix2cd transfer_matrix(const BandwidthProfile& profile, int j,
                                 double zeta);

CoefficientTable propagate_coefficients(const BandwidthProfile& profile);

/// (phi_plus, phi_minus) at spectral parameter zeta > 0 and position x,
/// evaluated with the coefficients of the interval containing x.
std::pair<Complex, Complex> fundamental_solutions(const CoefficientTable& table,
                                                  double zeta, double x);

/// Single-piece evaluation: the I_j plane-wave expansion extended to any x.
/// Used for one-sided limits at breakpoints.
Complex fundamental_solution_piece(const CoefficientTable& table, int j,
                                   bool plus, double zeta, double x);

/// det of the 2x2 coefficient matrix (columns A_j^+, A_j^-) at zeta > 0.
Complex coefficient_determinant(const CoefficientTable& table, int j,
                                double zeta);

/// All coefficient values at one spectral parameter, one entry per interval.
struct CoefficientsAt {
  Eigen::VectorXcd a_plus, b_plus, a_minus, b_minus;
};
CoefficientsAt eval_coefficients(const CoefficientTable& table, double zeta);

}  // namespace varbw
