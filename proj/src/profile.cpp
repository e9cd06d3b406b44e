#include "varbw/profile.hpp"

#include <algorithm>
#include <cmath>

#include "varbw/errors.hpp"

namespace varbw {

int BandwidthProfile::interval_of(double x) const {
  // Count breakpoints strictly below x: x_j itself lands in I_{j-1}.
  const double* begin = breakpoints.data();
  const double* end = begin + breakpoints.size();
  return static_cast<int>(std::lower_bound(begin, end, x) - begin);
}

BandwidthProfile make_profile(const Eigen::VectorXd& breakpoints,
                              const Eigen::VectorXd& values) {
  if (values.size() != breakpoints.size() + 1)
    raise(errc::length_mismatch,
          "need exactly one more value than breakpoints, got " +
              std::to_string(values.size()) + " values for " +
              std::to_string(breakpoints.size()) + " breakpoints");
  for (Eigen::Index i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      raise(errc::non_increasing_breakpoints,
            "breakpoints must be strictly increasing at index " +
                std::to_string(i + 1));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(values[i] > 0.0))
      raise(errc::non_positive_value,
            "profile value at index " + std::to_string(i) +
                " must be > 0, got " + std::to_string(values[i]));
  BandwidthProfile p;
  p.breakpoints = breakpoints;
  p.values = values;
  p.wavenumber_scales = values.array().pow(-0.5);
  return p;
}

ExponentialSum::ExponentialSum(std::vector<Term> terms)
    : terms_(std::move(terms)) {
  normalize();
}

ExponentialSum ExponentialSum::constant(Complex c) {
  return ExponentialSum({{c, 0.0}});
}

void ExponentialSum::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& s, const Term& t) { return s.freq < t.freq; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && t.freq - merged.back().freq <= merge_tolerance)
      merged.back().amp += t.amp;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.amp == Complex(0.0, 0.0); });
  terms_ = std::move(merged);
}

Complex ExponentialSum::eval(double z) const {
  Complex acc(0.0, 0.0);
  for (const Term& t : terms_)
    acc += t.amp * std::exp(Complex(0.0, t.freq * z));
  return acc;
}

ExponentialSum ExponentialSum::scaled(Complex amp, double freq_shift) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back({amp * t.amp, t.freq + freq_shift});
  return ExponentialSum(std::move(out));
}

ExponentialSum ExponentialSum::operator+(const ExponentialSum& other) const {
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  out.insert(out.end(), terms_.begin(), terms_.end());
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ExponentialSum(std::move(out));
}

double ExponentialSum::amplitude_bound() const {
  double s = 0.0;
  for (const Term& t : terms_) s += std::abs(t.amp);
  return s;
}

Complex eval_exponential_sum(const ExponentialSum& sum, double zeta) {
  return sum.eval(zeta);
}

Eigen::Matrix2cd transfer_matrix(const BandwidthProfile& profile, int j,
                                 double zeta) {
  if (j < 1 || j > profile.jumps())
    raise(errc::index_out_of_range,
          "transfer matrix index must satisfy 1 <= j <= N, got " +
              std::to_string(j));
  const double qp = profile.wavenumber_scales[j - 1];
  const double qj = profile.wavenumber_scales[j];
  const double xj = profile.breakpoints[j - 1];
  const double r = qj / qp;
  const double diff = xj * (qj - qp);
  const double sum = xj * (qj + qp);
  Eigen::Matrix2cd L;
  L(0, 0) = (1.0 + r) * std::exp(Complex(0.0, -diff * zeta));
  L(0, 1) = (1.0 - r) * std::exp(Complex(0.0, -sum * zeta));
  L(1, 0) = (1.0 - r) * std::exp(Complex(0.0, sum * zeta));
  L(1, 1) = (1.0 + r) * std::exp(Complex(0.0, diff * zeta));
  return L;
}

CoefficientTable propagate_coefficients(const BandwidthProfile& profile) {
  const int n = profile.jumps();
  CoefficientTable table;
  table.profile = profile;
  table.minus.resize(n + 1);
  table.plus.resize(n + 1);

  // Forward sweep: A_j^- = (1/2) L_j A_{j-1}^- from A_0^- = (0, 1).
  table.minus[0] = {ExponentialSum::zero(), ExponentialSum::constant(1.0)};
  for (int j = 1; j <= n; ++j) {
    const double qp = profile.wavenumber_scales[j - 1];
    const double qj = profile.wavenumber_scales[j];
    const double xj = profile.breakpoints[j - 1];
    const double r = qj / qp;
    const double diff = xj * (qj - qp);
    const double sum = xj * (qj + qp);
    const ExponentialSum& a = table.minus[j - 1].a;
    const ExponentialSum& b = table.minus[j - 1].b;
    table.minus[j].a = a.scaled(0.5 * (1.0 + r), -diff) + b.scaled(0.5 * (1.0 - r), -sum);
    table.minus[j].b = a.scaled(0.5 * (1.0 - r), sum) + b.scaled(0.5 * (1.0 + r), diff);
  }

  // Backward sweep: A_{j-1}^+ = 2 L_j^{-1} A_j^+ from A_N^+ = (1, 0), with
  // the closed-form inverse using det L_j = 4 q_j / q_{j-1}.
  table.plus[n] = {ExponentialSum::constant(1.0), ExponentialSum::zero()};
  for (int j = n; j >= 1; --j) {
    const double qp = profile.wavenumber_scales[j - 1];
    const double qj = profile.wavenumber_scales[j];
    const double xj = profile.breakpoints[j - 1];
    const double r = qj / qp;
    const double diff = xj * (qj - qp);
    const double sum = xj * (qj + qp);
    const ExponentialSum& a = table.plus[j].a;
    const ExponentialSum& b = table.plus[j].b;
    const double s = 1.0 / (2.0 * r);
    table.plus[j - 1].a = a.scaled(s * (1.0 + r), diff) + b.scaled(-s * (1.0 - r), -sum);
    table.plus[j - 1].b = a.scaled(-s * (1.0 - r), sum) + b.scaled(s * (1.0 + r), -diff);
  }
  return table;
}

std::pair<Complex, Complex> fundamental_solutions(const CoefficientTable& table,
                                                  double zeta, double x) {
  if (!(zeta > 0.0))
    raise(errc::non_positive_spectral_parameter,
          "spectral parameter must be > 0, got " + std::to_string(zeta));
  const int j = table.profile.interval_of(x);
  return {fundamental_solution_piece(table, j, true, zeta, x),
          fundamental_solution_piece(table, j, false, zeta, x)};
}

Complex fundamental_solution_piece(const CoefficientTable& table, int j,
                                   bool plus, double zeta, double x) {
  if (j < 0 || j >= table.profile.intervals())
    raise(errc::index_out_of_range,
          "interval index out of range: " + std::to_string(j));
  const CoefficientPair& c = plus ? table.plus[j] : table.minus[j];
  const double phase = table.profile.wavenumber_scales[j] * zeta * x;
  const Complex e = std::exp(Complex(0.0, phase));
  return c.a.eval(zeta) * e + c.b.eval(zeta) / e;
}

Complex coefficient_determinant(const CoefficientTable& table, int j,
                                double zeta) {
  if (j < 0 || j >= table.profile.intervals())
    raise(errc::index_out_of_range,
          "interval index out of range: " + std::to_string(j));
  if (!(zeta > 0.0))
    raise(errc::non_positive_spectral_parameter,
          "spectral parameter must be > 0, got " + std::to_string(zeta));
  return table.plus[j].a.eval(zeta) * table.minus[j].b.eval(zeta) -
         table.minus[j].a.eval(zeta) * table.plus[j].b.eval(zeta);
}

CoefficientsAt eval_coefficients(const CoefficientTable& table, double zeta) {
  const int m = table.profile.intervals();
  CoefficientsAt out;
  out.a_plus.resize(m);
  out.b_plus.resize(m);
  out.a_minus.resize(m);
  out.b_minus.resize(m);
  for (int j = 0; j < m; ++j) {
    out.a_plus[j] = table.plus[j].a.eval(zeta);
    out.b_plus[j] = table.plus[j].b.eval(zeta);
    out.a_minus[j] = table.minus[j].a.eval(zeta);
    out.b_minus[j] = table.minus[j].b.eval(zeta);
  }
  return out;
}

}  // namespace varbw
