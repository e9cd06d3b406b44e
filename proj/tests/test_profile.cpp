#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/LU>

#include "varbw/errors.hpp"
#include "varbw/profile.hpp"
#include "varbw/selftest.hpp"

using namespace varbw;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Coefficient pairs by direct matrix propagation at a single zeta.
void propagate_numeric(const BandwidthProfile& p, double zeta,
                       std::vector<Eigen::Vector2cd>& plus,
                       std::vector<Eigen::Vector2cd>& minus) {
  const int n = p.jumps();
  minus.assign(n + 1, Eigen::Vector2cd(0.0, 1.0));
  for (int j = 1; j <= n; ++j)
    minus[j] = 0.5 * transfer_matrix(p, j, zeta) * minus[j - 1];
  plus.assign(n + 1, Eigen::Vector2cd(1.0, 0.0));
  for (int j = n; j >= 1; --j)
    plus[j - 1] = 2.0 * transfer_matrix(p, j, zeta).inverse() * plus[j];
}

Complex piece_derivative(const CoefficientTable& t, int j, bool plus,
                         double zeta, double x) {
  const CoefficientPair& c = plus ? t.plus[j] : t.minus[j];
  const double qj = t.profile.wavenumber_scales[j];
  const Complex e = std::exp(Complex(0.0, qj * zeta * x));
  return Complex(0.0, qj * zeta) * (c.a.eval(zeta) * e - c.b.eval(zeta) / e);
}

}  // namespace

TEST_CASE("make_profile validates and derives wavenumber scales") {
  const BandwidthProfile flat = make_profile(vec({}), vec({1.0}));
  CHECK(flat.jumps() == 0);
  CHECK(flat.wavenumber_scales[0] == doctest::Approx(1.0).epsilon(1e-15));

  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 4.0}));
  CHECK(p.wavenumber_scales[0] == doctest::Approx(1.0));
  CHECK(p.wavenumber_scales[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(make_profile(vec({0.0, 0.0}), vec({1, 2, 3})), Error);
  CHECK_THROWS_WITH_AS(make_profile(vec({1.0, 0.5}), vec({1, 2, 3})),
                       doctest::Contains("NonIncreasingBreakpoints"), Error);
  CHECK_THROWS_WITH_AS(make_profile(vec({0.0}), vec({1.0, -2.0})),
                       doctest::Contains("NonPositiveValue"), Error);
  CHECK_THROWS_WITH_AS(make_profile(vec({0.0}), vec({1.0})),
                       doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("interval assignment puts breakpoints in the left interval") {
  const BandwidthProfile p = make_profile(vec({-1.0, 2.0}), vec({1, 2, 3}));
  CHECK(p.interval_of(-5.0) == 0);
  CHECK(p.interval_of(-1.0) == 0);
  CHECK(p.interval_of(-0.999) == 1);
  CHECK(p.interval_of(2.0) == 1);
  CHECK(p.interval_of(2.001) == 2);
}

TEST_CASE("transfer matrix degenerates to 2*identity when p does not jump") {
  const BandwidthProfile p = make_profile(vec({0.7}), vec({2.5, 2.5}));
  for (double zeta : {0.0, 0.3, 1.7, 9.2}) {
    const Eigen::Matrix2cd L = transfer_matrix(p, 1, zeta);
    CHECK((L - 2.0 * Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  }
}

TEST_CASE("transfer matrix at zeta=0 is the real mixing matrix") {
  const BandwidthProfile p = make_profile(vec({1.3}), vec({1.0, 4.0}));
  const double r = 0.5;  // q_1/q_0
  const Eigen::Matrix2cd L = transfer_matrix(p, 1, 0.0);
  CHECK(L(0, 0).real() == doctest::Approx(1.0 + r));
  CHECK(L(0, 1).real() == doctest::Approx(1.0 - r));
  CHECK(L(1, 0).real() == doctest::Approx(1.0 - r));
  CHECK(L(1, 1).real() == doctest::Approx(1.0 + r));
  CHECK(L.imag().norm() < 1e-15);
}

TEST_CASE("det L_j = 4 q_j / q_{j-1} for random arguments") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const BandwidthProfile p =
        random_profile(rng, 1 + trial % 4, -3.0, 3.0, 0.4, 0.25, 4.0);
    const int j = 1 + static_cast<int>(rng.uniform() * p.jumps());
    const double zeta = rng.uniform(-8.0, 8.0);
    const Complex det = transfer_matrix(p, j, zeta).determinant();
    const double expected =
        4.0 * p.wavenumber_scales[j] / p.wavenumber_scales[j - 1];
    CHECK(std::abs(det - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("transfer matrix index range") {
  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 2.0}));
  CHECK_THROWS_WITH_AS(transfer_matrix(p, 0, 1.0),
                       doctest::Contains("IndexOutOfRange"), Error);
  CHECK_THROWS_AS(transfer_matrix(p, 2, 1.0), Error);
}

TEST_CASE("exponential sum basics") {
  CHECK(ExponentialSum::zero().eval(3.7) == Complex(0.0, 0.0));
  CHECK(ExponentialSum::constant(1.0).eval(123.0) == Complex(1.0, 0.0));

  const double w = 2.4;
  const ExponentialSum cosine({{Complex(1.0, 0.0), w}, {Complex(1.0, 0.0), -w}});
  for (double z : {0.0, 0.5, 2.0, -3.1}) {
    CHECK(cosine.eval(z).real() == doctest::Approx(2.0 * std::cos(w * z)));
    CHECK(std::abs(cosine.eval(z).imag()) < 1e-15);
  }
}

TEST_CASE("exponential sum merges nearby frequencies and drops zeros") {
  const ExponentialSum s({{Complex(1.0, 0.0), 1.0},
                          {Complex(2.0, 0.0), 1.0 + 1e-13},
                          {Complex(-3.0, 0.0), 1.0 + 2e-13}});
  CHECK(s.size() == 0);  // amplitudes cancel exactly after merging
  const ExponentialSum t({{Complex(1.0, 0.0), 1.0}, {Complex(1.0, 0.0), 2.0}});
  CHECK(t.size() == 2);
}

TEST_CASE("evaluation is bounded by the total amplitude") {
  Rng rng(7);
  std::vector<ExponentialSum::Term> terms;
  for (int k = 0; k < 12; ++k)
    terms.push_back({rng.cnormal(), rng.uniform(-5.0, 5.0)});
  const ExponentialSum s(terms);
  const double bound = s.amplitude_bound();
  for (int i = 0; i < 100; ++i)
    CHECK(std::abs(s.eval(rng.uniform(-20.0, 20.0))) <= bound * (1 + 1e-12));
}

TEST_CASE("propagation boundary data") {
  SUBCASE("no jumps") {
    const CoefficientTable t =
        propagate_coefficients(make_profile(vec({}), vec({1.0})));
    CHECK(t.minus[0].a.size() == 0);
    CHECK(t.minus[0].b.eval(2.0) == Complex(1.0, 0.0));
    CHECK(t.plus[0].a.eval(2.0) == Complex(1.0, 0.0));
    CHECK(t.plus[0].b.size() == 0);
  }
  SUBCASE("constant p stays at the boundary data") {
    const CoefficientTable t = propagate_coefficients(
        make_profile(vec({-0.5, 0.8, 2.0}), vec({3.0, 3.0, 3.0, 3.0})));
    for (int j = 0; j <= 3; ++j) {
      for (double zeta : {0.3, 1.0, 5.5}) {
        CHECK(std::abs(t.minus[j].a.eval(zeta)) < 1e-15);
        CHECK(std::abs(t.minus[j].b.eval(zeta) - 1.0) < 1e-15);
        CHECK(std::abs(t.plus[j].a.eval(zeta) - 1.0) < 1e-15);
        CHECK(std::abs(t.plus[j].b.eval(zeta)) < 1e-15);
      }
    }
  }
}

TEST_CASE("single jump coefficients match the hand propagation") {
  for (double x1 : {0.0, 0.7}) {
    const BandwidthProfile p = make_profile(vec({x1}), vec({1.0, 4.0}));
    const CoefficientTable t = propagate_coefficients(p);
    for (double zeta : {0.5, 1.0, 2.0}) {
      const Eigen::Vector2cd direct =
          0.5 * transfer_matrix(p, 1, zeta) * Eigen::Vector2cd(0.0, 1.0);
      CHECK(std::abs(t.minus[1].a.eval(zeta) - direct[0]) < 1e-14);
      CHECK(std::abs(t.minus[1].b.eval(zeta) - direct[1]) < 1e-14);
    }
  }
}

TEST_CASE("exponential-sum propagation agrees with matrix propagation") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const BandwidthProfile p =
        random_profile(rng, 1 + trial % 4, -3.0, 3.0, 0.4, 0.25, 4.0);
    const CoefficientTable t = propagate_coefficients(p);
    std::vector<Eigen::Vector2cd> plus, minus;
    for (int k = 0; k < 5; ++k) {
      const double zeta = rng.uniform(0.05, 4.0);
      propagate_numeric(p, zeta, plus, minus);
      for (int j = 0; j <= p.jumps(); ++j) {
        CHECK(std::abs(t.minus[j].a.eval(zeta) - minus[j][0]) < 1e-12);
        CHECK(std::abs(t.minus[j].b.eval(zeta) - minus[j][1]) < 1e-12);
        CHECK(std::abs(t.plus[j].a.eval(zeta) - plus[j][0]) < 1e-12);
        CHECK(std::abs(t.plus[j].b.eval(zeta) - plus[j][1]) < 1e-12);
      }
    }
  }
}

TEST_CASE("forward propagation of the plus boundary lands on (1,0)") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const BandwidthProfile p =
        random_profile(rng, 1 + trial % 4, -3.0, 3.0, 0.4, 0.25, 4.0);
    const CoefficientTable t = propagate_coefficients(p);
    for (int k = 0; k < 4; ++k) {
      const double zeta = rng.uniform(0.05, 3.0);
      Eigen::Vector2cd a(t.plus[0].a.eval(zeta), t.plus[0].b.eval(zeta));
      for (int j = 1; j <= p.jumps(); ++j)
        a = 0.5 * transfer_matrix(p, j, zeta) * a;
      CHECK((a - Eigen::Vector2cd(1.0, 0.0)).norm() < 1e-10);
    }
  }
}

TEST_CASE("constant bandwidth gives plane waves") {
  const CoefficientTable t =
      propagate_coefficients(make_profile(vec({}), vec({1.0})));
  for (double zeta : {0.4, 1.0, 3.3}) {
    for (double x : {-2.0, 0.0, 1.7}) {
      const auto [plus, minus] = fundamental_solutions(t, zeta, x);
      CHECK(std::abs(plus - std::exp(Complex(0.0, zeta * x))) < 1e-15);
      CHECK(std::abs(minus - std::exp(Complex(0.0, -zeta * x))) < 1e-15);
    }
  }
}

TEST_CASE("fundamental solutions need a positive spectral parameter") {
  const CoefficientTable t =
      propagate_coefficients(make_profile(vec({}), vec({1.0})));
  CHECK_THROWS_WITH_AS(fundamental_solutions(t, 0.0, 1.0),
                       doctest::Contains("NonPositiveSpectralParameter"), Error);
  CHECK_THROWS_AS(fundamental_solutions(t, -1.0, 1.0), Error);
}

TEST_CASE("solutions and p * derivative are continuous across every jump") {
  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    const BandwidthProfile p =
        random_profile(rng, 1 + trial % 4, -3.0, 3.0, 0.4, 0.25, 4.0);
    const CoefficientTable t = propagate_coefficients(p);
    for (int k = 0; k < 3; ++k) {
      const double zeta = rng.uniform(0.05, 3.0);
      for (int j = 1; j <= p.jumps(); ++j) {
        const double xj = p.breakpoints[j - 1];
        for (bool plus : {false, true}) {
          const Complex vl = fundamental_solution_piece(t, j - 1, plus, zeta, xj);
          const Complex vr = fundamental_solution_piece(t, j, plus, zeta, xj);
          const double scale = std::max(1.0, std::abs(vl));
          CHECK(std::abs(vl - vr) <= 1e-10 * scale);
          const Complex dl = p.values[j - 1] * piece_derivative(t, j - 1, plus, zeta, xj);
          const Complex dr = p.values[j] * piece_derivative(t, j, plus, zeta, xj);
          CHECK(std::abs(dl - dr) <= 1e-10 * std::max(1.0, std::abs(dl)));
        }
      }
    }
  }
}

TEST_CASE("interval interiors satisfy the second-order equation") {
  const BandwidthProfile p = make_profile(vec({-0.4, 1.1}), vec({1.0, 3.0, 0.5}));
  const CoefficientTable t = propagate_coefficients(p);
  const double h = 1e-3;
  for (double zeta : {0.7, 1.9}) {
    for (double x : {-2.0, 0.3, 2.5}) {
      const int j = p.interval_of(x);
      for (bool plus : {false, true}) {
        auto f = [&](double y) {
          return fundamental_solution_piece(t, j, plus, zeta, y);
        };
        const Complex second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        const Complex residual = -p.values[j] * second - zeta * zeta * f(x);
        CHECK(std::abs(residual) <= 1e-4 * std::max(1.0, std::abs(f(x))));
      }
    }
  }
}

TEST_CASE("coefficient determinant reduces to 1 in the flat cases") {
  const CoefficientTable flat =
      propagate_coefficients(make_profile(vec({}), vec({1.0})));
  const CoefficientTable same = propagate_coefficients(
      make_profile(vec({-1.0, 0.5}), vec({2.0, 2.0, 2.0})));
  for (double zeta : {0.2, 1.0, 4.4}) {
    CHECK(std::abs(coefficient_determinant(flat, 0, zeta) - 1.0) < 1e-14);
    for (int j = 0; j <= 2; ++j)
      CHECK(std::abs(coefficient_determinant(same, j, zeta) - 1.0) < 1e-14);
  }
}

TEST_CASE("single jump determinant stays away from zero") {
  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 4.0}));
  const CoefficientTable t = propagate_coefficients(p);
  std::vector<Eigen::Vector2cd> plus, minus;
  double min_det = 1e300;
  for (int k = 1; k <= 100; ++k) {
    const double zeta = 0.1 + (10.0 - 0.1) * (k - 1) / 99.0;
    for (int j = 0; j <= 1; ++j) {
      const Complex det = coefficient_determinant(t, j, zeta);
      min_det = std::min(min_det, std::abs(det));
      propagate_numeric(p, zeta, plus, minus);
      const Complex oracle = plus[j][0] * minus[j][1] - minus[j][0] * plus[j][1];
      CHECK(std::abs(det - oracle) < 1e-12);
    }
  }
  CHECK(min_det > 0.5);
}

TEST_CASE("last-interval coefficients conserve the wave flux") {
  // |b_N^-|^2 - |a_N^-|^2 = q_N / q_0, the scattering balance of the minus
  // solution; it keeps the determinant away from zero for every real zeta.
  Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const BandwidthProfile p =
        random_profile(rng, 1 + trial % 4, -3.0, 3.0, 0.4, 0.25, 4.0);
    const CoefficientTable t = propagate_coefficients(p);
    const int n = p.jumps();
    const double expected = p.wavenumber_scales[n] / p.wavenumber_scales[0];
    for (int k = 0; k < 6; ++k) {
      const double zeta = rng.uniform(0.05, 4.0);
      const double balance = std::norm(t.minus[n].b.eval(zeta)) -
                             std::norm(t.minus[n].a.eval(zeta));
      CHECK(balance == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}
