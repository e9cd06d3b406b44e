#include <doctest.h>

#include <cmath>

#include "varbw/errors.hpp"
#include "varbw/kernels.hpp"
#include "varbw/selftest.hpp"

using namespace varbw;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1.0);
  return x;
}

GridFunction sampled(double c, double lo, double hi, int n) {
  const Eigen::VectorXd grid = linspace(lo, hi, n);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = sinc(c * grid[i]);
  return GridFunction::real(grid, v);
}

}  // namespace

TEST_CASE("toy parameters satisfy the mixing identities") {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const ToyModelParams t = ToyModelParams::make(
        rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0),
        rng.log_uniform(0.2, 9.0));
    CHECK(t.rho_plus + t.rho_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.c_plus * t.rho_plus ==
          doctest::Approx(t.c_minus * t.rho_minus).epsilon(1e-14));
  }
}

TEST_CASE("toy parameters from a profile require a single jump at zero") {
  const SpectralCutoff cutoff(4.0);
  CHECK_THROWS_WITH_AS(
      ToyModelParams::from_profile(
          make_profile(vec({-1.0, 1.0}), vec({1, 2, 3})), cutoff),
      doctest::Contains("ToyRequiresSingleJump"), Error);
  CHECK_THROWS_AS(ToyModelParams::from_profile(
                      make_profile(vec({0.5}), vec({1, 2})), cutoff),
                  Error);
}

TEST_CASE("toy kernel collapses to the sinc kernel without a jump") {
  const ToyModelParams t = ToyModelParams::make(1.0, 1.0, 4.0);
  const double c = 2.0;
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-6.0, 6.0), y = rng.uniform(-6.0, 6.0);
    CHECK(kernel_toy(t, x, y) ==
          doctest::Approx(c / M_PI * sinc(c * (x - y))).epsilon(1e-12));
  }
}

TEST_CASE("toy kernel is symmetric across the mixed-sign cases") {
  const ToyModelParams t = ToyModelParams::make(1.0, 4.0, 4.0);
  Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-5.0, 0.0), y = rng.uniform(0.0, 5.0);
    CHECK(kernel_toy(t, x, y) == doctest::Approx(kernel_toy(t, y, x)).epsilon(1e-12));
  }
}

TEST_CASE("toy kernel is continuous at the jump") {
  const ToyModelParams t = ToyModelParams::make(1.0, 4.0, 4.0);
  // Matching one-sided diagonal values: both reduce to 2 c_- rho_- / pi.
  CHECK(t.c_minus / M_PI * (1.0 - (t.rho_plus - t.rho_minus)) ==
        doctest::Approx(t.c_plus / M_PI * (1.0 + (t.rho_plus - t.rho_minus)))
            .epsilon(1e-14));
  const double eps = 1e-9;
  CHECK(kernel_toy(t, -eps, -eps) ==
        doctest::Approx(kernel_toy(t, eps, eps)).epsilon(1e-6));
}

TEST_CASE("generic kernel matches the closed form on a single jump") {
  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 4.0}));
  const CoefficientTable table = propagate_coefficients(p);
  const SpectralCutoff cutoff(4.0);
  const ToyModelParams t = ToyModelParams::from_profile(p, cutoff);
  Rng rng(17);
  for (int k = 0; k < 30; ++k) {
    const double x = rng.uniform(-5.0, 5.0), y = rng.uniform(-5.0, 5.0);
    KernelDiagnostics diag;
    const double got = kernel_generic(table, cutoff, x, y, {}, &diag);
    CHECK(got == doctest::Approx(kernel_toy(t, x, y)).epsilon(1e-8));
    CHECK(diag.imag_residue <= 1e-10);
  }
}

TEST_CASE("generic kernel is symmetric") {
  const BandwidthProfile p =
      make_profile(vec({-0.8, 1.4}), vec({0.7, 2.2, 1.1}));
  const CoefficientTable table = propagate_coefficients(p);
  const SpectralCutoff cutoff(2.0);
  Rng rng(19);
  for (int k = 0; k < 20; ++k) {
    const double x = rng.uniform(-4.0, 4.0), y = rng.uniform(-4.0, 4.0);
    const double kxy = kernel_generic(table, cutoff, x, y);
    const double kyx = kernel_generic(table, cutoff, y, x);
    CHECK(std::abs(kxy - kyx) <= 1e-10);
  }
}

TEST_CASE("kernel reproduces members and is idempotent under itself") {
  Rng rng(23);
  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 4.0}));
  const CoefficientTable table = propagate_coefficients(p);
  const SpectralCutoff cutoff(4.0);
  const SpectralDensityPair d = smooth_density(rng, 49, 2.0, 1.0, 5);
  const Eigen::VectorXd grid = breakpoint_aligned_grid(p, -30.0, 30.0, 3001);
  const Eigen::VectorXd f = synthesize_many(table, cutoff, d, grid).real();
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const double fmax = f.cwiseAbs().maxCoeff();
  const Eigen::VectorXd xe = linspace(-8.0, 8.0, 9);
  const Eigen::MatrixXd K = kernel_generic_matrix(table, cutoff, xe, grid);
  const Eigen::VectorXd reproduced = K * (w.array() * f.array()).matrix();
  for (Eigen::Index i = 0; i < xe.size(); ++i) {
    const double truth = synthesize(table, cutoff, d, xe[i]).real();
    CHECK(std::abs(reproduced[i] - truth) <= 1e-4 * fmax);
  }
}

TEST_CASE("kernel composed with itself reproduces the kernel") {
  // The kernel row at a fixed point decays only like 1/y, so the product
  // integral converges like 1/W; the closed form makes a wide window cheap.
  const ToyModelParams t = ToyModelParams::make(1.0, 4.0, 4.0);
  const double W = 2500.0, h = 0.05;
  const int n = static_cast<int>(2 * W / h) + 1;
  const Eigen::VectorXd grid = linspace(-W, W, n);
  for (double z : {-1.2, 0.9}) {
    Eigen::VectorXd kz(n);
    for (int i = 0; i < n; ++i) kz[i] = kernel_toy(t, grid[i], z);
    for (double x : {-2.0, 0.4, 3.0}) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
        acc += w * kernel_toy(t, x, grid[i]) * kz[i];
      }
      CHECK(std::abs(acc - kernel_toy(t, x, z)) <= 1e-4);
    }
  }
}

TEST_CASE("band-limited projection fixes members of the smaller space") {
  // sinc tails decay like 1/y, so the projection is window-truncation
  // limited at about 1/(pi c W); the error must sit under that bound and
  // shrink when the window grows.
  const double c = 1.5;
  auto worst = [&](double width, int n) {
    const GridFunction inside = sampled(c, -width, width, n);
    const GridFunction smaller = sampled(0.8, -width, width, n);
    double w = 0.0;
    for (double x : {-2.0, -0.3, 0.0, 1.1, 3.7}) {
      w = std::max(w, std::abs(pw_projection(c, inside, x) - sinc(c * x)));
      w = std::max(w, std::abs(pw_projection(c, smaller, x) - sinc(0.8 * x)));
    }
    return w;
  };
  const double w60 = worst(60.0, 6001);
  const double w240 = worst(240.0, 24001);
  CHECK(w60 <= 2.0 / (M_PI * 0.8 * 60.0));
  CHECK(w240 <= 2.0 / (M_PI * 0.8 * 240.0));
  CHECK(w240 < 0.5 * w60);
  const GridFunction f = sampled(c, -10.0, 10.0, 101);
  CHECK_THROWS_WITH_AS(pw_projection(0.0, f, 0.0),
                       doctest::Contains("NonPositiveScale"), Error);
}

TEST_CASE("dilation calculus") {
  const GridFunction f = sampled(1.0, -20.0, 20.0, 2001);
  SUBCASE("unit scale is the identity") {
    const GridFunction g = dilate(1.0, f);
    CHECK((g.x - f.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.v - f.v).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("norm preservation") {
    for (double a : {0.3, 0.9, 2.7}) {
      const GridFunction g = dilate(a, f);
      CHECK(grid_norm(g) == doctest::Approx(grid_norm(f)).epsilon(1e-12));
    }
  }
  SUBCASE("composition of scalings") {
    const GridFunction g = dilate(2.0, dilate(3.0, f));
    const GridFunction h = dilate(6.0, f);
    CHECK((g.x - h.x).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((g.v - h.v).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("scale must be positive") {
    CHECK_THROWS_WITH_AS(dilate(-1.0, f), doctest::Contains("NonPositiveScale"),
                         Error);
  }
}

TEST_CASE("projection dilation identity at random parameters") {
  const GridFunction f = sampled(1.1, -30.0, 30.0, 3001);
  Rng rng(29);
  for (int k = 0; k < 30; ++k) {
    const double a = rng.uniform(0.5, 2.0);
    const double c = rng.uniform(0.5, 2.0);
    const double x = rng.uniform(-4.0, 4.0);
    const double lhs = std::sqrt(a) * pw_projection(c, dilate(1.0 / a, f), a * x);
    const double rhs = pw_projection(a * c, f, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("half-line identities hold for members and fail off-space") {
  Rng rng(31);
  const BandwidthProfile p = make_profile(vec({0.0}), vec({1.0, 4.0}));
  const CoefficientTable table = propagate_coefficients(p);
  const SpectralCutoff cutoff(4.0);
  const ToyModelParams params = ToyModelParams::from_profile(p, cutoff);
  const Eigen::VectorXd grid = breakpoint_aligned_grid(p, -28.0, 28.0, 2801);
  const SpectralDensityPair d = smooth_density(rng, 65, 2.0, 1.0, 5);
  const Eigen::VectorXd f = synthesize_many(table, cutoff, d, grid).real();
  const auto [rm, rp] =
      toy_fixedpoint_residual(params, GridFunction::real(grid, f));
  CHECK(rm <= 1e-3);
  CHECK(rp <= 1e-3);

  SUBCASE("zero function has zero residuals") {
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(grid.size());
    const auto [zm, zp] =
        toy_fixedpoint_residual(params, GridFunction::real(grid, z));
    CHECK(zm == 0.0);
    CHECK(zp == 0.0);
  }
  SUBCASE("a plain sinc wave is not a member when the bandwidth jumps") {
    Eigen::VectorXd v(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      v[i] = sinc(params.c_minus * grid[i]);
    const auto [sm, sp] =
        toy_fixedpoint_residual(params, GridFunction::real(grid, v));
    CHECK(std::max(sm, sp) >= 1e-2);
  }
  SUBCASE("asymmetric windows are rejected") {
    const Eigen::VectorXd bad = linspace(-10.0, 12.0, 1101);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(bad.size());
    CHECK_THROWS_WITH_AS(
        toy_fixedpoint_residual(params, GridFunction::real(bad, z)),
        doctest::Contains("AsymmetricWindow"), Error);
  }
}
