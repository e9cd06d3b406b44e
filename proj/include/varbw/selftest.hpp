#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varbw/profile.hpp"
#include "varbw/spectral.hpp"

namespace varbw {

/// Deterministic, platform-independent random stream (splitmix64 core).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b);
  double normal();
  Complex cnormal() { return {normal(), normal()}; }

 private:
  std::uint64_t state_;
};

/// Profile with `jumps` breakpoints in [x_lo, x_hi] separated by at least
/// `min_gap`, values log-uniform in [p_lo, p_hi].
BandwidthProfile random_profile(Rng& rng, int jumps, double x_lo, double x_hi,
                                double min_gap, double p_lo, double p_hi);

/// Density pair sampled from smooth random bumps vanishing at both band ends:
/// node values of env(z) * (low-order polynomial), env = (z/Z (1-z/Z))^taper.
/// The taper order controls the decay of the synthesized function (one extra
/// power of 1/x per order); smooth node curves keep the piecewise-linear
/// kinks small.
SpectralDensityPair smooth_density(Rng& rng, int nodes, double zeta_max,
                                   double scale = 1.0, int taper = 2);

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestReport {
  std::vector<CriterionResult> results;
  bool all_pass() const;
};

/// Runs every built-in acceptance criterion whose name contains `filter`
/// (all of them when empty). Criteria are seeded and deterministic.
SelftestReport run_selftest(const std::string& filter = "");

/// Prints one PASS/FAIL line per criterion to stdout.
void print_report(const SelftestReport& report);

}  // namespace varbw
