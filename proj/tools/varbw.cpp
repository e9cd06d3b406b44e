// Command-line front end: profile validation, synthesis, kernels, projection,
// sign retrieval, the built-in acceptance suite, and a sampling experiment.
//
// Exit codes: 0 success, 1 numerical failure, 2 input error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "varbw/errors.hpp"
#include "varbw/io.hpp"
#include "varbw/kernels.hpp"
#include "varbw/selftest.hpp"
#include "varbw/signret.hpp"

namespace {

using nlohmann::json;
using namespace varbw;

bool log_debug() {
  const char* env = std::getenv("VARBW_LOG");
  return env && std::string(env) == "debug";
}

void debug(const std::string& msg) {
  if (log_debug()) std::fprintf(stderr, "[varbw] %s\n", msg.c_str());
}

std::string join(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

struct GridSpec {
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

GridSpec parse_grid_spec(const std::string& s) {
  GridSpec g;
  const auto c1 = s.find(':');
  const auto c2 = s.rfind(':');
  if (c1 == std::string::npos || c2 == c1)
    raise(errc::parse_error, "grid spec must be lo:hi:count, got '" + s + "'");
  try {
    g.lo = std::stod(s.substr(0, c1));
    g.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    g.count = std::stoi(s.substr(c2 + 1));
  } catch (const std::exception&) {
    raise(errc::parse_error, "grid spec must be lo:hi:count, got '" + s + "'");
  }
  if (!(g.lo < g.hi) || g.count < 2)
    raise(errc::parse_error, "grid spec needs lo < hi and count >= 2");
  return g;
}

Eigen::VectorXd spec_to_grid(const GridSpec& g) {
  Eigen::VectorXd x(g.count);
  for (int i = 0; i < g.count; ++i)
    x[i] = g.lo + (g.hi - g.lo) * i / (g.count - 1.0);
  return x;
}

int cmd_profile_validate(const std::string& profile_path) {
  const BandwidthProfile p = read_profile_json(profile_path);
  std::printf("profile ok: %d jump(s), %d interval(s)\n", p.jumps(),
              p.intervals());
  for (int j = 0; j < p.intervals(); ++j)
    std::printf("  interval %d: p=%s q=%s\n", j,
                format_double(p.values[j]).c_str(),
                format_double(p.wavenumber_scales[j]).c_str());
  return 0;
}

int cmd_synth(const std::string& profile_path, double lambda,
              const std::string& density_path, double window, int samples,
              int nodes, bool real_part, const std::string& out_dir) {
  const BandwidthProfile profile = read_profile_json(profile_path);
  const SpectralDensityPair density = read_density_csv(density_path);
  const SpectralCutoff cutoff(lambda);
  validate_density(density, cutoff);
  const CoefficientTable table = propagate_coefficients(profile);
  const Eigen::VectorXd grid =
      breakpoint_aligned_grid(profile, -window, window, samples);
  QuadratureConfig quad;
  quad.nodes_per_panel = nodes;
  debug("synthesizing " + std::to_string(grid.size()) + " samples");
  const Eigen::VectorXcd values =
      synthesize_many(table, cutoff, density, grid, quad);

  GridFunction f;
  if (real_part)
    f = GridFunction::real(grid, values.real());
  else
    f = GridFunction::complex(grid, values);
  write_grid_function_csv(join(out_dir, "synth.csv"), f);

  json meta;
  meta["lambda"] = lambda;
  meta["zeta_max"] = cutoff.zeta_max;
  meta["samples"] = static_cast<int>(grid.size());
  meta["window"] = window;
  meta["nodes_per_panel"] = nodes;
  meta["real_part"] = real_part;
  meta["max_abs"] = f.max_abs();
  write_text_file(join(out_dir, "synth_meta.json"), meta.dump(2) + "\n");
  return 0;
}

int cmd_kernel(const std::string& profile_path, double lambda,
               const std::string& mode, const std::string& xgrid,
               const std::string& ygrid, int nodes,
               const std::string& out_dir) {
  const BandwidthProfile profile = read_profile_json(profile_path);
  const SpectralCutoff cutoff(lambda);
  const Eigen::VectorXd xs = spec_to_grid(parse_grid_spec(xgrid));
  const Eigen::VectorXd ys = spec_to_grid(parse_grid_spec(ygrid));
  QuadratureConfig quad;
  quad.nodes_per_panel = nodes;

  json meta;
  meta["mode"] = mode;
  meta["lambda"] = lambda;
  Eigen::MatrixXd k;
  if (mode == "toy") {
    const ToyModelParams params = ToyModelParams::from_profile(profile, cutoff);
    k.resize(xs.size(), ys.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i)
      for (Eigen::Index j = 0; j < ys.size(); ++j)
        k(i, j) = kernel_toy(params, xs[i], ys[j]);
  } else if (mode == "generic") {
    const CoefficientTable table = propagate_coefficients(profile);
    double imag = 0.0;
    k = kernel_generic_matrix(table, cutoff, xs, ys, quad, &imag);
    meta["imag_residue"] = imag;
    if (profile.jumps() == 1 && profile.breakpoints[0] == 0.0) {
      const ToyModelParams params =
          ToyModelParams::from_profile(profile, cutoff);
      double kmax = k.cwiseAbs().maxCoeff(), diff = 0.0;
      for (Eigen::Index i = 0; i < xs.size(); ++i)
        for (Eigen::Index j = 0; j < ys.size(); ++j)
          diff = std::max(diff, std::abs(k(i, j) - kernel_toy(params, xs[i], ys[j])));
      meta["closed_form_max_rel_diff"] = diff / std::max(kmax, 1e-300);
    }
  } else {
    raise(errc::parse_error, "mode must be 'toy' or 'generic', got " + mode);
  }
  write_kernel_csv(join(out_dir, "kernel.csv"), xs, ys, k);
  write_text_file(join(out_dir, "kernel_meta.json"), meta.dump(2) + "\n");
  return 0;
}

int cmd_project(double c, const std::string& input,
                const std::string& out_dir) {
  const GridFunction f = read_grid_function_csv(input);
  Eigen::VectorXd values(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    values[i] = pw_projection(c, f, f.x[i]);
  write_grid_function_csv(join(out_dir, "projection.csv"),
                          GridFunction::real(f.x, values));
  // Truncation report: how much of |f| lives at the window edges.
  const double fmax = f.max_abs();
  const double edge =
      std::max(std::abs(f.v[0]), std::abs(f.v[f.size() - 1]));
  json meta;
  meta["band_limit"] = c;
  meta["edge_to_peak"] = fmax > 0.0 ? edge / fmax : 0.0;
  write_text_file(join(out_dir, "projection_meta.json"), meta.dump(2) + "\n");
  return 0;
}

int cmd_signret(const std::string& profile_path, double lambda,
                const std::string& magnitude_path, double zero_tol_rel,
                int density_nodes, const std::string& out_dir) {
  const BandwidthProfile profile = read_profile_json(profile_path);
  const SpectralCutoff cutoff(lambda);
  GridFunction m = read_grid_function_csv(magnitude_path);
  if (m.complex_valued)
    raise(errc::parse_error, "magnitude file must be real-valued (x,m)");
  SignRetrievalConfig config;
  if (zero_tol_rel > 0.0) config.zero_tol_rel = zero_tol_rel;
  if (density_nodes > 0) config.fit.density_nodes = density_nodes;
  const SignRetrievalResult res = sign_retrieve(profile, cutoff, m, config);

  write_grid_function_csv(join(out_dir, "reconstruction.csv"), res.f, "f");
  json meta;
  meta["pattern"] = res.pattern.eps;
  json residuals = json::object();
  for (const PatternScore& s : res.resolution.scores) {
    std::string key;
    for (int e : s.pattern.eps) key += e > 0 ? '+' : '-';
    residuals[key] = s.residual;
  }
  meta["residuals"] = residuals;
  meta["flags"] = res.resolution.flags;
  meta["zero_tol"] = res.zero_tol;
  meta["winner_ratio"] = res.resolution.zero_function
                             ? 0.0
                             : res.resolution.winner_ratio;
  meta["zero_function"] = res.resolution.zero_function;
  write_text_file(join(out_dir, "pattern.json"), meta.dump(2) + "\n");
  return 0;
}

int cmd_selftest(const std::string& filter, const std::string& out_dir) {
  const SelftestReport report = run_selftest(filter);
  print_report(report);
  if (!out_dir.empty()) {
    json j = json::array();
    for (const CriterionResult& r : report.results)
      j.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
    write_text_file(join(out_dir, "selftest.json"), j.dump(2) + "\n");
  }
  return report.all_pass() ? 0 : 1;
}

int cmd_sampling_sweep(const std::string& profile_path, double lambda,
                       std::uint64_t seed, double window,
                       const std::string& out_dir) {
  const BandwidthProfile profile = read_profile_json(profile_path);
  const SpectralCutoff cutoff(lambda);
  const CoefficientTable table = propagate_coefficients(profile);
  Rng rng(seed);
  const SpectralDensityPair density = smooth_density(rng, 48, cutoff.zeta_max);
  const Eigen::VectorXd fine =
      breakpoint_aligned_grid(profile, -window, window, 4801);
  const Eigen::VectorXd f = synthesize_many(table, cutoff, density, fine).real();
  const double fmax = f.cwiseAbs().maxCoeff();

  std::string csv = "step,samples,recovered,winner_ratio\n";
  for (int decimate : {1, 2, 4, 8, 16, 32}) {
    std::vector<double> gx, gm;
    for (Eigen::Index i = 0; i < fine.size(); i += decimate) {
      gx.push_back(fine[i]);
      gm.push_back(std::abs(f[i]));
    }
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(gx.data(), gx.size());
    Eigen::VectorXd mv = Eigen::Map<Eigen::VectorXd>(gm.data(), gm.size());
    bool recovered = false;
    double ratio = 0.0;
    try {
      SignRetrievalConfig config;
      config.zero_tol_rel = 0.04;
      const SignRetrievalResult res = sign_retrieve(
          profile, cutoff, GridFunction::real(x, mv), config);
      ratio = res.resolution.winner_ratio;
      double ep = 0.0, em = 0.0;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double truth = f[k * decimate];
        if (std::abs(truth) <= res.zero_tol) continue;
        ep = std::max(ep, std::abs(res.f.v[k].real() - truth));
        em = std::max(em, std::abs(res.f.v[k].real() + truth));
      }
      recovered = std::min(ep, em) <= 1e-6 * fmax;
    } catch (const Error& e) {
      debug(std::string("sweep step failed: ") + e.what());
    }
    const double step = (fine[1] - fine[0]) * decimate;
    csv += format_double(step) + "," + std::to_string(gx.size()) + "," +
           (recovered ? "1" : "0") + "," + format_double(ratio) + "\n";
  }
  write_text_file(join(out_dir, "sweep.csv"), csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for variable-bandwidth band-limited spaces"};
  app.require_subcommand(1);

  std::string profile_path, density_path, magnitude_path, input_path;
  std::string out_dir = ".";
  std::string mode = "generic", xgrid = "-5:5:21", ygrid = "-5:5:21";
  std::string filter;
  double lambda = 1.0, window = 12.0, band = 1.0, zero_tol_rel = 0.0;
  int samples = 1201, nodes = 10, density_nodes = 0;
  std::uint64_t seed = 0;

  CLI::App* profile = app.add_subcommand("profile", "profile file utilities");
  CLI::App* validate = profile->add_subcommand("validate", "validate a profile file");
  validate->add_option("--profile", profile_path, "profile JSON")->required();

  CLI::App* synth = app.add_subcommand("synth", "synthesize from a density file");
  synth->add_option("--profile", profile_path)->required();
  synth->add_option("--lambda", lambda)->required();
  synth->add_option("--density", density_path, "density CSV")->required();
  synth->add_option("--window", window, "half-width of the sample window");
  synth->add_option("--samples", samples);
  synth->add_option("--nodes", nodes, "quadrature nodes per panel");
  bool real_part = false;
  synth->add_flag("--real", real_part, "emit the real part only");
  synth->add_option("--out", out_dir);

  CLI::App* kernel = app.add_subcommand("kernel", "reproducing kernel on a grid");
  kernel->add_option("--profile", profile_path)->required();
  kernel->add_option("--lambda", lambda)->required();
  kernel->add_option("--mode", mode, "toy|generic");
  kernel->add_option("--xgrid", xgrid, "lo:hi:count");
  kernel->add_option("--ygrid", ygrid, "lo:hi:count");
  kernel->add_option("--nodes", nodes);
  kernel->add_option("--out", out_dir);

  CLI::App* project = app.add_subcommand("project", "band-limited projection");
  project->add_option("--c", band, "band limit")->required();
  project->add_option("--input", input_path, "grid function CSV")->required();
  project->add_option("--out", out_dir);

  CLI::App* signret = app.add_subcommand("signret", "recover a function from its magnitude");
  signret->add_option("--profile", profile_path)->required();
  signret->add_option("--lambda", lambda)->required();
  signret->add_option("--magnitude", magnitude_path, "magnitude CSV")->required();
  signret->add_option("--zero-tol", zero_tol_rel, "zero tolerance relative to max");
  signret->add_option("--density-nodes", density_nodes);
  signret->add_option("--out", out_dir);

  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--filter", filter, "run criteria containing this substring");
  selftest->add_option("--out", out_dir);

  CLI::App* experiment = app.add_subcommand("experiment", "empirical studies");
  CLI::App* sweep = experiment->add_subcommand(
      "sampling-sweep", "recovery success against sample spacing");
  sweep->add_option("--profile", profile_path)->required();
  sweep->add_option("--lambda", lambda)->required();
  sweep->add_option("--seed", seed, "rng seed (required for reproducibility)")
      ->required();
  sweep->add_option("--window", window);
  sweep->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_profile_validate(profile_path);
    if (synth->parsed())
      return cmd_synth(profile_path, lambda, density_path, window, samples,
                       nodes, real_part, out_dir);
    if (kernel->parsed())
      return cmd_kernel(profile_path, lambda, mode, xgrid, ygrid, nodes, out_dir);
    if (project->parsed()) return cmd_project(band, input_path, out_dir);
    if (signret->parsed())
      return cmd_signret(profile_path, lambda, magnitude_path, zero_tol_rel,
                         density_nodes, out_dir);
    if (selftest->parsed()) return cmd_selftest(filter, out_dir);
    if (sweep->parsed())
      return cmd_sampling_sweep(profile_path, lambda, seed, window, out_dir);
  } catch (const varbw::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return varbw::is_input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
