// Command-line front end: distances, potential grids, cost spectra, recovery
// and verification suites.
//
// Exit status: 0 success, 1 a verification suite failed, 2 bad usage or
// malformed input, 3 any other error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpot/errors.hpp"
#include "wpot/fourier.hpp"
#include "wpot/io.hpp"
#include "wpot/potential.hpp"
#include "wpot/recovery.hpp"
#include "wpot/transport.hpp"
#include "wpot/verify.hpp"

namespace {

using namespace wpot;

constexpr int kSuiteFailed = 1;
constexpr int kUsage = 2;

DiscreteMeasure load_measure(const std::string& path) {
  std::vector<std::string> warnings;
  DiscreteMeasure mu = measure_from_json(parse_json(read_text_file(path), path), {true}, &warnings);
  for (const std::string& w : warnings) std::fprintf(stderr, "warning: %s: %s\n", path.c_str(), w.c_str());
  return mu;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(out, text);
  }
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DistArgs {
  std::string a, b, out = "coupling.json";
  double p = 1.0;
};

int run_dist(const DistArgs& args) {
  const DiscreteMeasure mu = load_measure(args.a);
  const DiscreteMeasure nu = load_measure(args.b);
  if (mu.manifold() != nu.manifold()) throw std::invalid_argument("the measures live on different manifolds");
  const TransportResult r = solve_transport(mu, nu, args.p);
  std::printf("%s\n", format17(r.distance).c_str());
  if (!args.out.empty()) write_text_file(args.out, dump_json(transport_to_json(r)));
  return 0;
}

struct PotentialArgs {
  std::string measure, out;
  int grid = 256;
  double p = 1.0;
};

int run_potential(const PotentialArgs& args) {
  const DiscreteMeasure mu = load_measure(args.measure);
  const SampledPotential g = sample_potential(PotentialOracle::closed_form(mu, args.p), args.grid);
  emit(args.out, potential_to_csv(g));
  return 0;
}

struct FourierArgs {
  double p = 2.0;
  int jmax = 8;
  bool closed = false;
  double threshold = kSpectrumZeroThreshold;
  std::string format, out;
};

int run_fourier(const FourierArgs& args) {
  const SpectrumReport r = args.closed ? closed_form_spectrum(args.p, args.jmax, args.threshold)
                                       : nonvanishing_scan(args.p, args.jmax, args.threshold);
  std::string format = args.format;
  if (format.empty()) format = args.out.size() >= 4 && args.out.substr(args.out.size() - 4) == ".csv" ? "csv" : "json";
  emit(args.out, format == "csv" ? spectrum_to_csv(r) : dump_json(spectrum_to_json(r)));
  return 0;
}

struct RecoverArgs {
  std::string potential, sites, out;
  std::optional<double> p;
  bool marginals = false;
  bool numeric = false;
};

int run_recover(const RecoverArgs& args) {
  std::ifstream in(args.potential, std::ios::binary);
  if (!in) throw InputError(args.potential + ": cannot open file");
  const PotentialOracle t = PotentialOracle::sampled(potential_from_csv(in, args.potential, args.p));

  if (args.marginals) {
    emit(args.out, dump_json(marginals_to_json(recover_torus_marginals_p2(t))));
    return 0;
  }
  if (args.sites.empty()) throw CLI::RequiredError("--sites");

  const json sites_json = parse_json(read_text_file(args.sites), args.sites);
  std::vector<Point> sites;
  if (sites_json.is_object()) {
    sites = measure_from_json(sites_json, {true}).support();
  } else if (sites_json.is_array()) {
    for (const json& x : sites_json) sites.push_back(point_from_json(x, t.manifold()));
  } else {
    throw InputError(args.sites + ": expected a measure object or an array of points");
  }
  RecoveryOptions opts;
  opts.force_numeric = args.numeric;
  emit(args.out, dump_json(recovery_to_json(recover_weights(t, sites, opts))));
  return 0;
}

struct VerifyArgs {
  std::string suite = "all", manifold, out;
  int n = 0;
  int trials = 20;
  std::uint64_t seed = 0;
  std::optional<double> p;
  std::vector<std::string> tolerances;
};

int run_verify(const VerifyArgs& args) {
  SuiteConfig cfg;
  cfg.suite = args.suite;
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.p = args.p;
  if (!args.manifold.empty()) {
    if (args.n < 1) throw std::invalid_argument("--manifold needs --n");
    cfg.manifold = args.manifold == "torus" ? Manifold::torus(args.n) : Manifold::sphere(args.n);
  }
  for (const std::string& t : args.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--tol expects key=value, got " + t);
    cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }
  const std::vector<SuiteReport> reports = run_suites(cfg);
  std::fputs(format_report_table(reports).c_str(), stdout);
  if (!args.out.empty()) {
    json a = json::array();
    for (const SuiteReport& r : reports) a.push_back(suite_report_to_json(r));
    write_text_file(args.out, dump_json(a));
  }
  for (const SuiteReport& r : reports) {
    if (!r.passed) return kSuiteFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transport and Wasserstein potentials on the torus and the sphere"};
  app.require_subcommand(1);

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "W_p distance between two measures; writes the optimal coupling");
  dist_cmd->add_option("a", dist.a, "first measure (JSON)")->required();
  dist_cmd->add_option("b", dist.b, "second measure (JSON)")->required();
  dist_cmd->add_option("--p", dist.p, "exponent p >= 1")->capture_default_str();
  dist_cmd->add_option("--out", dist.out, "coupling JSON path (empty to skip)")->capture_default_str();

  PotentialArgs pot;
  auto* pot_cmd = app.add_subcommand("potential", "sample the potential of a measure on a grid (CSV)");
  pot_cmd->add_option("measure", pot.measure, "measure (JSON)")->required();
  pot_cmd->add_option("--grid", pot.grid, "nodes per axis (even)")->capture_default_str();
  pot_cmd->add_option("--p", pot.p, "exponent p >= 1")->capture_default_str();
  pot_cmd->add_option("--out", pot.out, "output CSV (default stdout)");

  FourierArgs four;
  auto* four_cmd = app.add_subcommand("fourier", "Fourier coefficients of the cost |x|^p on the circle");
  four_cmd->add_option("--p", four.p, "exponent p >= 1")->capture_default_str();
  four_cmd->add_option("--jmax", four.jmax, "largest |j|")->capture_default_str();
  four_cmd->add_flag("--closed-form", four.closed, "exact values (p = 1 or 2) instead of quadrature");
  four_cmd->add_option("--threshold", four.threshold, "zero threshold")->capture_default_str();
  four_cmd->add_option("--format", four.format, "csv or json (default from --out, else json)")
      ->check(CLI::IsMember({"csv", "json"}));
  four_cmd->add_option("--out", four.out, "output path (default stdout)");

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "recover weights at candidate sites from a potential grid");
  rec_cmd->add_option("potential", rec.potential, "potential grid (CSV)")->required();
  rec_cmd->add_option("--sites", rec.sites, "candidate sites: JSON array of points or a measure");
  rec_cmd->add_option("--p", rec.p, "exponent, if the CSV does not record it");
  rec_cmd->add_flag("--marginals", rec.marginals, "recover the one-dimensional marginals (p = 2, torus)");
  rec_cmd->add_flag("--numeric", rec.numeric, "numeric limits only");
  rec_cmd->add_option("--out", rec.out, "output JSON (default stdout)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "run verification suites");
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  ver_cmd->add_option("--suite", ver.suite, "suite name")->check(CLI::IsMember(suites))->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed, "base seed")->required();
  ver_cmd->add_option("--trials", ver.trials, "trials per suite")->check(CLI::PositiveNumber)->capture_default_str();
  ver_cmd->add_option("--manifold", ver.manifold, "restrict to torus or sphere")
      ->check(CLI::IsMember({"torus", "sphere"}));
  ver_cmd->add_option("--n", ver.n, "dimension for --manifold");
  ver_cmd->add_option("--p", ver.p, "restrict to one exponent");
  ver_cmd->add_option("--tol", ver.tolerances, "tolerance override key=value (repeatable)");
  ver_cmd->add_option("--out", ver.out, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*dist_cmd) return run_dist(dist);
    if (*pot_cmd) return run_potential(pot);
    if (*four_cmd) return run_fourier(four);
    if (*rec_cmd) return run_recover(rec);
    if (*ver_cmd) return run_verify(ver);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return kUsage;
}
