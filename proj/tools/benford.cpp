// benford: command-line front end for the library.
//
//   benford run --config exp.json [--seed S] [--out DIR] [--format json|csv]
//   benford reproduce fig1|fig1a|fig2
//   benford twostep orbit|basin|cycle|shadow|fraction ...
//
// Exit status: 0 pass or complete, 2 conformance fail, 1 error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "benford/experiment.hpp"

namespace {

using benford::TwoStepParams;
using json = nlohmann::ordered_json;

constexpr int kExitFail = 2;
constexpr int kExitError = 1;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "json";
};

struct ParamArgs {
  std::string a1 = "1", a2 = "1", b1 = "2", b2 = "2";
  bool extended = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--a1", a1, "coefficient of x_{n-1}^b1")->capture_default_str();
    cmd->add_option("--a2", a2, "coefficient of x_{n-2}^b2")->capture_default_str();
    cmd->add_option("--b1", b1, "exponent of x_{n-1}")->capture_default_str();
    cmd->add_option("--b2", b2, "exponent of x_{n-2}")->capture_default_str();
    cmd->add_flag("--extended", extended, "allow exponents in (0, 1] (orbit and basin only)");
  }

  TwoStepParams params() const {
    return TwoStepParams::parse(a1, a2, b1, b2, extended);
  }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

double num(long double v) { return static_cast<double>(v); }

int print_json(const json& j) {
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benford's law for dynamical systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "RNG seed (overrides the config)");
  app.add_option("--out", g.out, "output directory (overrides the config)");
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}));

  // run
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run an experiment config and write its artifacts");
  run->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);

  // reproduce
  std::string figure_name;
  CLI::App* repro = app.add_subcommand("reproduce", "regenerate a figure or table");
  repro->add_option("figure", figure_name, "fig1, fig1a or fig2")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig1a", "fig2"}));

  // twostep
  CLI::App* ts = app.add_subcommand("twostep", "x_n = a1 x_{n-1}^b1 + a2 x_{n-2}^b2");
  ts->require_subcommand(1);

  ParamArgs orbit_p;
  double ox1 = 1.0, ox2 = 1.0;
  std::size_t on = 10'000;
  CLI::App* orbit = ts->add_subcommand("orbit", "orbit x_3..x_{N+2} and its conformance report");
  orbit_p.add_to(orbit);
  orbit->add_option("--x1", ox1)->capture_default_str();
  orbit->add_option("--x2", ox2)->capture_default_str();
  orbit->add_option("-N", on, "orbit length")->capture_default_str()->check(CLI::PositiveNumber);

  ParamArgs basin_p;
  std::vector<double> ray, point;
  double tol = 1e-12;
  int scan = 0;
  std::size_t max_iter = benford::kDefaultBasinIterations;
  CLI::App* basin = ts->add_subcommand("basin", "classify a start, or find the boundary of A0");
  basin_p.add_to(basin);
  auto* ray_opt = basin->add_option("--ray", ray, "direction u,v: boundary radius along it")
                      ->delimiter(',')
                      ->expected(2);
  auto* point_opt = basin->add_option("--point", point, "x1,x2 to classify")->delimiter(',')->expected(2);
  auto* scan_opt = basin->add_option("--scan", scan, "boundary CSV over this many rays")
                       ->check(CLI::PositiveNumber);
  ray_opt->excludes(point_opt)->excludes(scan_opt);
  point_opt->excludes(scan_opt);
  basin->add_option("--tol", tol, "bracket width")->capture_default_str();
  basin->add_option("--max-iter", max_iter, "iterations before BoundaryUndecided")->capture_default_str();

  ParamArgs cycle_p;
  std::vector<double> cycle_ray{2.0, 1.0};
  CLI::App* cycle = ts->add_subcommand("cycle", "odd/even limits of a boundary orbit");
  cycle_p.add_to(cycle);
  cycle->add_option("--ray", cycle_ray, "direction u,v of the boundary start")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();

  ParamArgs shadow_p;
  std::string shadow_case = "auto";
  double sx1 = 2.0, sx2 = 2.0;
  std::size_t shadow_terms = benford::kDefaultShadowTerms;
  CLI::App* shadow = ts->add_subcommand("shadow", "shadowing constant h of a start in A_infty");
  shadow_p.add_to(shadow);
  shadow->add_option("--case", shadow_case)->check(CLI::IsMember({"auto", "I", "III"}))->capture_default_str();
  shadow->add_option("--x1", sx1)->capture_default_str();
  shadow->add_option("--x2", sx2)->capture_default_str();
  shadow->add_option("--terms", shadow_terms, "maximum series terms")->capture_default_str();

  ParamArgs frac_p;
  std::vector<double> region;
  std::size_t samples = 100, fn = 10'000;
  CLI::App* frac = ts->add_subcommand("fraction", "share of sampled starts whose orbit conforms");
  frac_p.add_to(frac);
  frac->add_option("--region", region, "lo1,hi1,lo2,hi2")->delimiter(',')->expected(4)->required();
  frac->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  frac->add_option("-N", fn, "orbit length")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      benford::ExperimentConfig config = benford::load_config(config_path);
      if (g.seed) config.seed = *g.seed;
      if (g.out) config.out_dir = *g.out;
      if (app.count("--format") > 0) config.format = g.format;
      const benford::RunResult result = benford::run_experiment(config);
      std::cout << benford::write_artifacts(config, result);
      if (!result.note.empty()) std::cerr << "note: " << result.note << "\n";
      return result.report.passed() ? 0 : kExitFail;
    }

    if (repro->parsed()) {
      const std::string format = app.count("--format") > 0 ? g.format : "csv";
      const std::string text = benford::reproduce(benford::parse_figure(figure_name), format);
      std::cout << text;
      if (g.out) write_file(std::filesystem::path(*g.out) / (figure_name + "." + format), text);
      return 0;
    }

    if (orbit->parsed()) {
      const TwoStepParams p = orbit_p.params();
      const auto seq = benford::orbit_log(p, static_cast<long double>(ox1), static_cast<long double>(ox2), on);
      if (g.out) write_file(std::filesystem::path(*g.out) / "orbit.csv", benford::orbit_csv(seq));
      if (seq.size() < benford::Thresholds{}.min_samples) {
        // too short to score; just show the terms
        std::cout << benford::orbit_csv(seq);
        return 0;
      }
      const auto report = benford::conformance_report(seq);
      const std::string text = g.format == "csv"
                                   ? benford::report_csv_header() + "\n" + benford::report_to_csv_row(report) + "\n"
                                   : benford::report_to_json(report) + "\n";
      std::cout << text;
      if (g.out) write_file(std::filesystem::path(*g.out) / (g.format == "csv" ? "report.csv" : "report.json"), text);
      return report.passed() ? 0 : kExitFail;
    }

    if (basin->parsed()) {
      const TwoStepParams p = basin_p.params();
      benford::RayOptions opts;
      opts.tol = tol;
      opts.max_iter = max_iter;
      if (scan > 0) {
        const std::string text = benford::boundary_csv(benford::boundary_scan(p, scan, opts));
        std::cout << text;
        if (g.out) write_file(std::filesystem::path(*g.out) / "boundary.csv", text);
        return 0;
      }
      if (!ray.empty()) {
        const auto b = benford::boundary_on_ray(p, ray[0], ray[1], opts);
        return print_json({{"r", num(b.r)}, {"lo", num(b.lo)}, {"hi", num(b.hi)},
                           {"x1", num(b.x1)}, {"x2", num(b.x2)}});
      }
      if (point.empty()) throw std::invalid_argument("basin needs one of --ray, --point, --scan");
      const auto label = benford::classify_basin(p, static_cast<long double>(point[0]),
                                                 static_cast<long double>(point[1]), max_iter);
      return print_json({{"basin", benford::basin_name(label.label)},
                         {"iterations", label.iterations_used},
                         {"final_log_mag", label.final_log_mag},
                         {"precision_bits", label.precision_bits}});
    }

    if (cycle->parsed()) {
      const TwoStepParams p = cycle_p.params();
      const auto b = benford::boundary_on_ray(p, cycle_ray[0], cycle_ray[1]);
      const auto c = benford::cycle2_limit(p, b.x1, b.x2);
      return print_json({{"start", {num(b.x1), num(b.x2)}},
                         {"p", num(c.p)},
                         {"q", num(c.q)},
                         {"iterations", c.iterations},
                         {"residual", num(c.residual)}});
    }

    if (shadow->parsed()) {
      const TwoStepParams p = shadow_p.params();
      const benford::TwoStepCase kind = benford::classify_case(p);
      std::string which = shadow_case;
      if (which == "auto") which = benford::case_name(kind);
      const long double y1 = std::log10(static_cast<long double>(sx1));
      const long double y2 = std::log10(static_cast<long double>(sx2));
      if (which == "II") {
        const long double r2 = static_cast<long double>(sx2) / std::pow(static_cast<long double>(sx1), p.b1.value);
        const auto r = benford::caseII_ratio_orbit(p, r2, 200);
        return print_json({{"case", "II"}, {"r_bar", num(r.r_bar)}, {"r_last", num(r.values.back())}});
      }
      if (which != benford::case_name(kind)) {
        throw std::invalid_argument("parameters are case " + benford::case_name(kind) + ", not " + which);
      }
      const benford::ShadowH h = which == "I" ? benford::shadow_h_caseI(p, y1, y2, shadow_terms)
                                              : benford::shadow_h_caseIII(p, y1, y2, shadow_terms);
      json out = {{"case", which},
                  {"h", num(h.h)},
                  {"shift", num(h.shift)},
                  {"terms", h.terms},
                  {"tail_bound", num(h.tail_bound)}};
      if (which == "III") {
        json fixed = json::array();
        for (long double r : benford::r0_fixed_points(p)) fixed.push_back(num(r));
        out["r0_fixed_points"] = fixed;
      }
      return print_json(out);
    }

    if (frac->parsed()) {
      const TwoStepParams p = frac_p.params();
      const benford::Region r{region[0], region[1], region[2], region[3]};
      const benford::Rng rng(g.seed.value_or(0));
      const auto f = benford::benford_fraction(p, r, samples, fn, rng);
      return print_json({{"samples", f.samples},
                         {"a0", f.a0},
                         {"a0_pass", f.a0_pass},
                         {"a_infty", f.a_infty},
                         {"a_infty_pass", f.a_infty_pass},
                         {"undecided", f.undecided},
                         {"fraction", f.fraction()},
                         {"fraction_a0", f.fraction_a0()},
                         {"fraction_a_infty", f.fraction_a_infty()}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
