// sdsi: run and sweep the A_m experiment family.
#include <CLI11.hpp>

#include "sdsi/sdsi.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

enum Exit { kOk = 0, kUsage = 1, kAdmission = 2, kInvariant = 3 };

struct Common {
  std::string m = "1";
  std::string eta = "2^-6";
  int radix = 2;
  std::string mode = "stable-elide";
  int precision = 32;
  std::uint64_t seed = 1;
  bool strict = false;
  std::size_t max_iters = 1'000'000;
  std::string out;
  bool verify = false;
  std::string trace_out;
};

void add_common(CLI::App* app, Common& c, bool with_mode) {
  app->add_option("--m", c.m, "Off-diagonal parameter m (A_m has 1 - 2^-m)");
  app->add_option("--eta", c.eta, "Accuracy bound, e.g. 2^-8, 1/256, 0.001");
  app->add_option("--radix", c.radix, "Digit radix")->check(CLI::Range(2, 1 << 15));
  if (with_mode)
    app->add_option("--mode", c.mode, "stable-elide | delay-elide | no-elide | lsd")
        ->check(CLI::IsMember({"stable-elide", "delay-elide", "no-elide", "lsd"}));
  app->add_option("--precision", c.precision, "Total bits for lsd mode")->check(CLI::Range(2, 62));
  app->add_option("--seed", c.seed, "Seed for b (std::mt19937_64)");
  app->add_flag("--strict-single-trigger", c.strict, "Never re-arm the stability trigger");
  app->add_option("--max-iters", c.max_iters, "Iteration cap");
  app->add_option("--out", c.out, "CSV output path (default stdout)");
  app->add_flag("--verify", c.verify, "Audit every stability claim against exact arithmetic");
}

sdsi::ExperimentConfig to_config(const Common& c) {
  sdsi::ExperimentConfig cfg;
  cfg.m = c.m;
  cfg.eta = sdsi::parse_rational(c.eta);
  cfg.radix = c.radix;
  cfg.mode = sdsi::parse_run_mode(c.mode);
  cfg.precision = c.precision;
  cfg.seed = c.seed;
  cfg.strict_single_trigger = c.strict;
  cfg.max_iterations = c.max_iters;
  cfg.verify = c.verify;
  cfg.validate();
  return cfg;
}

std::ostream& open_out(const std::string& path, std::unique_ptr<std::ofstream>& file) {
  if (path.empty() || path == "-") return std::cout;
  file = std::make_unique<std::ofstream>(path);
  if (!*file) throw std::runtime_error("cannot open " + path);
  return *file;
}

int report(const sdsi::ExperimentResult& r, const std::string& label) {
  if (!r.error.empty()) {
    std::cerr << label << ": internal invariant violation: " << r.error << '\n';
    return kInvariant;
  }
  if (r.report && !r.report->ok()) {
    std::cerr << label << ": " << r.report->violations.size() << " verification violation(s)";
    for (char c : {'a', 'b', 'c', 'd', 'e'})
      if (auto n = r.report->count(c)) std::cerr << " (" << c << ": " << n << ")";
    std::cerr << '\n';
    return kInvariant;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-digit Jacobi solver with runtime digit-stability inference"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one experiment and emit CSV");
  add_common(run, run_opts, true);
  run->add_option("--trace", run_opts.trace_out, "Also write the line-oriented solver trace");

  Common sweep_opts;
  std::string axis = "eta";
  std::vector<std::string> values;
  std::vector<std::string> modes{"stable-elide", "delay-elide"};
  unsigned threads = 0;
  auto* sw = app.add_subcommand("sweep", "Sweep eta or m over several modes");
  add_common(sw, sweep_opts, false);
  sw->add_option("--axis", axis, "eta | m")->check(CLI::IsMember({"eta", "m"}));
  sw->add_option("--values", values, "Axis values (comma separated)")->delimiter(',')->required();
  sw->add_option("--modes", modes, "Modes (comma separated)")->delimiter(',');
  sw->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      sdsi::ExperimentConfig cfg;
      try {
        cfg = to_config(run_opts);
      } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
      }
      auto res = sdsi::run_experiment(cfg);
      std::unique_ptr<std::ofstream> file;
      std::ostream& os = open_out(run_opts.out, file);
      sdsi::write_csv_header(os);
      sdsi::write_csv(os, res.rows);
      if (!run_opts.trace_out.empty() && res.trace) {
        std::ofstream tf(run_opts.trace_out);
        sdsi::write_trace(tf, *res.trace, res.report ? &*res.report : nullptr);
      }
      const auto& s = res.summary;
      std::cerr << sdsi::to_string(cfg.mode) << ": " << s.stop << " after " << s.iterations
                << " iterations; digits computed " << s.digits_computed << ", elided "
                << s.digits_elided << '\n';
      return report(res, sdsi::to_string(cfg.mode));
    }

    sdsi::ExperimentConfig base;
    std::vector<sdsi::RunMode> run_modes;
    try {
      base = to_config(sweep_opts);
      for (const auto& m : modes) run_modes.push_back(sdsi::parse_run_mode(m));
      if (run_modes.empty()) throw std::invalid_argument("empty mode list");
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kUsage;
    }
    auto points = sdsi::sweep(base, axis == "eta" ? sdsi::SweepAxis::eta : sdsi::SweepAxis::m,
                              values, run_modes, threads);
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = open_out(sweep_opts.out, file);
    sdsi::write_csv_header(os);
    int rc = kOk;
    for (const auto& p : points) {
      sdsi::write_csv(os, p.result.rows);
      std::string label = axis + "=" + p.value + " " + sdsi::to_string(p.mode);
      if (p.result.error.empty() || p.result.rows.empty()) {
        std::cerr << label << ": " << p.result.summary.stop << ", iterations "
                  << p.result.summary.iterations << ", elided " << p.result.summary.digits_elided
                  << '\n';
      }
      rc = std::max(rc, report(p.result, label));
    }
    auto ratios = sdsi::elision_ratios(points);
    if (!ratios.per_value.empty()) {
      std::cerr << "stable/delay elided: mean per-value ratio " << ratios.mean_ratio
                << ", ratio of totals " << ratios.ratio_of_totals << ", total gap "
                << ratios.total_gap << " digits\n";
    }
    return rc;
  } catch (const sdsi::AdmissionError& e) {
    std::cerr << "admission failure: " << e.what() << '\n';
    return kAdmission;
  } catch (const sdsi::SelectionOverflow& e) {
    std::cerr << "internal invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}
