// Command-line front end: simulate observation tables, analyze them, sweep
// the misalignment angle to produce key-rate curves, and fuzz the analyzer
// against explicit attack instances.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 inconsistent table,
// 3 soundness violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rfimdi/rfimdi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitViolation = 3;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Output sink: file if a path was given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw rfimdi::TableError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_eb_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw rfimdi::TableError("bad --eb-list entry: " + item);
    }
    if (pos != item.size()) {
      throw rfimdi::TableError("bad --eb-list entry: " + item);
    }
    if (v < 0.0 || v > 0.5) {
      throw rfimdi::TableError("--eb-list entries must lie in [0, 0.5]");
    }
    values.push_back(v);
  }
  if (values.empty()) throw rfimdi::TableError("--eb-list is empty");
  return values;
}

struct AnalysisFlags {
  std::string mode = "rfi";
  std::string engine = "exact";
  int grid_coeff = 301;
  double r_step = 1e-3;
  double angle_step_deg = 1.0;

  rfimdi::AnalysisSettings to_settings() const {
    rfimdi::AnalysisSettings s;
    s.mode = mode == "nonrfi" ? rfimdi::Mode::nonrfi : rfimdi::Mode::rfi;
    s.engine =
        engine == "grid" ? rfimdi::Engine::grid : rfimdi::Engine::exact;
    s.grid_coeff = grid_coeff;
    s.r_step = r_step;
    s.angle_step_deg = angle_step_deg;
    return s;
  }
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags* flags) {
  cmd->add_option("--mode", flags->mode, "Analysis mode")
      ->check(CLI::IsMember({"rfi", "nonrfi"}));
  cmd->add_option("--engine", flags->engine,
                  "Bound engine: exact region geometry or grid scan")
      ->check(CLI::IsMember({"exact", "grid"}));
  cmd->add_option("--grid-coeff", flags->grid_coeff,
                  "Coefficient grid resolution per axis (grid engine)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--r-step", flags->r_step, "Modulus sweep step")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--angle-step-deg", flags->angle_step_deg,
                  "Angle grid step in degrees (grid engine)")
      ->check(CLI::PositiveNumber);
}

void write_csv(std::ostream& out, const std::vector<rfimdi::SweepRow>& rows) {
  out << "theta,e_b,omega,e_bit,e_phase,rate,"
         "L22,U22,L23,U23,L32,U32,L33,U33\n";
  for (const auto& row : rows) {
    out << format_double(row.theta) << ',' << format_double(row.e_b) << ','
        << format_double(row.omega) << ',' << format_double(row.e_bit) << ','
        << format_double(row.e_phase) << ',' << format_double(row.rate);
    for (int q = 0; q < 4; ++q) {
      out << ',' << format_double(row.intervals[q].lower) << ','
          << format_double(row.intervals[q].upper);
    }
    out << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{
      "Certified key rates for measurement-device-independent key "
      "distribution with uncharacterized sources"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Write an observation table for the rotation noise model");
  double sim_eb = 0.0;
  double sim_theta = 0.0;
  double sim_theta_deg = 0.0;
  std::uint64_t sim_shots = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  simulate->add_option("--eb", sim_eb, "Bit error rate in [0, 0.5]")
      ->required()
      ->check(CLI::Range(0.0, 0.5));
  auto* theta_opt =
      simulate->add_option("--theta", sim_theta, "Rotation angle (radians)");
  auto* theta_deg_opt = simulate->add_option("--theta-deg", sim_theta_deg,
                                             "Rotation angle (degrees)");
  theta_opt->excludes(theta_deg_opt);
  simulate
      ->add_option("--shots", sim_shots,
                   "Per-cell sample count; omit for the exact table")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Sampling seed");
  simulate->add_option("--out", sim_out, "Output path (default stdout)");

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Analyze an observation table file");
  std::string an_table;
  std::string an_out;
  AnalysisFlags an_flags;
  analyze_cmd->add_option("--table", an_table, "Table file (JSON)")
      ->required();
  add_analysis_flags(analyze_cmd, &an_flags);
  analyze_cmd->add_option("--out", an_out, "Output path (default stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Key-rate curve over rotation angles, CSV output");
  std::string sw_eb_list;
  int sw_theta_steps = 33;
  bool sw_full_circle = false;
  int sw_jobs = static_cast<int>(std::thread::hardware_concurrency());
  std::string sw_out;
  AnalysisFlags sw_flags;
  sweep_cmd
      ->add_option("--eb-list", sw_eb_list,
                   "Comma-separated bit error rates")
      ->required();
  sweep_cmd
      ->add_option("--theta-steps", sw_theta_steps,
                   "Number of angle grid points over [0, pi]")
      ->check(CLI::Range(2, 1000000));
  sweep_cmd->add_flag("--full-circle", sw_full_circle,
                      "Mirror the computed half circle onto (pi, 2 pi)");
  sweep_cmd->add_option("--jobs", sw_jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_analysis_flags(sweep_cmd, &sw_flags);
  sweep_cmd->add_option("--out", sw_out, "Output path (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "Fuzz the analyzer against explicit attack instances");
  int vf_instances = 0;
  std::uint64_t vf_seed = 0;
  verify_cmd->add_option("--instances", vf_instances, "Number of instances")
      ->required();
  verify_cmd->add_option("--seed", vf_seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Normalize: help exits 0, every other parse problem exits 1.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const double theta = theta_deg_opt->count() > 0
                               ? sim_theta_deg * rfimdi::kPi / 180.0
                               : sim_theta;
      if (theta_opt->count() == 0 && theta_deg_opt->count() == 0) {
        std::cerr << "simulate: one of --theta or --theta-deg is required\n"
                  << simulate->help();
        return kExitUsage;
      }
      const rfimdi::ChannelParams params{sim_eb, theta};
      rfimdi::require_valid(params);
      Sink sink(sim_out);
      if (sim_shots > 0) {
        const rfimdi::SampledTable sampled =
            rfimdi::sampled_table(params, sim_shots, sim_seed);
        rfimdi::write_sampled(sink.stream(), sampled);
      } else {
        rfimdi::write_table(sink.stream(), rfimdi::ideal_table(params));
      }
      return kExitOk;
    }

    if (analyze_cmd->parsed()) {
      const rfimdi::ProbabilityTable table = rfimdi::read_table_file(an_table);
      const rfimdi::AnalysisSettings settings = an_flags.to_settings();
      try {
        const rfimdi::KeyRateReport report = rfimdi::analyze(table, settings);
        Sink sink(an_out);
        rfimdi::write_report(sink.stream(), report);
        return kExitOk;
      } catch (const rfimdi::InconsistentError& e) {
        std::cerr << "observations inconsistent with two-dimensional source "
                     "assumption: "
                  << e.what() << "\n";
        return kExitInconsistent;
      }
    }

    if (sweep_cmd->parsed()) {
      rfimdi::SweepSpec spec;
      spec.eb_list = parse_eb_list(sw_eb_list);
      spec.theta_steps = sw_theta_steps;
      spec.full_circle = sw_full_circle;
      spec.jobs = std::max(1, sw_jobs);
      spec.settings = sw_flags.to_settings();
      const std::vector<rfimdi::SweepRow> rows = rfimdi::run_sweep(spec);
      Sink sink(sw_out);
      write_csv(sink.stream(), rows);
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      if (vf_instances < 1) {
        std::cerr << "verify: --instances must be at least 1\n";
        return kExitUsage;
      }
      const rfimdi::FuzzSummary summary =
          rfimdi::run_fuzz(vf_seed, vf_instances);
      std::cout << "pass: " << summary.passed
                << "\ndegenerate: " << summary.degenerate
                << "\nviolations: " << summary.violations << "\n";
      for (const auto& m : summary.violation_messages) {
        std::cerr << "violation: " << m << "\n";
      }
      return summary.violations > 0 ? kExitViolation : kExitOk;
    }
  } catch (const rfimdi::InconsistentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const rfimdi::TableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
