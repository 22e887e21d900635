#include "cfsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cfsim/battery.hpp"
#include "cfsim/errors.hpp"
#include "cfsim/experiments.hpp"
#include "cfsim/metrics.hpp"
#include "cfsim/scenario.hpp"
#include "cfsim/trajectory.hpp"
#include "cfsim/world.hpp"

namespace cfsim::cli {

namespace {

namespace fs = std::filesystem;

// Input the user pointed us at is unusable: exit 2.
class InputError : public Error {
public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(fmt::format("{}: cannot open file", path));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
  }
  return f;
}

void write_trajectories(const fs::path& dir, const std::string& prefix,
                        const std::vector<Trajectory>& trajectories) {
  fs::create_directories(dir);
  for (const auto& t : trajectories) {
    auto f = open_output(dir / fmt::format("{}{}.csv", prefix, t.droneId));
    write_trajectory(t, f);
  }
}

std::string summary_line(const Trajectory& t) {
  const auto s = summarize(t);
  const auto& last = t.rows.back();
  return fmt::format(
      "id={} rows={} peak_speed={} peak_yaw_rate={} final_x={} final_y={} final_z={} "
      "final_yaw={} final_charge={} time_to_zero_charge={}",
      t.droneId, t.rows.size(), format_fixed6(s.peakSpeed), format_fixed6(s.peakYawRate),
      format_fixed6(last.position.x()), format_fixed6(last.position.y()),
      format_fixed6(last.position.z()), format_fixed6(last.yaw), format_fixed6(last.charge),
      s.timeToZeroCharge ? format_fixed6(*s.timeToZeroCharge) : "none");
}

// Six significant digits; an exact zero keeps the fixed six-decimal form.
std::string format_metric(double v) { return v == 0.0 ? "0.000000" : fmt::format("{:.6g}", v); }

struct RunArgs {
  std::string scenario;
  std::optional<std::int64_t> ticks;
  std::string out = ".";
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Scenario scenario = load_scenario(read_file(a.scenario));
  const auto ticks = a.ticks.value_or(scenario.duration);
  const auto result = run(create_world(scenario), ticks);
  write_trajectories(a.out, "", result.trajectories);
  for (const auto& t : result.trajectories) {
    out << summary_line(t) << '\n';
  }
  return kOk;
}

struct ExperimentArgs {
  std::string name;
  experiments::Options options;
  std::string outDir = ".";
  bool emitScenario = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  if (!experiments::is_known(a.name)) {
    std::string valid;
    for (auto n : experiments::names()) {
      valid += valid.empty() ? "" : ", ";
      valid += n;
    }
    err << fmt::format("unknown experiment '{}'; valid names: {}\n", a.name, valid);
    return kUsage;
  }
  std::vector<experiments::Run> runs;
  try {
    runs = experiments::build(a.name, a.options);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (a.emitScenario) {
    if (runs.size() != 1) {
      err << "--emit-scenario needs a single scenario; select one with --speed or "
             "--initial-charge\n";
      return kUsage;
    }
    out << render_scenario(runs.front().scenario);
    return kOk;
  }
  const fs::path dir(a.outDir);
  for (const auto& r : runs) {
    write_trajectories(dir, r.label + "_", r.trajectories);
    for (auto p : r.plots) {
      auto f = open_output(dir / fmt::format("{}.{}.dat", r.label, projection_name(p)));
      export_plot_columns(r.trajectories, p, f);
    }
    for (const auto& line : r.report) {
      out << line << '\n';
    }
  }
  return kOk;
}

struct MetricsArgs {
  std::string metric;
  std::string fileA;
  std::string fileB;
  std::string column;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.metric != "mse") {
    err << fmt::format("unknown metric '{}'; supported: mse\n", a.metric);
    return kUsage;
  }
  const auto tableA = CsvTable::parse(read_file(a.fileA));
  const auto tableB = CsvTable::parse(read_file(a.fileB));
  if (tableA.row_count() != tableB.row_count()) {
    throw InputError(fmt::format("row counts differ: {} has {}, {} has {}", a.fileA,
                                 tableA.row_count(), a.fileB, tableB.row_count()));
  }
  // "position" sums the per-axis errors of x, y and z.
  std::vector<std::string> columns = {a.column};
  if (a.column == "position") {
    columns = {"x", "y", "z"};
  }
  double total = 0.0;
  for (const auto& c : columns) {
    for (const auto* t : {&tableA, &tableB}) {
      if (!t->has_column(c)) {
        throw InputError(fmt::format("{}: no column '{}'", t == &tableA ? a.fileA : a.fileB, c));
      }
    }
    total += mse(tableA.numeric_column(c), tableB.numeric_column(c));
  }
  out << "mse=" << format_metric(total) << '\n';
  return kOk;
}

struct FitArgs {
  std::string samples;
  std::optional<double> tMax;
};

int cmd_fit_battery(const FitArgs& a, std::ostream& out) {
  const auto table = CsvTable::parse(read_file(a.samples));
  for (const char* c : {"time_s", "charge"}) {
    if (!table.has_column(c)) {
      throw InputError(fmt::format("{}: missing column '{}'", a.samples, c));
    }
  }
  const auto times = table.numeric_column("time_s");
  const auto charges = table.numeric_column("charge");
  std::vector<ChargeSample> samples;
  for (std::size_t i = 0; i < times.size(); ++i) {
    samples.push_back({times[i], charges[i]});
  }
  const auto model = fit_discharge_polynomial(samples, a.tMax);
  std::vector<double> fitted;
  for (const auto& s : samples) {
    fitted.push_back(model.evaluate(s.time));
  }
  const auto& c = model.coefficients();
  out << fmt::format("c0={:.17g}\nc1={:.17g}\nc2={:.17g}\nc3={:.17g}\n", c[0], c[1], c[2], c[3]);
  out << fmt::format("t_max={}\ncutoff={}\nmse={}\n", format_fixed6(model.tMax()),
                     format_fixed6(model.cutoffCharge()), format_metric(mse(charges, fitted)));
  return kOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic Crazyflie swarm simulator", "cfsim"};
  app.require_subcommand(1);

  RunArgs runArgs;
  auto* run = app.add_subcommand("run", "Run a scenario file, writing one CSV per drone");
  run->add_option("scenario", runArgs.scenario, "Scenario file")->required();
  run->add_option("--ticks", runArgs.ticks, "Override the scenario duration (ticks)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--out", runArgs.out, "Output directory for <id>.csv files");

  ExperimentArgs expArgs;
  auto* exp = app.add_subcommand("experiment", "Reproduce a built-in experiment");
  exp->add_option("name", expArgs.name,
                  "line2d | line3d | altitude-steps | yaw-steps | position-legs | yaw-legs | "
                  "battery | camera-calibration")
      ->required();
  exp->add_option("--speed", expArgs.options.speed,
                  "Commanded speed: m/s, or deg/s for yaw-steps (default: the 3-speed set)");
  exp->add_option("--initial-charge", expArgs.options.initialCharge,
                  "Battery experiment start charge (default: 0.25 0.5 0.75 1.0)");
  exp->add_option("--out-dir", expArgs.outDir, "Directory for CSV and plot files");
  exp->add_flag("--truncate-settle", expArgs.options.truncateSettle,
                "Advance legs after 1 s instead of 5 s of settling");
  exp->add_flag("--emit-scenario", expArgs.emitScenario,
                "Print the scenario file instead of running");
  exp->add_option("--jobs", expArgs.options.jobs, "Worker threads")->check(CLI::PositiveNumber);

  MetricsArgs metArgs;
  auto* met = app.add_subcommand(
      "metrics",
      "Compare two trajectory CSVs. --column position sums the x, y and z errors");
  met->add_option("metric", metArgs.metric, "mse")->required();
  met->add_option("fileA", metArgs.fileA, "Observed CSV")->required();
  met->add_option("fileB", metArgs.fileB, "Estimated CSV")->required();
  met->add_option("--column", metArgs.column, "Column name, or 'position'")->required();

  FitArgs fitArgs;
  auto* fit = app.add_subcommand("fit-battery", "Fit a cubic discharge curve to time_s,charge");
  fit->add_option("samples", fitArgs.samples, "Samples CSV")->required();
  fit->add_option("--tmax", fitArgs.tMax, "Maximum flight time (default: last sample)");

  std::vector<const char*> argv{"cfsim"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*run) {
      return cmd_run(runArgs, out);
    }
    if (*exp) {
      return cmd_experiment(expArgs, out, err);
    }
    if (*met) {
      return cmd_metrics(metArgs, out, err);
    }
    return cmd_fit_battery(fitArgs, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kScenario;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kScenario;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kScenario;
  } catch (const FitError& e) {
    err << "error: " << e.what() << '\n';
    return kScenario;
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << '\n';
    return kScenario;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace cfsim::cli
