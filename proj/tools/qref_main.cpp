// Command-line front end: single-point evaluation, intensity sweeps across
// photon statistics, EM-thermal-bath threshold scans, and the numeric
// equivalence suite. CSV/text output only; every command is deterministic
// given its flags (plus --seed where one applies).
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qref/driving.hpp"
#include "qref/lindblad.hpp"
#include "qref/model.hpp"
#include "qref/oracle.hpp"
#include "qref/photon_stats.hpp"
#include "qref/thermal_bath.hpp"

namespace {

constexpr const char* kVersion = QREF_VERSION;

// Output-path failures get their own exit code (4), distinct from physics
// domain errors (3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const char* route_name(qref::FluxRoute route) {
  switch (route) {
    case qref::FluxRoute::ClosedForm:
      return "closed_form";
    case qref::FluxRoute::Laplace:
      return "laplace";
    case qref::FluxRoute::Series:
      return "series";
    case qref::FluxRoute::QuadratureThermal:
      return "quadrature_thermal";
  }
  return "unknown";
}

qref::PhotonDistribution::Kind parse_stat(const std::string& name) {
  using Kind = qref::PhotonDistribution::Kind;
  if (name == "coherent") return Kind::Coherent;
  if (name == "thermal") return Kind::Thermal;
  if (name == "sub") return Kind::SubPoisson;
  if (name == "super") return Kind::SuperPoisson;
  if (name == "custom") return Kind::Custom;
  throw CLI::ValidationError("--stat", "unknown statistic '" + name + "'");
}

// "start:stop:points[:log]" -> strictly increasing grid.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4)
    throw CLI::ValidationError("--grid", "expected start:stop:points[:log], got '" + text + "'");
  const bool log_spacing = parts.size() == 4;
  if (log_spacing && parts[3] != "log" && parts[3] != "lin")
    throw CLI::ValidationError("--grid", "spacing must be 'log' or 'lin', got '" + parts[3] + "'");

  double start = 0.0, stop = 0.0;
  long points = 0;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    points = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--grid", "non-numeric field in '" + text + "'");
  }
  if (points < 1) throw CLI::ValidationError("--grid", "points must be >= 1");
  if (points == 1) {
    if (start != stop)
      throw CLI::ValidationError("--grid", "a one-point grid needs start == stop");
    return {start};
  }
  if (!(start < stop)) throw CLI::ValidationError("--grid", "need start < stop");
  const bool use_log = log_spacing && parts[3] == "log";
  if (use_log && !(start > 0.0))
    throw CLI::ValidationError("--grid", "log spacing needs start > 0");

  std::vector<double> grid(points);
  for (long i = 0; i < points; ++i) {
    const double t = double(i) / double(points - 1);
    grid[i] = use_log ? start * std::pow(stop / start, t) : start + (stop - start) * t;
  }
  grid.back() = stop;  // kill accumulated rounding on the endpoint
  return grid;
}

std::vector<double> read_probability_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open probability table '" + path + "'");
  std::vector<double> pn;
  double value = 0.0;
  while (in >> value) pn.push_back(value);
  if (!in.eof())
    throw std::invalid_argument("probability table '" + path + "' has a non-numeric entry");
  return pn;
}

qref::PhotonDistribution make_distribution(qref::PhotonDistribution::Kind kind, double lambda) {
  using Kind = qref::PhotonDistribution::Kind;
  switch (kind) {
    case Kind::Coherent:
      return qref::PhotonDistribution::coherent(lambda);
    case Kind::Thermal:
      return qref::PhotonDistribution::thermal(lambda);
    case Kind::SubPoisson:
      return qref::PhotonDistribution::sub_poisson(lambda);
    case Kind::SuperPoisson:
      return qref::PhotonDistribution::super_poisson(lambda);
    default:
      throw std::logic_error("make_distribution: custom tables load from a file");
  }
}

// value is a target mean photon number unless by_lambda is set.
qref::PhotonDistribution distribution_at(qref::PhotonDistribution::Kind kind, double value,
                                         bool by_lambda) {
  const double lambda =
      (by_lambda || value == 0.0) ? value : qref::lambda_for_mean(kind, value);
  return make_distribution(kind, lambda);
}

double safe_g2(const qref::PhotonDistribution& d) {
  return d.mean() > 0.0 ? d.gk(2) : std::numeric_limits<double>::quiet_NaN();
}

struct SharedOptions {
  qref::RefrigeratorParams::Init init;

  qref::RefrigeratorParams params() const { return qref::RefrigeratorParams{init}; }

  std::string echo() const {
    std::string s;
    s += " omega_c=" + fmt(init.omega_c) + " omega_h=" + fmt(init.omega_h);
    s += " gamma=" + fmt(init.gamma) + " kappa=" + fmt(init.kappa);
    s += " delta=" + fmt(init.delta) + " xi0=" + fmt(init.xi0);
    s += " nbar_c=" + fmt(init.nbar_c) + " nbar_h=" + fmt(init.nbar_h);
    return s;
  }
};

// One CSV row shared by `point --format csv` and `sweep`.
std::string flux_csv_row(const qref::RefrigeratorParams& p, const std::string& stat_name,
                         const qref::PhotonDistribution& dist, double lambda_or_nbar) {
  const qref::FluxResult fr = qref::flux(p, dist);
  const qref::HeatCurrents h = qref::heat_currents_from_flux(p, fr.j_bar);
  const qref::CopResult cr = qref::cop_from_average_flux(p, fr.j_bar);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::string row = stat_name;
  row += "," + fmt(lambda_or_nbar);
  row += "," + fmt(dist.mean());
  row += "," + fmt(p.xi0 * p.xi0 * dist.mean());
  row += "," + fmt(fr.j_bar);
  row += "," + fmt(h.q_c);
  row += "," + fmt(h.q_h);
  row += "," + fmt(h.q_e);
  row += "," + fmt(cr.value ? *cr.value : nan);
  row += "," + fmt(safe_g2(dist));
  row += std::string(",") + route_name(fr.route);
  row += "," + fmt(fr.cross_check ? *fr.cross_check : nan);
  return row;
}

constexpr const char* kFluxCsvHeader =
    "statistic,lambda_or_nbar,mean_photons,intensity_x,j_bar,q_c,q_h,q_e,cop,g2,route,"
    "crosscheck";

// Writes through to --out when given, stdout otherwise; checks for I/O
// failure on close so a full disk surfaces as exit code 4.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) : path_(path) {
    if (!path_.empty()) {
      file_.open(path_);
      if (!file_) throw IoError("cannot open output file '" + path_ + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed" + (path_.empty() ? "" : " on '" + path_ + "'"));
  }

 private:
  std::string path_;
  std::ofstream file_;
};

// Deterministic parallel map: worker w handles indices w, w+stride, ...
void fill_rows_parallel(std::vector<std::string>& rows,
                        const std::function<std::string(std::size_t)>& make_row) {
  const std::size_t total = rows.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     std::min<std::size_t>(total, 16)));
  std::vector<std::future<void>> tasks;
  tasks.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&rows, &make_row, w, workers, total] {
      for (std::size_t i = w; i < total; i += workers) rows[i] = make_row(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

int run_point(const SharedOptions& shared, const std::string& stat, double mean, double lambda,
              bool lambda_given, const std::string& custom_pn, const std::string& format,
              const std::string& out_path) {
  const qref::PhotonDistribution::Kind kind = parse_stat(stat);
  const bool is_custom = kind == qref::PhotonDistribution::Kind::Custom;
  if (is_custom && custom_pn.empty())
    throw CLI::ValidationError("--custom-pn", "custom statistic needs a probability table");
  if (!is_custom && !custom_pn.empty())
    throw CLI::ValidationError("--custom-pn", "only meaningful with --stat custom");

  const qref::PhotonDistribution dist =
      is_custom ? qref::PhotonDistribution::custom(read_probability_table(custom_pn))
                : distribution_at(kind, lambda_given ? lambda : mean, lambda_given);
  const double lambda_or_nbar =
      is_custom ? std::numeric_limits<double>::quiet_NaN() : dist.parameter();

  const qref::RefrigeratorParams p = shared.params();
  OutputSink sink(out_path);
  std::ostream& os = sink.stream();

  if (format == "csv") {
    os << "# qref " << kVersion << " point stat=" << stat << shared.echo() << "\n";
    os << kFluxCsvHeader << "\n";
    os << flux_csv_row(p, stat, dist, lambda_or_nbar) << "\n";
    sink.finish();
    return 0;
  }

  const qref::FluxResult fr = qref::flux(p, dist);
  const qref::HeatCurrents h = qref::heat_currents_from_flux(p, fr.j_bar);
  const qref::CopResult cr = qref::cop_from_average_flux(p, fr.j_bar);
  os << "# qref " << kVersion << "\n";
  os << "statistic=" << stat << "\n";
  os << "lambda_or_nbar=" << fmt(lambda_or_nbar) << "\n";
  os << "mean_photons=" << fmt(dist.mean()) << "\n";
  os << "intensity_x=" << fmt(p.xi0 * p.xi0 * dist.mean()) << "\n";
  os << "j_bar=" << fmt(fr.j_bar) << "\n";
  os << "q_c=" << fmt(h.q_c) << "\n";
  os << "q_h=" << fmt(h.q_h) << "\n";
  os << "q_e=" << fmt(h.q_e) << "\n";
  os << "status=" << qref::to_string(cr.status) << "\n";
  os << "cop=" << fmt(cr.value ? *cr.value : std::numeric_limits<double>::quiet_NaN()) << "\n";
  os << "g2=" << fmt(safe_g2(dist)) << "\n";
  os << "route=" << route_name(fr.route) << "\n";
  os << "crosscheck="
     << fmt(fr.cross_check ? *fr.cross_check : std::numeric_limits<double>::quiet_NaN()) << "\n";
  os << "flagged=" << (fr.flagged ? 1 : 0) << "\n";
  sink.finish();
  return 0;
}

int run_sweep(const SharedOptions& shared, const std::vector<std::string>& stats,
              const std::string& grid_text, bool by_lambda, const std::string& out_path) {
  std::vector<qref::PhotonDistribution::Kind> kinds;
  for (const std::string& s : stats) {
    const auto kind = parse_stat(s);
    if (kind == qref::PhotonDistribution::Kind::Custom)
      throw CLI::ValidationError("--stat", "a custom table has no parameter to sweep");
    kinds.push_back(kind);
  }
  const std::vector<double> grid = parse_grid(grid_text);
  const qref::RefrigeratorParams p = shared.params();

  std::vector<std::string> rows(kinds.size() * grid.size());
  fill_rows_parallel(rows, [&](std::size_t i) {
    const std::size_t si = i / grid.size();
    const double value = grid[i % grid.size()];
    const qref::PhotonDistribution dist = distribution_at(kinds[si], value, by_lambda);
    return flux_csv_row(p, stats[si], dist, dist.parameter());
  });

  OutputSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# qref " << kVersion << " sweep stats=";
  for (std::size_t i = 0; i < stats.size(); ++i) os << (i ? "," : "") << stats[i];
  os << " grid=" << grid_text << " by_lambda=" << (by_lambda ? 1 : 0) << shared.echo() << "\n";
  os << kFluxCsvHeader << "\n";
  for (const std::string& row : rows) os << row << "\n";
  sink.finish();
  return 0;
}

int run_thermal_bath(const SharedOptions& shared, const std::string& grid_text, double nbar_e,
                     bool nbar_e_given, const std::string& out_path) {
  std::vector<double> grid;
  if (!grid_text.empty() && nbar_e_given)
    throw CLI::ValidationError("--grid", "give either --grid or --nbar-e, not both");
  if (!grid_text.empty())
    grid = parse_grid(grid_text);
  else if (nbar_e_given)
    grid = {nbar_e};
  else
    throw CLI::ValidationError("--grid", "need an EM-bath occupation grid (--grid or --nbar-e)");

  const qref::RefrigeratorParams base = shared.params();
  const std::optional<double> threshold = qref::cooling_threshold(base.nbar_c, base.nbar_h);
  const double threshold_col =
      threshold ? *threshold : std::numeric_limits<double>::quiet_NaN();

  std::vector<std::string> rows(grid.size());
  fill_rows_parallel(rows, [&](std::size_t i) {
    const qref::ThermalFieldParams tp{base, grid[i]};
    const qref::HeatCurrents h = qref::thermal_field_currents(tp);
    const qref::CopResult cr = qref::cop_from_average_flux(base, h.j);
    std::string row = fmt(grid[i]);
    row += "," + fmt(h.j);
    row += "," + fmt(h.q_c);
    row += "," + fmt(h.q_h);
    row += "," + fmt(h.q_e);
    row += std::string(",") + qref::to_string(cr.status);
    row += "," + fmt(threshold_col);
    return row;
  });

  OutputSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# qref " << kVersion << " thermal-bath grid="
     << (grid_text.empty() ? fmt(nbar_e) : grid_text) << shared.echo() << "\n";
  os << "nbar_e,j_prime,q_c,q_h,q_e,status,threshold\n";
  for (const std::string& row : rows) os << row << "\n";
  sink.finish();
  return 0;
}

int run_check(std::uint64_t seed, const std::string& preset, const std::string& out_path) {
  qref::oracle::GridSpec grid;
  if (preset == "default")
    grid = qref::oracle::GridSpec::defaults();
  else if (preset == "none")
    grid = qref::oracle::GridSpec::none();
  else if (preset == "quick") {
    grid = qref::oracle::GridSpec::defaults();
    grid.flux_grid_points = 40;
    grid.population_grid_points = 40;
    grid.cop_grid_points = 10;
    grid.route_grid_points = 12;
    grid.thermal_grid_points = 25;
    grid.temperature_triples = 25;
    grid.mc_samples = 100000;
  } else {
    throw CLI::ValidationError("--grid", "preset must be default, quick or none");
  }

  const auto reports = qref::oracle::run_equivalence_suite(grid, seed);
  OutputSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# qref " << kVersion << " check seed=" << seed << " grid=" << preset << "\n";
  for (const auto& r : reports) os << qref::oracle::to_line(r) << "\n";
  const bool ok = qref::oracle::all_passed(reports);
  os << (ok ? "ALL PASS" : "FAILURES PRESENT") << " (" << reports.size() << " checks)\n";
  sink.finish();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state heat currents, cooling power and COP of a "
               "light-driven three-level absorption refrigerator"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Plain key=value file; flags override it");
  app.require_subcommand(1);

  SharedOptions shared;
  app.add_option("--omega-c", shared.init.omega_c, "Cold transition frequency");
  app.add_option("--omega-h", shared.init.omega_h, "Hot transition frequency");
  app.add_option("--gamma", shared.init.gamma, "Bath coupling rate");
  app.add_option("--kappa", shared.init.kappa, "Drive-transition spontaneous decay rate");
  app.add_option("--delta", shared.init.delta, "Drive detuning");
  app.add_option("--xi0", shared.init.xi0, "Single-photon coupling strength");
  app.add_option("--nbar-c", shared.init.nbar_c, "Cold-bath occupation");
  app.add_option("--nbar-h", shared.init.nbar_h, "Hot-bath occupation");

  int exit_code = 0;

  // point -----------------------------------------------------------------
  auto* point = app.add_subcommand("point", "Evaluate one operating point");
  point->fallthrough();
  std::string point_stat = "coherent";
  double point_mean = 10.0, point_lambda = 0.0;
  std::string point_custom, point_format = "text", point_out;
  point->add_option("--stat", point_stat, "coherent|thermal|sub|super|custom")
      ->check(CLI::IsMember({"coherent", "thermal", "sub", "super", "custom"}));
  auto* mean_opt = point->add_option("--mean", point_mean, "Target mean photon number");
  auto* lambda_opt = point->add_option("--lambda", point_lambda, "Native shape parameter");
  mean_opt->excludes(lambda_opt);
  lambda_opt->excludes(mean_opt);
  point->add_option("--custom-pn", point_custom,
                    "Whitespace-separated probabilities, index = photon number");
  point->add_option("--format", point_format, "text|csv")
      ->check(CLI::IsMember({"text", "csv"}));
  point->add_option("--out", point_out, "Output path (stdout when omitted)");
  point->callback([&] {
    exit_code = run_point(shared, point_stat, point_mean, point_lambda,
                          lambda_opt->count() > 0, point_custom, point_format, point_out);
  });

  // sweep -----------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "CSV sweep over an intensity grid");
  sweep->fallthrough();
  std::vector<std::string> sweep_stats = {"coherent", "thermal", "sub", "super"};
  std::string sweep_grid, sweep_out;
  bool sweep_by_lambda = false;
  sweep->add_option("--stat", sweep_stats, "Statistics to sweep (repeat or comma-separate)")
      ->delimiter(',');
  sweep->add_option("--grid", sweep_grid, "start:stop:points[:log] grid of mean photon numbers")
      ->required();
  sweep->add_flag("--by-lambda", sweep_by_lambda,
                  "Interpret the grid as the native shape parameter, not the mean");
  sweep->add_option("--out", sweep_out, "Output path (stdout when omitted)");
  sweep->callback(
      [&] { exit_code = run_sweep(shared, sweep_stats, sweep_grid, sweep_by_lambda, sweep_out); });

  // thermal-bath ----------------------------------------------------------
  auto* bath = app.add_subcommand(
      "thermal-bath", "Scan the EM-thermal-bath regime over its occupation");
  bath->fallthrough();
  std::string bath_grid, bath_out;
  double bath_nbar_e = 0.0;
  auto* bath_nbar_opt =
      bath->add_option("--nbar-e", bath_nbar_e, "Single EM-bath occupation (instead of --grid)");
  bath->add_option("--grid", bath_grid, "start:stop:points[:log] grid of EM-bath occupations");
  bath->add_option("--out", bath_out, "Output path (stdout when omitted)");
  bath->callback([&] {
    exit_code =
        run_thermal_bath(shared, bath_grid, bath_nbar_e, bath_nbar_opt->count() > 0, bath_out);
  });

  // check -----------------------------------------------------------------
  auto* check = app.add_subcommand("check", "Run the numeric equivalence suite");
  check->fallthrough();
  std::uint64_t check_seed = 42;
  std::string check_preset = "default", check_out;
  check->add_option("--seed", check_seed, "Seed for the randomized grids");
  check->add_option("--grid", check_preset, "Grid preset: default|quick|none")
      ->check(CLI::IsMember({"default", "quick", "none"}));
  check->add_option("--out", check_out, "Output path (stdout when omitted)");
  check->callback([&] { exit_code = run_check(check_seed, check_preset, check_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
