#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "covert/probability.hpp"
#include "covert/solver_gd.hpp"
#include "covert/solver_n2.hpp"

namespace covert::cli {

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnknownCommand = 64,
  kInvalidGrid = 65,
  kSolverMismatch = 66,
  kInvalidConfig = 67,
  kRuntimeFailure = 70,
  kIoFailure = 74,
};

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

// GD initial phases draw from a seed distinct from the channel's.
constexpr std::uint64_t kInitSeedMix = 0x9e3779b97f4a7c15ULL;

struct Options {
  ChannelParams params;
  std::size_t trials = 100000;
  std::string solver = "gd";
  std::string sweep;
  std::string measure;
  std::string out;
  double quad_tol = 1e-6;
  std::size_t workers = 1;
  std::size_t restarts = 4;
  std::size_t max_iterations = 100000;
  std::uint64_t instance = 0;
};

struct Grid {
  std::string param;
  std::vector<double> values;
};

const std::vector<std::string>& sweepable() {
  static const std::vector<std::string> names = {"n-elements", "sigma-as",    "sigma-sw",    "sigma-sb", "sigma-aw",
                                                 "sigma-ab",   "noise-var-w", "noise-var-b", "tx-power"};
  return names;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw CliError(kInvalidGrid, "invalid grid: " + what + " '" + text + "' is not a finite number");
  }
  return v;
}

Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.size() != 4 && parts.size() != 5) {
    throw CliError(kInvalidGrid, "invalid grid: expected <param>:<start>:<stop>:<points>[:log], got '" + text + "'");
  }
  Grid g;
  g.param = parts[0];
  const auto& names = sweepable();
  if (std::find(names.begin(), names.end(), g.param) == names.end()) {
    throw CliError(kInvalidGrid, "invalid grid: unknown sweep parameter '" + g.param + "'");
  }
  const double start = parse_number(parts[1], "start");
  const double stop = parse_number(parts[2], "stop");
  const double points_d = parse_number(parts[3], "points");
  const bool log = parts.size() == 5;
  if (log && parts[4] != "log") throw CliError(kInvalidGrid, "invalid grid: unknown spacing '" + parts[4] + "'");
  if (points_d < 1 || points_d != std::floor(points_d) || points_d > 1e7) {
    throw CliError(kInvalidGrid, "invalid grid: points must be a positive integer");
  }
  const auto points = static_cast<std::size_t>(points_d);
  if (points == 1 ? start != stop : !(start < stop)) {
    throw CliError(kInvalidGrid, "invalid grid: start must be below stop (equal only for a single point)");
  }
  if (log && !(start > 0.0)) throw CliError(kInvalidGrid, "invalid grid: log spacing needs a positive start");

  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    double v = log ? start * std::pow(stop / start, t) : start + (stop - start) * t;
    if (i + 1 == points) v = stop;
    if (g.param == "n-elements") v = std::round(v);
    g.values.push_back(v);
  }
  for (std::size_t i = 1; i < g.values.size(); ++i) {
    if (!(g.values[i] > g.values[i - 1])) {
      throw CliError(kInvalidGrid, "invalid grid: values are not strictly increasing (" + fmt17(g.values[i - 1]) +
                                       ", " + fmt17(g.values[i]) + ")");
    }
  }
  if (g.param == "n-elements" && g.values.front() < 1) {
    throw CliError(kInvalidGrid, "invalid grid: n-elements must be at least 1");
  }
  return g;
}

void apply(ChannelParams& p, const std::string& name, double v) {
  if (name == "n-elements") p.n_elements = static_cast<std::size_t>(v);
  else if (name == "sigma-as") p.sigma_as = v;
  else if (name == "sigma-sw") p.sigma_sw = v;
  else if (name == "sigma-sb") p.sigma_sb = v;
  else if (name == "sigma-aw") p.sigma_aw = v;
  else if (name == "sigma-ab") p.sigma_ab = v;
  else if (name == "noise-var-w") p.noise_var_w = v;
  else if (name == "noise-var-b") p.noise_var_b = v;
  else if (name == "tx-power") p.tx_power = v;
}

void validate(const ChannelParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kInvalidConfig, std::string("invalid configuration: ") + e.what());
  }
}

// Every row starts with the full channel parameter tuple.
const char* kParamHeader =
    "n_elements,sigma_as,sigma_sw,sigma_sb,sigma_aw,sigma_ab,noise_var_w,noise_var_b,tx_power,seed";

std::string param_cells(const ChannelParams& p) {
  std::string s = std::to_string(p.n_elements);
  for (double v : {p.sigma_as, p.sigma_sw, p.sigma_sb, p.sigma_aw, p.sigma_ab, p.noise_var_w, p.noise_var_b,
                   p.tx_power}) {
    s += ',' + fmt17(v);
  }
  return s + ',' + std::to_string(p.seed);
}

struct Output {
  std::string csv;
  std::string summary;
};

GdConfig gd_config(const Options& o) {
  GdConfig cfg;
  cfg.restarts = o.restarts;
  cfg.max_iterations = o.max_iterations;
  cfg.init_policy = UniformRandomInit{o.params.seed ^ kInitSeedMix};
  return cfg;
}

void require_solver_fits(const Options& o) {
  if (o.solver == "closed-form-n2" && o.params.n_elements != 2) {
    throw CliError(kSolverMismatch, "solver closed-form-n2 requires --n-elements 2 (got " +
                                        std::to_string(o.params.n_elements) + ")");
  }
}

Output run_solve(const Options& o) {
  require_solver_fits(o);
  const ChannelRealization real = sample_realization(o.params, o.instance);
  const LinkInstance link = LinkInstance::from(real, o.params);
  const BobContext bob = link.bob_context();
  const FeasibilityBounds bounds = feasibility_bounds(link.willie, link.h_aw);

  SolveResult res;
  if (o.solver == "closed-form-n2") res = solve_n2(link.willie, link.h_aw, bob).result;
  else if (o.solver == "constructive") res = solve_constructive_covert(link.willie, link.h_aw, gd_config(o), bob);
  else res = solve_gd(link.willie, link.h_aw, gd_config(o), bob);

  const double kl = kl_divergence_willie(res.phases, real, o.params);
  const double bound = std::clamp(detection_error_bound(kl), 0.0, 1.0);
  const PhaseVector programmed = res.phases.irs_program();
  std::string program;
  for (double v : programmed.values()) program += (program.empty() ? "" : ";") + fmt17(v);

  Output out;
  out.csv = std::string(kParamHeader) +
            ",instance,solver,feasible,min_mag,max_mag,direct_mag,status,classification,iterations,residual_power,"
            "willie_snr,bob_snr,kl_divergence,alpha_beta_bound,irs_program\n";
  out.csv += param_cells(o.params) + ',' + std::to_string(o.instance) + ',' + o.solver + ',' +
             (bounds.feasible ? "1" : "0") + ',' + fmt17(bounds.min_mag) + ',' + fmt17(bounds.max_mag) + ',' +
             fmt17(bounds.direct_mag) + ',' + std::string(to_string(res.status)) + ',' +
             std::string(to_string(res.classification)) + ',' + std::to_string(res.iterations) + ',' +
             fmt17(res.residual_power) + ',' + fmt17(res.willie_snr) + ',' + fmt17(res.bob_snr) + ',' + fmt17(kl) +
             ',' + fmt17(bound) + ',' + program + '\n';

  std::ostringstream s;
  s << "instance: N=" << o.params.n_elements << " seed=" << o.params.seed << " stream=" << o.instance << '\n';
  s << "feasible: " << (bounds.feasible ? "yes" : "no") << " (|h_aw| = " << fmt("%.6g", bounds.direct_mag)
    << ", reachable [" << fmt("%.6g", bounds.min_mag) << ", " << fmt("%.6g", bounds.max_mag) << "])\n";
  s << "solver: " << o.solver << " status=" << to_string(res.status) << " iterations=" << res.iterations << '\n';
  s << "residual willie power: " << fmt("%.3e", res.residual_power) << '\n';
  s << "willie snr: " << fmt("%.3e", res.willie_snr) << '\n';
  s << "bob snr: " << fmt("%.6g", res.bob_snr) << '\n';
  s << "kl divergence: " << fmt("%.3e", kl) << '\n';
  s << "alpha+beta >= " << fmt("%.3f", bound) << '\n';
  out.summary = s.str();
  return out;
}

Output run_trace(const Options& o) {
  if (o.solver != "gd") throw CliError(kSolverMismatch, "trace follows gradient descent; use --solver gd");
  const ChannelRealization real = sample_realization(o.params, o.instance);
  const LinkInstance link = LinkInstance::from(real, o.params);
  GdConfig cfg = gd_config(o);
  std::string rows;
  const std::string prefix = param_cells(o.params) + ',' + std::to_string(o.instance) + ',';
  cfg.trace = [&](const GdIterate& it) {
    rows += prefix + std::to_string(it.attempt) + ',' + std::to_string(it.iteration) + ',' + fmt17(it.objective) +
            ',' + fmt17(it.gradient_norm) + ',' + fmt17(it.step) + '\n';
  };
  const SolveResult res = solve_gd(link.willie, link.h_aw, cfg, link.bob_context());
  Output out;
  out.csv = std::string(kParamHeader) + ",instance,attempt,iteration,objective,gradient_norm,step\n" + rows;
  out.summary = "trace: " + std::to_string(res.iterations) + " iterations, status " +
                std::string(to_string(res.status)) + ", residual " + fmt("%.3e", res.residual_power) + '\n';
  return out;
}

enum class Measure { ProbN2, ProbMc, BoundsStats };

Measure measure_named(const std::string& name) {
  if (name == "prob-n2") return Measure::ProbN2;
  if (name == "prob-mc") return Measure::ProbMc;
  if (name == "bounds-stats") return Measure::BoundsStats;
  throw CliError(kInvalidConfig, "invalid configuration: --measure must be prob-n2, prob-mc or bounds-stats");
}

std::string measure_header(Measure m) {
  switch (m) {
    case Measure::ProbN2: return ",sigma_x,sigma_y,quad_tol,probability,error_estimate,tolerance_reached";
    case Measure::ProbMc: return ",trials,probability,std_error";
    case Measure::BoundsStats: return ",trials,mean_min,std_min,mean_max,std_max,mean_direct,std_direct";
  }
  return {};
}

struct PointResult {
  std::string cells;
  double headline = 0.0;  // probability or mean_max
};

PointResult measure_point(Measure m, const Options& o, const ChannelParams& p) {
  validate(p);
  PointResult r;
  const MonteCarloOptions mc{o.workers, {}};
  switch (m) {
    case Measure::ProbN2: {
      if (p.n_elements != 2) {
        throw CliError(kSolverMismatch, "prob-n2 is the two-element analytic estimate; it requires n-elements = 2");
      }
      const double sx = p.sigma_as * p.sigma_sw;
      const auto est = existence_probability_n2_analytic(sx, sx, p.sigma_aw, o.quad_tol);
      r.cells = ',' + fmt17(sx) + ',' + fmt17(p.sigma_aw) + ',' + fmt17(o.quad_tol) + ',' + fmt17(est.value) + ',' +
                fmt17(est.error_estimate) + ',' + (est.tolerance_reached ? "1" : "0");
      r.headline = est.value;
      break;
    }
    case Measure::ProbMc: {
      const auto est = existence_probability_mc(p, o.trials, mc);
      r.cells = ',' + std::to_string(o.trials) + ',' + fmt17(est.value) + ',' + fmt17(est.std_error);
      r.headline = est.value;
      break;
    }
    case Measure::BoundsStats: {
      if (o.trials < 2) throw CliError(kInvalidConfig, "invalid configuration: bounds-stats needs --trials >= 2");
      const auto st = bounds_statistics(p, o.trials, mc);
      r.cells = ',' + std::to_string(o.trials);
      for (double v : {st.mean_min, st.std_min, st.mean_max, st.std_max, st.mean_direct, st.std_direct}) {
        r.cells += ',' + fmt17(v);
      }
      r.headline = st.mean_max;
      break;
    }
  }
  return r;
}

Output run_measure(Measure m, const Options& o, bool sweep_required) {
  if (sweep_required && o.sweep.empty()) throw CliError(kInvalidGrid, "invalid grid: sweep requires --sweep");
  std::optional<Grid> grid;
  if (!o.sweep.empty()) grid = parse_grid(o.sweep);
  if (m == Measure::ProbN2 && !(o.quad_tol > 0.0)) {
    throw CliError(kInvalidConfig, "invalid configuration: --quad-tol must be positive");
  }
  if (m != Measure::ProbN2 && o.trials == 0) throw CliError(kInvalidConfig, "invalid configuration: --trials must be >= 1");

  std::vector<ChannelParams> points;
  if (grid) {
    for (double v : grid->values) {
      ChannelParams p = o.params;
      apply(p, grid->param, v);
      points.push_back(p);
    }
  } else {
    points.push_back(o.params);
  }

  Output out;
  out.csv = std::string(kParamHeader) + measure_header(m) + '\n';
  std::size_t best = 0;
  std::vector<double> headline;
  for (const auto& p : points) {
    const PointResult r = measure_point(m, o, p);
    out.csv += param_cells(p) + r.cells + '\n';
    headline.push_back(r.headline);
    if (r.headline > headline[best]) best = headline.size() - 1;
  }

  std::ostringstream s;
  const char* label = m == Measure::BoundsStats ? "mean_max" : "probability";
  s << points.size() << " point(s)";
  if (grid) s << " over " << grid->param;
  s << "; largest " << label << ' ' << fmt("%.6f", headline[best]);
  if (grid) s << " at " << grid->param << " = " << fmt("%.6g", grid->values[best]);
  s << '\n';
  out.summary = s.str();
  return out;
}

void emit(const Output& result, const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) {
    out << result.csv;
    err << result.summary;
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  file << result.csv;
  file.close();
  if (!file) throw CliError(kIoFailure, "cannot write " + o.out);
  out << result.summary;
}

const char* kCsvHelp = R"(CSV columns (every row starts with the channel parameters
  n_elements,sigma_as,sigma_sw,sigma_sb,sigma_aw,sigma_ab,noise_var_w,noise_var_b,tx_power,seed):
  solve         instance,solver,feasible,min_mag,max_mag,direct_mag,status,classification,iterations,
                residual_power,willie_snr,bob_snr,kl_divergence,alpha_beta_bound,irs_program
  trace         instance,attempt,iteration,objective,gradient_norm,step
  prob-n2       sigma_x,sigma_y,quad_tol,probability,error_estimate,tolerance_reached
  prob-mc       trials,probability,std_error
  bounds-stats  trials,mean_min,std_min,mean_max,std_max,mean_direct,std_direct
  sweep         as for the chosen --measure, one row per grid point
Numbers use 17 significant digits. irs_program lists the programmed phases (negated
solver phases) separated by ';'. Without --out the CSV goes to stdout and the summary
to stderr.
Exit codes: 64 unknown command, 65 invalid grid, 66 solver/N mismatch,
  67 invalid configuration, 70 runtime failure, 74 output not writable.)";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Perfectly covert IRS phase configuration: solvers and Monte-Carlo experiments", "covert-irs"};
  app.footer(kCsvHelp);
  app.set_config("--config", "", "Read options from an INI/TOML file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  auto* params = "Channel";
  auto positive = CLI::PositiveNumber;
  app.add_option("--n-elements", o.params.n_elements, "IRS elements N")->group(params)->check(CLI::Range(1, 1 << 20));
  app.add_option("--sigma-as", o.params.sigma_as, "Alice-IRS scale")->group(params)->check(positive);
  app.add_option("--sigma-sw", o.params.sigma_sw, "IRS-Willie scale")->group(params)->check(positive);
  app.add_option("--sigma-sb", o.params.sigma_sb, "IRS-Bob scale")->group(params)->check(positive);
  app.add_option("--sigma-aw", o.params.sigma_aw, "Alice-Willie direct scale")->group(params)->check(positive);
  app.add_option("--sigma-ab", o.params.sigma_ab, "Alice-Bob direct scale")->group(params)->check(positive);
  app.add_option("--noise-var-w", o.params.noise_var_w, "Willie noise variance")->group(params)->check(positive);
  app.add_option("--noise-var-b", o.params.noise_var_b, "Bob noise variance")->group(params)->check(positive);
  app.add_option("--tx-power", o.params.tx_power, "Alice transmit power")->group(params)->check(positive);
  app.add_option("--seed", o.params.seed, "RNG seed")->group(params);

  app.add_option("--trials", o.trials, "Monte-Carlo trials")->capture_default_str();
  app.add_option("--solver", o.solver, "Covert solver")
      ->check(CLI::IsMember({"closed-form-n2", "gd", "constructive"}))
      ->capture_default_str();
  app.add_option("--sweep", o.sweep, "Grid <param>:<start>:<stop>:<points>[:log]");
  app.add_option("--measure", o.measure, "Quantity swept by 'sweep': prob-n2 | prob-mc | bounds-stats");
  app.add_option("--out", o.out, "CSV output path");
  app.add_option("--quad-tol", o.quad_tol, "Analytic quadrature tolerance")->capture_default_str();
  app.add_option("--workers", o.workers, "Monte-Carlo worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--restarts", o.restarts, "Gradient-descent random restarts")->capture_default_str();
  app.add_option("--max-iterations", o.max_iterations, "Gradient-descent iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--instance", o.instance, "Channel stream drawn by solve/trace");

  auto* solve = app.add_subcommand("solve", "Solve one sampled instance and print a covertness certificate");
  auto* prob_n2 = app.add_subcommand("prob-n2", "Analytic N=2 existence probability (optionally swept)");
  auto* prob_mc = app.add_subcommand("prob-mc", "Monte-Carlo existence probability (optionally swept)");
  auto* bounds = app.add_subcommand("bounds-stats", "Mean/std of the feasibility bounds (optionally swept)");
  auto* sweep = app.add_subcommand("sweep", "Sweep --measure over the --sweep grid");
  auto* trace = app.add_subcommand("trace", "Per-iteration gradient-descent objective on one instance");
  for (auto* sub : {solve, prob_n2, prob_mc, bounds, sweep, trace}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty()) {
      const auto extras = app.remaining();
      err << "unknown or missing command";
      if (!extras.empty()) err << " '" << extras.front() << "'";
      err << " (expected solve, prob-n2, prob-mc, bounds-stats, sweep or trace)\n";
      return kUnknownCommand;
    }
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    validate(o.params);
    const bool sweeps = !prob_n2->parsed() && !prob_mc->parsed() && !bounds->parsed() && !sweep->parsed();
    if (sweeps && !o.sweep.empty()) throw CliError(kInvalidConfig, "invalid configuration: --sweep does not apply here");
    Output result;
    if (solve->parsed()) result = run_solve(o);
    else if (trace->parsed()) result = run_trace(o);
    else if (prob_n2->parsed()) result = run_measure(Measure::ProbN2, o, false);
    else if (prob_mc->parsed()) result = run_measure(Measure::ProbMc, o, false);
    else if (bounds->parsed()) result = run_measure(Measure::BoundsStats, o, false);
    else result = run_measure(measure_named(o.measure), o, true);
    emit(result, o, out, err);
  } catch (const CliError& e) {
    err << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kOk;
}

}  // namespace covert::cli
