#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "magiclab/io.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/simulator.hpp"
#include "magiclab/synthesis.hpp"

namespace magiclab::cli {

namespace {

using io::Json;

struct Globals {
  int threads = 0;
  bool quiet = false;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MAGICLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

class Log {
 public:
  Log(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}
  void operator()(const std::string& msg) const {
    if (!quiet_) err_ << "magiclab: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  bool quiet_;
};

struct MeasureArgs {
  std::string channel;
  std::string state;
  std::string measure = "mana";
  bool force = false;
  double tol = 1e-7;
  std::string dump;
  std::string certificate;
};

void write_certificate(const std::string& path, const Operator& op) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << io::to_json(op).dump(1) << '\n';
}

int cmd_measure(const MeasureArgs& a, std::ostream& out, const Log& log) {
  ThaumaOptions opts;
  opts.force = a.force;
  opts.solver.tol = a.tol;
  opts.solver.dump_path = a.dump;
  MeasureReport report;
  Json input;
  int d = 3;
  int n = 1;
  if (!a.channel.empty()) {
    const Channel c = io::parse_channel(a.channel);
    input = {{"channel", a.channel}};
    d = c.d();
    n = c.n_in() + c.n_out();
    log("measuring " + a.measure + " of channel " + a.channel);
    if (a.measure == "mana") {
      report = mana_channel(c);
    } else if (a.measure == "thauma") {
      report = max_thauma_channel(c, opts);
    } else if (a.measure == "thauma-dual") {
      report = max_thauma_channel_dual(c, opts);
    } else {
      // robustness of a channel is evaluated on its normalized Choi state
      const Operator phi(c.d(), n, c.choi() / static_cast<double>(c.dim_in()));
      input["choi_state"] = true;
      if (a.measure == "rob-wplus") {
        report = robustness_wplus(phi, opts.solver);
      } else if (a.measure == "rob-stab") {
        report = robustness_stab(phi, opts.solver);
      } else {
        throw ValidationError("unknown measure '" + a.measure + "'");
      }
    }
  } else {
    const Operator rho = io::parse_state(a.state);
    input = {{"state", a.state}};
    d = rho.d();
    n = rho.n();
    log("measuring " + a.measure + " of state " + a.state);
    if (a.measure == "mana") {
      report.measure = "mana";
      report.log2_value = mana_state(rho);
      report.exp_value = std::exp2(report.log2_value);
    } else if (a.measure == "thauma") {
      report = max_thauma_state(rho, opts);
    } else if (a.measure == "rob-wplus") {
      report = robustness_wplus(rho, opts.solver);
    } else if (a.measure == "rob-stab") {
      report = robustness_stab(rho, opts.solver);
    } else {
      throw ValidationError("unknown measure '" + a.measure + "' for states");
    }
  }
  if (!a.certificate.empty()) {
    if (report.certificate.size() == 0) throw ValidationError("measure " + a.measure + " has no certificate");
    write_certificate(a.certificate, Operator(d, static_cast<int>(std::lround(std::log(report.certificate.rows()) /
                                                                              std::log(d))),
                                              report.certificate));
  }
  Json j = io::to_json(report);
  j["input"] = input;
  emit(out, j);
  return kSuccess;
}

int cmd_check(const std::string& expr, double tol, std::ostream& out, const Log& log) {
  const Channel c = io::parse_channel(expr);
  log("checking CPWP membership of " + expr);
  const auto r = is_cpwp(c, tol);
  Json j = io::to_json(r);
  j["input"] = {{"channel", expr}};
  j["tol"] = tol;
  emit(out, j);
  return r.cpwp ? kSuccess : kNegative;
}

struct SimulateArgs {
  std::string circuit;
  double eps = 0.05;
  double delta = 0.1;
  std::uint64_t seed = 0;
  int shards = 16;
  std::uint64_t samples = 0;
  bool exact = false;
};

int cmd_simulate(const SimulateArgs& a, int threads, std::ostream& out, const Log& log) {
  const std::string base = std::filesystem::path(a.circuit).parent_path().string();
  const Circuit c = io::circuit_from_json(io::load_json(a.circuit), base);
  const auto prof = negativity_profile(c);
  SamplerOptions opts;
  opts.shards = a.shards;
  opts.threads = threads;
  opts.samples = a.samples;
  log("sampling " + std::to_string(a.samples ? a.samples : sample_count(a.eps, a.delta, prof.bound)) +
      " trajectories");
  const auto r = estimate(c, a.eps, a.delta, a.seed, opts);
  Json j = io::to_json(r);
  j["negativity"] = {{"forward", io::round_sig(prof.forward)},
                     {"state", io::round_sig(prof.state)},
                     {"effect", io::round_sig(prof.effect)}};
  if (a.exact) {
    j["exact"] = {{"density_matrix", io::round_sig(exact_born(c, ExactBackend::DensityMatrix))},
                  {"wigner", io::round_sig(exact_born(c, ExactBackend::Wigner))}};
  }
  emit(out, j);
  return kSuccess;
}

struct SweepArgs {
  std::string family;
  std::string grid;
  std::string out = "-";
  double target_noise = 0.01;
};

int cmd_sweep(const SweepArgs& a, int threads, std::ostream& out, const Log& log) {
  const auto grid = parse_grid(a.grid);
  log("sweeping " + a.family + " over " + std::to_string(grid.size()) + " points");
  const auto table = run_sweep(a.family, grid, threads, a.target_noise);
  if (a.out == "-") {
    write_csv(table, out);
  } else {
    std::ofstream f(a.out);
    if (!f) throw ValidationError("cannot write " + a.out);
    write_csv(table, f);
  }
  return kSuccess;
}

struct SynthArgs {
  std::string target;
  std::string resource;
  std::optional<double> eps;
  bool force = false;
  double tol = 1e-7;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, const Log& log) {
  const Channel target = io::parse_channel(a.target);
  const Channel resource = io::parse_channel(a.resource);
  ThaumaOptions opts;
  opts.force = a.force;
  opts.solver.tol = a.tol;
  log("bounding " + a.target + " from " + a.resource);
  const auto b = exact_bound(target, resource, opts, a.target, a.resource);
  Json j = io::to_json(b);
  if (a.eps) j["approx"] = io::to_json(approx_bound(target, resource, *a.eps, opts));
  emit(out, j);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"magiclab: magic measures, CPWP checks and phase-space simulation for qudits", "magiclab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (default: MAGICLAB_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", g.quiet, "Suppress log messages");

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Magic measure of a channel or state");
  auto* mc = measure->add_option("--channel", ma.channel, "Channel expression");
  auto* ms = measure->add_option("--state", ma.state, "State name or operator JSON file");
  mc->excludes(ms);
  measure->add_option("--measure", ma.measure, "mana | thauma | thauma-dual | rob-wplus | rob-stab")
      ->check(CLI::IsMember({"mana", "thauma", "thauma-dual", "rob-wplus", "rob-stab"}));
  measure->add_flag("--force", ma.force, "Bypass the max-thauma size gate");
  measure->add_option("--tol", ma.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  measure->add_option("--dump-sdp", ma.dump, "Write the conic program as JSON");
  measure->add_option("--certificate", ma.certificate, "Write the optimal certificate as operator JSON");

  std::string check_expr;
  double check_tol = 1e-9;
  auto* check = app.add_subcommand("check-cpwp", "Exit 0 if the channel is CPWP, 3 otherwise");
  check->add_option("--channel", check_expr, "Channel expression")->required();
  check->add_option("--tol", check_tol, "Tolerance on negative table entries")->check(CLI::NonNegativeNumber);

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo Born-probability estimate");
  simulate->add_option("circuit", sa.circuit, "Circuit JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--eps", sa.eps, "Additive error");
  simulate->add_option("--delta", sa.delta, "Failure probability");
  simulate->add_option("--seed", sa.seed, "RNG seed");
  simulate->add_option("--shards", sa.shards, "Independent RNG streams")->check(CLI::PositiveNumber);
  simulate->add_option("--samples", sa.samples, "Override the Hoeffding sample count");
  simulate->add_flag("--exact", sa.exact, "Also report both exact backends");

  SweepArgs wa;
  auto* sweep = app.add_subcommand("sweep", "Regenerate figure data as CSV");
  sweep->add_option("--family", wa.family, "dep-t | dep3-ccx | utheta | noisy-ccx")
      ->required()
      ->check(CLI::IsMember({"dep-t", "dep3-ccx", "utheta", "noisy-ccx"}));
  sweep->add_option("--grid", wa.grid, "a:b:step (numbers may end in 'pi')")->required();
  sweep->add_option("--out", wa.out, "Output CSV path, '-' for stdout");
  sweep->add_option("--target-noise", wa.target_noise, "Depolarizing strength on the CCX target (noisy-ccx)");

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth-bound", "Lower bound on resource uses for synthesis");
  synth->add_option("--target", ya.target, "Target channel expression")->required();
  synth->add_option("--resource", ya.resource, "Resource channel expression")->required();
  synth->add_option("--eps", ya.eps, "Diamond-norm tolerance for the approximate bound")
      ->check(CLI::NonNegativeNumber);
  synth->add_flag("--force", ya.force, "Bypass the max-thauma size gate");
  synth->add_option("--tol", ya.tol, "Solver tolerance")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (measure->parsed() && ma.channel.empty() && ma.state.empty()) {
    err << "magiclab: measure needs --channel or --state\n";
    return kUsageError;
  }
  const int threads = resolve_threads(g.threads);
  const Log log(err, g.quiet);
  try {
    if (measure->parsed()) return cmd_measure(ma, out, log);
    if (check->parsed()) return cmd_check(check_expr, check_tol, out, log);
    if (simulate->parsed()) return cmd_simulate(sa, threads, out, log);
    if (sweep->parsed()) return cmd_sweep(wa, threads, out, log);
    if (synth->parsed()) return cmd_synth(ya, out, log);
  } catch (const SolverError& e) {
    err << "magiclab: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const ValidationError& e) {
    err << "magiclab: " << e.what() << '\n';
    return kUsageError;
  } catch (const DimensionError& e) {
    err << "magiclab: " << e.what() << '\n';
    return kUsageError;
  } catch (const SizeLimitError& e) {
    err << "magiclab: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "magiclab: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace magiclab::cli
