#include "herding/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "herding/config.hpp"
#include "herding/error.hpp"
#include "herding/exact_enum.hpp"
#include "herding/mc_engine.hpp"
#include "herding/verify.hpp"
#include "json.hpp"

namespace herding {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string json_out;
  std::string upsilon_grid;
  std::string rho_grid;
  std::string method;
  std::string scaling;
  std::size_t n = 0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::size_t max_n = EnumOptions::kDefaultMaxN;
  std::string level = "quick";

  CLI::Option* n_opt = nullptr;
  CLI::Option* paths_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, Flags& f, bool monte_carlo) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
  cmd->add_option("--json", f.json_out, "also write a JSON result document");
  auto* ug = cmd->add_option("--upsilon-grid", f.upsilon_grid,
                             "threshold grid: START:STOP:COUNT or comma list");
  auto* rg = cmd->add_option("--rho-grid", f.rho_grid,
                             "tax-rate grid (upsilon = T * rho): START:STOP:COUNT or comma list");
  ug->excludes(rg);
  f.n_opt = cmd->add_option("--n", f.n, "mesh count");
  cmd->add_option("--method", f.method, "log-indicator | log-conditional | price-level");
  cmd->add_option("--scaling", f.scaling, "standard | paper");
  f.workers_opt = cmd->add_option("--workers", f.workers, "worker threads");
  if (monte_carlo) {
    f.paths_opt = cmd->add_option("--paths", f.paths, "Monte Carlo path count");
    f.seed_opt = cmd->add_option("--seed", f.seed, "master seed");
  } else {
    cmd->add_option("--max-n", f.max_n, "enumeration guard on n");
  }
}

RunConfig effective_config(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.upsilon_grid.empty()) {
    cfg.tax.upsilon_grid = parse_grid(f.upsilon_grid);
    cfg.tax.rho_grid.reset();
    cfg.tax.rho.reset();
  }
  if (!f.rho_grid.empty()) {
    cfg.tax.rho_grid = parse_grid(f.rho_grid);
    cfg.tax.upsilon_grid.reset();
    cfg.tax.rho.reset();
  }
  if (f.n_opt && f.n_opt->count()) cfg.run.n = f.n;
  if (f.paths_opt && f.paths_opt->count()) cfg.run.path_count = f.paths;
  if (f.seed_opt && f.seed_opt->count()) cfg.run.master_seed = f.seed;
  if (!f.method.empty()) cfg.run.method = parse_method(f.method);
  if (!f.scaling.empty()) cfg.model = cfg.model.with_scaling(parse_scaling(f.scaling));

  if (f.workers_opt && f.workers_opt->count()) {
    cfg.run.workers = f.workers;
  } else if (const char* env = std::getenv(kWorkersEnv); env && *env) {
    try {
      cfg.run.workers = std::stoi(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string(kWorkersEnv) + " must be an integer");
    }
  }
  if (cfg.run.workers < 1) throw ValidationError("workers must be >= 1");
  if (cfg.run.n == 0) throw ValidationError("mesh count n must be >= 1");
  return cfg;
}

struct Row {
  double upsilon;
  double rho;
  std::uint64_t paths;
  double estimate;
  std::optional<double> std_error;
  std::optional<std::uint64_t> seed;
};

std::string render_csv(const RunConfig& cfg, const std::vector<Row>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.upsilon) << ',' << format_double(r.rho) << ',' << cfg.run.n << ','
       << r.paths << ',' << to_string(cfg.run.method) << ',' << to_string(cfg.model.scaling())
       << ',' << format_double(r.estimate) << ',' << (r.std_error ? format_double(*r.std_error) : "")
       << ',' << (r.seed ? std::to_string(*r.seed) : "") << '\n';
  }
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << payload;
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

void emit(const Flags& f, const std::string& csv, std::ostream& out) {
  if (f.out.empty()) {
    out << csv;
  } else {
    write_file(f.out, csv);
  }
}

nlohmann::json rows_json(const std::vector<Row>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"upsilon", r.upsilon}, {"rho", r.rho}, {"estimate", r.estimate}};
    j["stderr"] = r.std_error ? nlohmann::json(*r.std_error) : nlohmann::json(nullptr);
    arr.push_back(j);
  }
  return arr;
}

int cmd_enumerate(const Flags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = effective_config(f);
  const ThresholdGrid grid = resolve_grid(cfg);
  const EnumOptions opts{cfg.run.workers, f.max_n};
  const ExactSweepTable table = exact_sweep(cfg.model, cfg.run.n, grid.upsilon, cfg.run.method, opts);

  std::vector<Row> rows;
  const std::uint64_t paths = std::uint64_t{1} << cfg.run.n;
  for (std::size_t i = 0; i < grid.upsilon.size(); ++i)
    rows.push_back({grid.upsilon[i], grid.rho[i], paths, table.values[i], std::nullopt, std::nullopt});
  emit(f, render_csv(cfg, rows), out);

  if (!f.json_out.empty()) {
    nlohmann::json doc;
    doc["generated_at"] = utc_timestamp();
    doc["config"] = nlohmann::json::parse(serialize_config(cfg));
    doc["result"] = {{"kind", "exact"},
                     {"n", cfg.run.n},
                     {"paths", paths},
                     {"method", std::string(to_string(cfg.run.method))},
                     {"scaling", std::string(to_string(cfg.model.scaling()))},
                     {"monotone", table.monotone},
                     {"argmin", {{"upsilon", grid.upsilon[table.argmin_index]},
                                 {"rho", grid.rho[table.argmin_index]}}},
                     {"rows", rows_json(rows)}};
    write_file(f.json_out, doc.dump(2) + "\n");
  }

  if (!table.monotone) {
    err << "exact sweep is not nonincreasing in the threshold\n";
    return is_log_method(cfg.run.method) ? kExitPropertyFailure : kExitOk;
  }
  return kExitOk;
}

int cmd_mc(const Flags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = effective_config(f);
  const ThresholdGrid grid = resolve_grid(cfg);
  SweepResult sweep = coupled_sweep(cfg.model, cfg.run.n, grid.upsilon, cfg.run.path_count,
                                    cfg.run.master_seed, cfg.run.method, {cfg.run.workers});
  sweep.rho_grid = grid.rho;
  const TaxOptimum best = argmin_tax(sweep);

  std::vector<Row> rows;
  for (std::size_t i = 0; i < grid.upsilon.size(); ++i) {
    const auto& e = sweep.estimates[i];
    rows.push_back({grid.upsilon[i], grid.rho[i], sweep.path_count, e.value, e.std_error,
                    sweep.master_seed});
  }
  emit(f, render_csv(cfg, rows), out);

  if (!f.json_out.empty()) {
    nlohmann::json doc;
    doc["generated_at"] = utc_timestamp();
    doc["config"] = nlohmann::json::parse(serialize_config(cfg));
    doc["result"] = {{"kind", "monte-carlo"},
                     {"n", cfg.run.n},
                     {"paths", sweep.path_count},
                     {"seed", sweep.master_seed},
                     {"method", std::string(to_string(cfg.run.method))},
                     {"scaling", std::string(to_string(cfg.model.scaling()))},
                     {"coupled", sweep.coupled},
                     {"monotone", sweep.monotone},
                     {"path_increases", sweep.path_increases},
                     {"flagged_pairs", sweep.flagged_pairs},
                     {"argmin", {{"upsilon", best.upsilon}, {"rho", *best.rho}}},
                     {"rows", rows_json(rows)}};
    write_file(f.json_out, doc.dump(2) + "\n");
  }

  if (is_log_method(cfg.run.method) && !sweep.monotone) {
    err << "coupled sweep is not nonincreasing in the threshold\n";
    return kExitPropertyFailure;
  }
  if (!is_log_method(cfg.run.method) && sweep.flagged_pairs > 0)
    err << "note: " << sweep.flagged_pairs
        << " grid step(s) increase by more than 2 stderr (price-level is not certified)\n";
  return kExitOk;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  int workers = 1;
  if (f.workers_opt && f.workers_opt->count()) {
    workers = f.workers;
  } else if (const char* env = std::getenv(kWorkersEnv); env && *env) {
    workers = std::atoi(env);
  }
  if (workers < 1) throw ValidationError("workers must be >= 1");
  const auto started = std::chrono::steady_clock::now();
  const VerifyReport report = run_verify(parse_verify_level(f.level), workers);
  for (const auto& s : report.suites) {
    out << (s.passed ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.detail << '\n';
    for (const auto& flag : s.flags) out << "       flagged: " << flag << '\n';
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << (report.passed() ? "verify: all suites passed" : "verify: FAILED") << " ("
      << std::fixed << std::setprecision(1) << secs << " s)\n";
  return report.passed() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delay-feedback herding model: unfairness under a transaction tax", "herding"};
  app.require_subcommand(1);
  Flags f;
  auto* enumerate = app.add_subcommand("enumerate", "exact unfairness over all 2^n sign paths");
  add_run_flags(enumerate, f, false);
  auto* mc = app.add_subcommand("mc", "coupled Monte Carlo threshold sweep");
  add_run_flags(mc, f, true);
  auto* verify = app.add_subcommand("verify", "run the built-in invariant suites");
  verify->add_option("--level,level", f.level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));
  f.workers_opt = verify->add_option("--workers", f.workers, "worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  // The subcommand that ran determines which option pointers are live.
  auto pick = [&](CLI::App* cmd) {
    if (cmd == verify) return;
    f.n_opt = cmd->get_option("--n");
    f.workers_opt = cmd->get_option("--workers");
    if (cmd == mc) {
      f.paths_opt = cmd->get_option("--paths");
      f.seed_opt = cmd->get_option("--seed");
    } else {
      f.paths_opt = nullptr;
      f.seed_opt = nullptr;
    }
  };

  try {
    if (enumerate->parsed()) {
      pick(enumerate);
      return cmd_enumerate(f, out, err);
    }
    if (mc->parsed()) {
      pick(mc);
      return cmd_mc(f, out, err);
    }
    f.workers_opt = verify->get_option("--workers");
    return cmd_verify(f, out);
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const EvaluationError& e) {
    err << "error: evaluation failed: " << e.what() << '\n';
    return kExitPropertyFailure;
  }
}

}  // namespace herding
