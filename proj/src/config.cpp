#include "herding/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "herding/error.hpp"
#include "herding/lattice.hpp"
#include "json.hpp"

namespace herding {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("not a number: '" + std::string(text) + "'");
  return value;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ValidationError(std::string("unknown key '") + key + "' in " + where);
  }
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned())
    throw ValidationError(std::string("'") + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> get_grid(const json& v, const char* key) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (!v.is_array()) throw ValidationError(std::string("'") + key + "' must be an array or string");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(std::string("'") + key + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  std::vector<double> grid;
  if (sep == ':') {
    if (parts.size() != 3) throw ValidationError("grid shorthand must be START:STOP:COUNT");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count_d = parse_number(parts[2]);
    if (count_d < 1 || count_d != std::floor(count_d))
      throw ValidationError("grid COUNT must be a positive integer");
    const auto count = static_cast<std::size_t>(count_d);
    if (count == 1) return {lo};
    for (std::size_t i = 0; i < count; ++i) {
      grid.push_back(i + 1 == count ? hi
                                    : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(count - 1));
    }
    return grid;
  }
  for (auto p : parts) grid.push_back(parse_number(p));
  return grid;
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(doc, {"model", "tax", "run"}, "config");

  RunConfig cfg;
  try {
    if (doc.contains("model")) {
      const auto& m = doc.at("model");
      reject_unknown(m, {"alpha_up", "alpha_down", "alpha_zero", "sigma", "kernel", "x0",
                         "scaling", "lag_rounding"},
                     "model");
      ModelParamsInit init;
      init.alpha_up = get_double(m, "alpha_up", init.alpha_up);
      init.alpha_down = get_double(m, "alpha_down", init.alpha_down);
      init.alpha_zero = get_double(m, "alpha_zero", init.alpha_zero);
      init.sigma = get_double(m, "sigma", init.sigma);
      init.x0 = get_double(m, "x0", init.x0);
      if (m.contains("scaling")) init.scaling = parse_scaling(m.at("scaling").get<std::string>());
      if (m.contains("lag_rounding"))
        init.lag_rounding = parse_lag_rounding(m.at("lag_rounding").get<std::string>());
      if (m.contains("kernel")) {
        std::vector<KernelEntry> entries;
        for (const auto& e : m.at("kernel")) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ValidationError("kernel entries must be [lag, weight] pairs");
          entries.push_back({e[0].get<double>(), e[1].get<double>()});
        }
        init.kernel = DelayKernel(std::move(entries));
      }
      cfg.model = ModelParams(std::move(init));
    }
    if (doc.contains("tax")) {
      const auto& t = doc.at("tax");
      reject_unknown(t, {"rho", "rho_grid", "upsilon_grid", "holding_time", "sweep_max"}, "tax");
      if (t.contains("rho")) cfg.tax.rho = get_double(t, "rho", 0.0);
      if (t.contains("rho_grid")) cfg.tax.rho_grid = get_grid(t.at("rho_grid"), "rho_grid");
      if (t.contains("upsilon_grid"))
        cfg.tax.upsilon_grid = get_grid(t.at("upsilon_grid"), "upsilon_grid");
      cfg.tax.holding_time = get_double(t, "holding_time", cfg.tax.holding_time);
      if (t.contains("sweep_max")) cfg.tax.sweep_max = get_double(t, "sweep_max", 0.0);
    }
    if (doc.contains("run")) {
      const auto& r = doc.at("run");
      reject_unknown(r, {"n", "path_count", "master_seed", "method", "workers"}, "run");
      cfg.run.n = get_count(r, "n", cfg.run.n);
      cfg.run.path_count = get_count(r, "path_count", cfg.run.path_count);
      cfg.run.master_seed = get_count(r, "master_seed", cfg.run.master_seed);
      if (r.contains("method")) cfg.run.method = parse_method(r.at("method").get<std::string>());
      cfg.run.workers = static_cast<int>(get_count(r, "workers", 1));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field has the wrong type: ") + e.what());
  }

  if (!(cfg.tax.holding_time > 0.0) || !std::isfinite(cfg.tax.holding_time))
    throw ValidationError("holding_time T must be > 0");
  if (cfg.tax.sweep_max && !(*cfg.tax.sweep_max >= 0.0))
    throw ValidationError("sweep_max S must be >= 0");
  if (cfg.run.workers < 1) throw ValidationError("workers must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json kernel = json::array();
  for (const auto& e : cfg.model.kernel().entries()) kernel.push_back({e.lag, e.weight});
  json doc;
  doc["model"] = {{"alpha_up", cfg.model.alpha_up()},
                  {"alpha_down", cfg.model.alpha_down()},
                  {"alpha_zero", cfg.model.alpha_zero()},
                  {"sigma", cfg.model.sigma()},
                  {"kernel", kernel},
                  {"x0", cfg.model.x0()},
                  {"scaling", std::string(to_string(cfg.model.scaling()))},
                  {"lag_rounding", std::string(to_string(cfg.model.lag_rounding()))}};
  json tax = {{"holding_time", cfg.tax.holding_time}};
  if (cfg.tax.rho) tax["rho"] = *cfg.tax.rho;
  if (cfg.tax.rho_grid) tax["rho_grid"] = *cfg.tax.rho_grid;
  if (cfg.tax.upsilon_grid) tax["upsilon_grid"] = *cfg.tax.upsilon_grid;
  if (cfg.tax.sweep_max) tax["sweep_max"] = *cfg.tax.sweep_max;
  doc["tax"] = tax;
  doc["run"] = {{"n", cfg.run.n},
                {"path_count", cfg.run.path_count},
                {"master_seed", cfg.run.master_seed},
                {"method", std::string(to_string(cfg.run.method))},
                {"workers", cfg.run.workers}};
  return doc.dump(2);
}

ThresholdGrid resolve_grid(const RunConfig& cfg) {
  const double T = cfg.tax.holding_time;
  ThresholdGrid g;
  if (cfg.tax.upsilon_grid) {
    g.upsilon = *cfg.tax.upsilon_grid;
    for (double u : g.upsilon) g.rho.push_back(u / T);
  } else {
    std::vector<double> rhos;
    if (cfg.tax.rho_grid) {
      rhos = *cfg.tax.rho_grid;
    } else if (cfg.tax.rho) {
      rhos = {*cfg.tax.rho};
    } else {
      throw ValidationError("no threshold grid: set tax.rho, tax.rho_grid or tax.upsilon_grid");
    }
    for (double r : rhos) g.upsilon.push_back(threshold_from_tax(r, T));
    g.rho = std::move(rhos);
  }
  validate_grid(g.upsilon);
  if (cfg.tax.sweep_max) {
    const double S = *cfg.tax.sweep_max;
    for (std::size_t i = 0; i < g.rho.size(); ++i) {
      if (g.rho[i] > S * (1.0 + 1e-12)) {
        throw ValidationError("tax rate " + format_double(g.rho[i]) +
                              " exceeds sweep_max S = " + format_double(S));
      }
    }
  }
  return g;
}

}  // namespace herding
