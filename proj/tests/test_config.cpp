#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "herding/config.hpp"
#include "herding/error.hpp"
#include "herding/verify.hpp"

using namespace herding;

TEST_CASE("grid shorthand") {
  CHECK(parse_grid("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_grid("0,0.5,2") == std::vector<double>{0, 0.5, 2});
  CHECK(parse_grid("0.3") == std::vector<double>{0.3});
  const auto g = parse_grid("0:0.15:11");
  CHECK(g.size() == 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 0.15);
  CHECK(parse_grid("0.5:0.5:1") == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_grid("0:1:0"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:x:3"), ValidationError);
  CHECK_THROWS_AS(parse_grid(""), ValidationError);
}

TEST_CASE("a full document parses") {
  const auto cfg = parse_config(R"({
    "model": {"alpha_up": 1.5, "alpha_down": -0.5, "alpha_zero": 0.25, "sigma": 0.8,
              "kernel": [[0.25, 0.5], [0.5, 0.5]], "x0": 0.1, "scaling": "paper",
              "lag_rounding": "strict"},
    "tax": {"rho_grid": "0:0.15:4", "holding_time": 10, "sweep_max": 0.15},
    "run": {"n": 8, "path_count": 500, "master_seed": 7, "method": "price-level", "workers": 3}
  })");
  CHECK(cfg.model.alpha_up() == 1.5);
  CHECK(cfg.model.scaling() == Scaling::kPaperLiteral);
  CHECK(cfg.model.lag_rounding() == LagRounding::kStrict);
  CHECK(cfg.run.method == Method::kPriceLevel);
  CHECK(cfg.run.workers == 3);
  CHECK(cfg.tax.rho_grid->size() == 4);

  const auto grid = resolve_grid(cfg);
  for (std::size_t i = 0; i < grid.rho.size(); ++i)
    CHECK(grid.upsilon[i] == 10 * grid.rho[i]);
  CHECK(grid.upsilon.back() == 10 * 0.15);
}

TEST_CASE("defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg == RunConfig{});
  CHECK(cfg.model == ModelParams{ModelParamsInit{}});
}

TEST_CASE("round trip is lossless") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    RunConfig cfg;
    cfg.model = sample_config(99, i, 40, true).params;
    cfg.tax.holding_time = 0.1 + 20 * unit_uniform(98, i);
    if (i % 3 == 0) cfg.tax.rho = unit_uniform(97, i);
    if (i % 3 == 1) cfg.tax.rho_grid = std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0};
    if (i % 3 == 2) cfg.tax.upsilon_grid = std::vector<double>{0.1, M_PI / 10};
    if (i % 2 == 0) cfg.tax.sweep_max = unit_uniform(96, i);
    cfg.run.n = 1 + i;
    cfg.run.path_count = 1000 + 37 * i;
    cfg.run.master_seed = 0xFFFFFFFFFFFFFFFFULL - i;
    cfg.run.method = static_cast<Method>(i % 3);
    cfg.run.workers = 1 + static_cast<int>(i % 5);
    const auto text = serialize_config(cfg);
    CHECK(parse_config(text) == cfg);
    CHECK(serialize_config(parse_config(text)) == text);
  }
}

TEST_CASE("rejects bad documents") {
  CHECK_THROWS_AS(parse_config("{"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"alpha": 1}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"n": "twelve"}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"n": -3}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"method": "exact"}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"sigma": -1}})"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"kernel": [[0.25, 0.5], [0.5, 0.4]]}})"),
                       doctest::Contains("sum to 1"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"kernel": [[0.25, 0.5, 1]]}})"), ValidationError);
}

TEST_CASE("threshold grid resolution") {
  RunConfig cfg;
  CHECK_THROWS_AS(resolve_grid(cfg), ValidationError);

  cfg.tax.holding_time = 4;
  cfg.tax.rho = 0.05;
  auto g = resolve_grid(cfg);
  CHECK(g.upsilon == std::vector<double>{4 * 0.05});

  cfg.tax.rho_grid = std::vector<double>{0.0, 0.1};
  g = resolve_grid(cfg);
  CHECK(g.upsilon == std::vector<double>{0.0, 0.4});

  cfg.tax.upsilon_grid = std::vector<double>{0.2, 0.6};
  g = resolve_grid(cfg);
  CHECK(g.upsilon == std::vector<double>{0.2, 0.6});
  CHECK(g.rho == std::vector<double>{0.05, 0.15});

  cfg.tax.sweep_max = 0.1;
  CHECK_THROWS_AS(resolve_grid(cfg), ValidationError);
  cfg.tax.upsilon_grid.reset();
  CHECK_NOTHROW(resolve_grid(cfg));

  cfg.tax.rho_grid = std::vector<double>{0.1, 0.0};
  CHECK_THROWS_AS(resolve_grid(cfg), ValidationError);
}

TEST_CASE("load_config reports unreadable files as IO errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.json"), IoError);
  const char* path = "test_config_tmp.json";
  {
    std::ofstream f(path);
    f << R"({"run": {"n": 5}})";
  }
  CHECK(load_config(path).run.n == 5);
  std::remove(path);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double x = std::ldexp(unit_uniform(4, i), static_cast<int>(i % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}
