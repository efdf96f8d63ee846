#include "doctest.h"

#include "structrl/config.hpp"
#include "structrl/io.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

using namespace structrl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("structrl_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const char* name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("defaults validate and echo every key") {
  ExperimentConfig cfg;
  cfg.validate();
  const auto pairs = cfg.echo();
  CHECK(pairs.size() >= 30);
  for (std::size_t i = 1; i < pairs.size(); ++i)
    CHECK(pairs[i - 1].first < pairs[i].first);  // sorted, unique
  bool saw_eta = false;
  for (const auto& [k, v] : pairs)
    if (k == "eta") {
      saw_eta = true;
      CHECK(v == format_double(cfg.eta));
    }
  CHECK(saw_eta);
}

TEST_CASE("set updates fields by key") {
  ExperimentConfig cfg;
  cfg.set("eta", "0.25");
  CHECK(cfg.eta == 0.25);
  cfg.set("n_atoms", "21");
  CHECK(cfg.n_atoms == 21);
  cfg.set("seed_strategy", "tstar");
  CHECK(cfg.seed_strategy == "tstar");
  cfg.set("uniform_starts", "false");
  CHECK(!cfg.uniform_starts);
  cfg.set("uniform_starts", "1");
  CHECK(cfg.uniform_starts);
  cfg.set("rng_seed_base", "99");
  CHECK(cfg.rng_seed_base == 99);

  CHECK_THROWS_AS(cfg.set("no_such_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("eta", "fast"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("n_atoms", "2.5"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("uniform_starts", "maybe"), std::invalid_argument);
}

TEST_CASE("validate rejects out-of-range settings") {
  auto broken = [](auto&& mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(broken([](auto& c) { c.eta = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.eta = 1.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.gamma = -0.1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.n_atoms = 1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.smoothing_window = 2; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.weight_floor = 1.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.sigma_reduction = "median"; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.seed_strategy = "astro"; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.eval_start_x = 10; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](auto& c) { c.exploration_episodes = 1; }).validate(),
                  std::invalid_argument);
}

TEST_CASE("config files support comments and blank lines") {
  TempDir tmp;
  write_text_file(tmp.file("good.cfg"),
                  "# run settings\n"
                  "\n"
                  "eta = 0.5\n"
                  "grid_width=4   # trailing comment\n"
                  "seed_strategy = bellman\n");
  const ExperimentConfig cfg = load_config(tmp.file("good.cfg"));
  CHECK(cfg.eta == 0.5);
  CHECK(cfg.grid_width == 4);
  CHECK(cfg.seed_strategy == "bellman");
  CHECK(cfg.grid_height == 10);  // untouched keys keep defaults

  write_text_file(tmp.file("bad_key.cfg"), "speed = 9\n");
  CHECK_THROWS_AS(load_config(tmp.file("bad_key.cfg")), std::runtime_error);
  write_text_file(tmp.file("bad_line.cfg"), "eta\n");
  CHECK_THROWS_AS(load_config(tmp.file("bad_line.cfg")), std::runtime_error);
  CHECK_THROWS_AS(load_config(tmp.file("missing.cfg")), std::runtime_error);
}

TEST_CASE("overrides apply in order and must be well formed") {
  ExperimentConfig cfg;
  apply_overrides(cfg, {"eta=0.2", "eta=0.4", "batch_size=8"});
  CHECK(cfg.eta == 0.4);
  CHECK(cfg.batch_size == 8);
  CHECK_THROWS_AS(apply_overrides(cfg, {"eta"}), std::invalid_argument);
  CHECK_THROWS_AS(apply_overrides(cfg, {"eta=0.2", "bogus=1"}), std::invalid_argument);
}

TEST_CASE("key descriptions cover the whole registry") {
  const std::string doc = ExperimentConfig::describe_keys();
  for (const auto& [k, v] : ExperimentConfig().echo()) {
    CAPTURE(k);
    CHECK(doc.find(k) != std::string::npos);
  }
  CHECK(doc.find("default") != std::string::npos);
}

TEST_CASE("doubles format as shortest round-trip decimals") {
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.5) == "-0.5");
  CHECK(format_double(0.1) == "0.1");
  for (double v : {1.0 / 3.0, -100.0, 1e-9, 123456.789, 0.30000000000000004})
    CHECK(parse_double(format_double(v)) == v);
  CHECK(format_int(-42) == "-42");
  CHECK(format_int(9007199254740993LL) == "9007199254740993");
}

TEST_CASE("parsers reject trailing garbage") {
  CHECK(parse_int("12") == 12);
  CHECK(parse_int("-3") == -3);
  CHECK(parse_i64("-9007199254740993") == -9007199254740993LL);
  CHECK(parse_u64("18446744073709551615") == 18446744073709551615ULL);
  CHECK(parse_double("1e-3") == 0.001);
  CHECK_THROWS_AS(parse_int("12x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_int("4.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("fast"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_u64("-1"), std::invalid_argument);
}

TEST_CASE("csv files round-trip") {
  TempDir tmp;
  const std::vector<std::string> header{"episode", "value"};
  const std::vector<std::vector<std::string>> rows{{"1", "-3.5"}, {"2", "-2"}};
  write_csv(tmp.file("t.csv"), header, rows);
  const auto back = read_csv(tmp.file("t.csv"));
  REQUIRE(back.size() == 3);
  CHECK(back[0] == header);
  CHECK(back[1] == rows[0]);
  CHECK(back[2] == rows[1]);
}

TEST_CASE("grid csv writes one row per y") {
  TempDir tmp;
  const std::vector<int> values{1, 2, 3, 4, 5, 6};  // 3 wide, 2 tall
  write_grid_csv(tmp.file("g.csv"), 3, 2, values);
  CHECK(read_text_file(tmp.file("g.csv")) == "1,2,3\n4,5,6\n");
}

TEST_CASE("manifests round-trip and preserve order") {
  TempDir tmp;
  const std::vector<std::pair<std::string, std::string>> entries{
      {"zeta", "1"}, {"alpha", "two"}, {"path", "a/b c"}};
  write_manifest(tmp.file("m"), entries);
  CHECK(read_manifest(tmp.file("m")) == entries);
}

TEST_CASE("curve plots emit self-contained svg") {
  TempDir tmp;
  CurveSeries s;
  s.label = "test";
  s.color = "#336699";
  s.center = {-10, -8, -6};
  s.lo = {-11, -9, -7};
  s.hi = {-9, -7, -5};
  write_curves_svg(tmp.file("p.svg"), "demo", {s});
  const std::string svg = read_text_file(tmp.file("p.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.find("#336699") != std::string::npos);
}
