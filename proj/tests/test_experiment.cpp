#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipsep/config.hpp"
#include "ipsep/errors.hpp"
#include "ipsep/experiment.hpp"

using namespace ipsep;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.grid_size = 64;
  cfg.scales = {2, 3};
  cfg.texture.scales = {2, 3};
  cfg.texture.counts = {2, 1};
  cfg.validate_scales = {};
  cfg.solver.max_iters = 300;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& leaf) {
  const auto d = std::filesystem::temp_directory_path() / ("ipsep_test_" + leaf);
  std::filesystem::create_directories(d);
  return d.string();
}

}  // namespace

TEST_CASE("config defaults validate and round-trip through JSON") {
  RunConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  const auto j = to_json(cfg);
  CHECK(to_json(config_from_json(j)).dump() == j.dump());

  auto edited = nlohmann::json::parse(R"({"epsilon": 0.1, "solver": {"max_iters": 7}, "texture": {"s": 2}})");
  const auto c2 = config_from_json(edited);
  CHECK(c2.epsilon == 0.1);
  CHECK(c2.solver.max_iters == 7);
  CHECK(c2.texture.s == 2);
  CHECK(c2.grid_size == 1024);
}

TEST_CASE("unknown JSON keys are rejected at every level") {
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"grid": 64})")), ParamError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"solver": {"maxiter": 5}})")), ParamError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"cartoon": {"rho": 0.3, "width": 1}})")), ParamError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mask": {"h": 0.1}})")), ParamError);
}

TEST_CASE("invalid epsilon names the admissible range") {
  RunConfig cfg;
  cfg.epsilon = 0.4;
  try {
    validate(cfg);
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("0 < ε < (2−α)/3") != std::string::npos);
  }
  cfg.epsilon = 0;
  CHECK_THROWS_AS(validate(cfg), ParamError);
}

TEST_CASE("config file errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/ipsep.json"), IOError);
  const auto dir = temp_dir("cfg");
  std::ofstream(dir + "/bad.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir + "/bad.json"), ParamError);
  std::ofstream(dir + "/ok.json") << R"({"grid_size": 256, "scales": [2, 3]})";
  const auto cfg = load_config(dir + "/ok.json");
  CHECK(cfg.grid_size == 256);
  CHECK(cfg.scales == std::vector<int>{2, 3});
}

TEST_CASE("scale problems split the mixture and mask the band") {
  const auto cfg = small_config();
  const auto scene = make_scene(cfg);
  CHECK(scale_grid(1024, 2) == 32);
  CHECK(scale_grid(1024, 4) == 512);
  CHECK(scale_grid(64, 3) == 64);
  const auto p = build_scale_problem(scene, cfg, 2);
  CHECK(p.n == 32);
  for (std::size_t i = 0; i < p.mixed.data.size(); ++i)
    CHECK(std::abs(p.mixed.data[i] - p.cartoon.data[i] - p.texture.data[i]) < 1e-15);
  std::size_t missing = 0;
  for (auto m : p.missing) missing += m;
  // rows with |x1| <= h: 2 floor(h n) + 1 of them
  CHECK(missing == static_cast<std::size_t>(2 * std::floor(p.h * p.n) + 1) * p.n);
}

TEST_CASE("sub-grid mask width gives ScaleSkipped rows") {
  auto cfg = small_config();
  cfg.mask_c = 0.5;
  const auto scene = make_scene(cfg);
  CHECK_THROWS_AS(build_scale_problem(scene, cfg, 3), ScaleError);
  const auto rows = decay_experiment(DecayKind::Sparsity1, scene, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].j == 2);
  CHECK(rows[0].flag == "base");
  CHECK(rows[1].j == 3);
  CHECK(rows[1].flag == "ScaleSkipped");
}

TEST_CASE("trend rows flag strict decrease and minimum drop") {
  const auto rows = trend_rows("k", "q", {2, 3, 4}, {8.0, 2.0, 1.5}, true, 1.0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].flag == "base");
  CHECK(std::isnan(rows[0].slope));
  CHECK(rows[1].slope == doctest::Approx(-2.0));
  CHECK(rows[1].flag == "pass");
  CHECK(rows[2].flag == "fail");
  const auto plain = trend_rows("k", "q", {2, 3}, {1.0, 1.0}, true);
  CHECK(plain[1].flag == "fail");
  CHECK(trend_rows("k", "q", {2}, {1.0}, false)[0].flag == "info");
}

TEST_CASE("CSV output has the schema header and is reproducible") {
  const auto cfg = small_config();
  const auto dir = temp_dir("csv");
  for (int run = 0; run < 2; ++run) {
    const auto scene = make_scene(cfg);
    write_csv(dir + "/coherence" + std::to_string(run) + ".csv", decay_experiment(DecayKind::Coherence, scene, cfg));
  }
  const auto a = slurp(dir + "/coherence0.csv");
  CHECK(a.rfind("kind,j,quantity,value,log2_value,slope,flag\n", 0) == 0);
  CHECK(a == slurp(dir + "/coherence1.csv"));
  CHECK_THROWS_AS(write_csv("/nonexistent/dir/x.csv", {}), IOError);
}

TEST_CASE("per-scale solve is feasible and reports its ratios") {
  const auto cfg = small_config();
  const auto scene = make_scene(cfg);
  const auto p = build_scale_problem(scene, cfg, 3);
  SeparationResult keep;
  const auto row = solve_scale(p, cfg.solver, &keep);
  CHECK(row.feasibility <= 1e-6);
  CHECK(row.iterations == static_cast<int>(keep.objective_trace.size()));
  CHECK(row.relative_error > 0);
  CHECK(row.relative_error < 1);
  CHECK(std::isfinite(row.missing_cartoon));
  CHECK(std::isfinite(row.missing_texture));
}
