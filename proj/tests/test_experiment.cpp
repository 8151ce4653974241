#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tngeo/experiment.hpp"

using namespace tngeo;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  const auto p = std::filesystem::temp_directory_path() / ("tngeo-test-" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("config parsing: diagnostics before any computation") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{nope"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{}"), config_error);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(R"({"experiment":"mps-corr"})"),
      config_error);  // seed mandatory
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(R"({"experiment":"quux","seed":1})"),
      config_error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"experiment":"mps-corr","seed":1,"workers":0})"),
                  config_error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"experiment":"mps-corr","seed":1,"geometry":{"N":"x"}})"),
                  config_error);

  const ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"experiment":"mps-corr","seed":7,"geometry":{"chi":4,"d":2}})");
  CHECK(cfg.seed == 7);
  CHECK(cfg.chi == 4);
}

TEST_CASE("graph_from_config covers every geometry") {
  ExperimentConfig cfg;
  cfg.N = 16;
  cfg.chi = 2;
  cfg.geometry = "mps";
  CHECK(graph_from_config(cfg).kind == "mps");
  cfg.geometry = "mera";
  CHECK(graph_from_config(cfg).kind == "mera");
  cfg.geometry = "frmera";
  cfg.z_xi = 1;
  cfg.dz = 1;
  CHECK(graph_from_config(cfg).kind == "frmera");
  cfg.geometry = "peps";
  cfg.Lx = 4;
  cfg.Ly = 4;
  CHECK(graph_from_config(cfg).kind == "peps");
  cfg.geometry = "branching";
  cfg.branch_scales = {1};
  CHECK(graph_from_config(cfg).kind == "branching-mera");
  cfg.geometry = "nope";
  CHECK_THROWS_AS(graph_from_config(cfg), config_error);
}

TEST_CASE("run: identical config and seed produce byte-identical outputs") {
  const std::string json = R"({
    "experiment": "mps-corr",
    "seed": 11,
    "workers": 1,
    "geometry": {"type": "mps", "chi": 4, "d": 2},
    "sweep": {"r": [2, 3, 4, 5, 6, 7, 8, 9, 10]},
    "out_dir": "___DIR___"
  })";
  auto run_into = [&](const std::string& dir, int workers) {
    std::string text = json;
    text.replace(text.find("___DIR___"), 9, dir);
    ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
    cfg.workers = workers;
    return run_experiment(cfg);
  };
  const std::string d1 = temp_dir("runa");
  const std::string d2 = temp_dir("runb");
  const std::string d3 = temp_dir("runc");
  const RunArtifacts a = run_into(d1, 1);
  const RunArtifacts b = run_into(d2, 1);
  const RunArtifacts c = run_into(d3, 4);  // worker count must not matter
  REQUIRE(a.csv_paths.size() == 1);
  CHECK(slurp(a.csv_paths[0]) == slurp(b.csv_paths[0]));
  CHECK(slurp(a.json_paths[0]) == slurp(b.json_paths[0]));
  CHECK(slurp(a.csv_paths[0]) == slurp(c.csv_paths[0]));
  CHECK(slurp(a.json_paths[0]) == slurp(c.json_paths[0]));
}

TEST_CASE("run: csv schema is the fixed column order") {
  const std::string dir = temp_dir("schema");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"experiment":"mps-entropy","seed":3,
          "geometry":{"type":"mps","chi":2,"d":2,"N":16},
          "sweep":{"L":[2,4,6,8]},"out_dir":")" +
      dir + R"("})");
  const RunArtifacts art = run_experiment(cfg);
  const std::string csv = slurp(art.csv_paths[0]);
  CHECK(csv.rfind("kind,chi,d,seed,param,value\n", 0) == 0);
  CHECK(csv.find("entropy,2,2,3,2,") != std::string::npos);
}

TEST_CASE("run: branch classifier experiment emits the class") {
  const std::string dir = temp_dir("branch");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"experiment":"branch-classify","seed":1,
          "branch":{"D":2,"gamma":1},"out_dir":")" +
      dir + R"("})");
  const RunArtifacts art = run_experiment(cfg);
  const std::string rep = slurp(art.json_paths[0]);
  CHECK(rep.find("L^(D-1) log L") != std::string::npos);
}

TEST_CASE("run: mincut sweep on the mera geometry selects the log class") {
  const std::string dir = temp_dir("mincut");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"experiment":"graph-mincut","seed":1,
          "geometry":{"type":"mera","N":256,"chi":2},
          "sweep":{"L":[4,8,16,32,64]},"out_dir":")" +
      dir + R"("})");
  const RunArtifacts art = run_experiment(cfg);
  const std::string rep = slurp(art.json_paths[0]);
  CHECK(rep.find("\"model\": \"log\"") != std::string::npos);
}

TEST_CASE("parallel_for: propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(8, 4,
                               [](std::size_t i) {
                                 if (i == 5) throw numeric_error("boom");
                               }),
                  numeric_error);
}
