#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tngeo/branching.hpp"
#include "tngeo/graph.hpp"

namespace tngeo {

// One lab run: geometry + sweep grids + output destinations. Parsed from a
// single JSON document; every field is validated before any computation.
struct ExperimentConfig {
  std::string experiment;  // mps-corr | mps-entropy | mps-spectrum |
                           // mera-corr | mera-entropy | mera-spectrum |
                           // graph-geodesic | graph-mincut |
                           // frmera-crossover | frmera-convert | branch-classify
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;

  std::string geometry;  // mps | peps | mera | frmera | branching
  long N = 0;
  long T = 0;  // 0: full depth
  long z_xi = 0, dz = 1;
  std::size_t chi = 2, d = 2;
  long Lx = 0, Ly = 0;
  std::vector<long> branch_scales;

  int dim = 1;          // branch-classify: spatial dimension
  int gamma = -1;       // branch-classify: Fermi-surface dimension
  long gapped_z0 = -1;  // branch-classify: finite single branch

  std::vector<long> r_values;
  std::vector<long> l_values;

  std::string out_dir = "out";
  std::string format = "csv";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json_string() const;
  void validate() const;
};

TNGraph graph_from_config(const ExperimentConfig& cfg);

struct RunArtifacts {
  std::vector<std::string> csv_paths;
  std::vector<std::string> json_paths;
  std::string manifest_path;
};

// Executes the configured sweep, writes <out_dir>/sweep.csv, report.json and
// manifest.json. Outputs are byte-deterministic for a fixed config and seed;
// the manifest additionally records wall time and is therefore excluded from
// byte comparisons.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

// deterministic sweep helper: results land in input order regardless of the
// worker count
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

std::string format_double(double v);  // %.17g, fixed across platforms

}  // namespace tngeo
