// tngeo: build tensor-network geometries, run sweeps, fit scaling laws.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tngeo/convert.hpp"
#include "tngeo/experiment.hpp"
#include "tngeo/fit.hpp"
#include "tngeo/frmera.hpp"
#include "tngeo/mincut.hpp"

namespace {

using namespace tngeo;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

struct GeometryOpts {
  std::string type = "mps";
  long N = 16, T = 0, z_xi = 0, dz = 1, Lx = 0, Ly = 0;
  std::size_t chi = 2, d = 2;
  std::string branch_scales;  // comma list
  std::set<std::string> given;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON config; flags override its fields");
  cmd->add_option("--out", c.out_path, "output path (file or directory)");
  cmd->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "master seed (mandatory for runs)")
      ->each([&c](const std::string&) { c.seed_given = true; });
}

void add_geometry(CLI::App* cmd, GeometryOpts& g) {
  const auto track = [&g](const std::string& key) {
    return [&g, key](const std::string&) { g.given.insert(key); };
  };
  cmd->add_option("--type", g.type, "mps|peps|mera|frmera|branching")->each(track("type"));
  cmd->add_option("--N", g.N, "number of sites")->each(track("N"));
  cmd->add_option("--T", g.T, "layer count (0: full depth)")->each(track("T"));
  cmd->add_option("--z-xi", g.z_xi, "scale-invariant layers (frmera)")->each(track("z_xi"));
  cmd->add_option("--dz", g.dz, "free layers (frmera)")->each(track("dz"));
  cmd->add_option("--chi", g.chi, "bond dimension")->each(track("chi"));
  cmd->add_option("--d", g.d, "site dimension")->each(track("d"));
  cmd->add_option("--Lx", g.Lx, "grid width (peps)")->each(track("Lx"));
  cmd->add_option("--Ly", g.Ly, "grid height (peps)")->each(track("Ly"));
  cmd->add_option("--branch-scales", g.branch_scales, "comma list of branching scales")
      ->each(track("branch_scales"));
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stol(item));
  return out;
}

ExperimentConfig assemble_config(const CommonOpts& c, const GeometryOpts& g,
                                 const std::string& experiment) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = ExperimentConfig::from_file(c.config_path);
  if (!experiment.empty()) cfg.experiment = experiment;
  if (c.seed_given) {
    cfg.seed = c.seed;
    cfg.seed_set = true;
  }
  if (!c.out_path.empty()) cfg.out_dir = c.out_path;
  cfg.format = c.format;
  const bool fresh = c.config_path.empty();
  const auto use = [&](const char* key) { return fresh || g.given.count(key); };
  if (use("type")) cfg.geometry = g.type;
  if (use("N")) cfg.N = g.N;
  if (use("T")) cfg.T = g.T;
  if (use("z_xi")) cfg.z_xi = g.z_xi;
  if (use("dz")) cfg.dz = g.dz;
  if (use("chi")) cfg.chi = g.chi;
  if (use("d")) cfg.d = g.d;
  if (use("Lx")) cfg.Lx = g.Lx;
  if (use("Ly")) cfg.Ly = g.Ly;
  if (fresh || g.given.count("branch_scales"))
    cfg.branch_scales = parse_long_list(g.branch_scales);
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw config_error("cannot open output path '" + out_path + "'");
  out << text;
}

std::vector<std::pair<double, double>> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open points file '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  bool sweep_format = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("kind,", 0) == 0) {
      sweep_format = true;
      continue;
    }
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    try {
      if (sweep_format && cells.size() >= 6)
        pts.push_back({std::stod(cells[4]), std::stod(cells[5])});
      else if (cells.size() >= 2)
        pts.push_back({std::stod(cells[0]), std::stod(cells[1])});
      else
        throw config_error("points file: malformed line '" + line + "'");
    } catch (const std::invalid_argument&) {
      throw config_error("points file: malformed line '" + line + "'");
    }
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor-network geometry lab"};
  app.require_subcommand(1);

  CommonOpts common;
  GeometryOpts geo;

  // build -------------------------------------------------------------------
  auto* cmd_build = app.add_subcommand("build", "emit a geometry in the text format");
  add_common(cmd_build, common);
  add_geometry(cmd_build, geo);

  // geodesic ------------------------------------------------------------------
  auto* cmd_geo = app.add_subcommand("geodesic", "shortest tensor path between sites");
  add_common(cmd_geo, common);
  add_geometry(cmd_geo, geo);
  std::string x1 = "0", x2 = "1";
  bool links = false;
  cmd_geo->add_option("--x1", x1, "first site (x or x,y)");
  cmd_geo->add_option("--x2", x2, "second site");
  cmd_geo->add_flag("--links", links, "count links instead of tensors");

  // mincut ----------------------------------------------------------------------
  auto* cmd_cut = app.add_subcommand("mincut", "minimal cut separating a region");
  add_common(cmd_cut, common);
  add_geometry(cmd_cut, geo);
  long first = 0, last = 0, bx0 = 0, by0 = 0, bx1 = -1, by1 = -1;
  cmd_cut->add_option("--first", first, "first site of a 1D interval");
  cmd_cut->add_option("--last", last, "last site of a 1D interval");
  cmd_cut->add_option("--x0", bx0, "2D block corner x0");
  cmd_cut->add_option("--y0", by0, "2D block corner y0");
  cmd_cut->add_option("--x1b", bx1, "2D block corner x1");
  cmd_cut->add_option("--y1b", by1, "2D block corner y1");

  // mps / mera / frmera / branch ---------------------------------------------
  auto* cmd_mps = app.add_subcommand("mps", "homogeneous MPS sweeps");
  add_common(cmd_mps, common);
  add_geometry(cmd_mps, geo);
  auto* mps_corr = cmd_mps->add_subcommand("corr", "correlator decay sweep");
  auto* mps_ent = cmd_mps->add_subcommand("entropy", "block entropy sweep");
  auto* mps_spec = cmd_mps->add_subcommand("spectrum", "transfer spectrum");
  cmd_mps->require_subcommand(1);

  auto* cmd_mera = app.add_subcommand("mera", "binary MERA sweeps");
  add_common(cmd_mera, common);
  add_geometry(cmd_mera, geo);
  auto* mera_corr = cmd_mera->add_subcommand("corr", "causal-cone correlator sweep");
  auto* mera_ent = cmd_mera->add_subcommand("entropy", "block entropy sweep");
  auto* mera_spec = cmd_mera->add_subcommand("spectrum", "scaling superoperator");
  cmd_mera->require_subcommand(1);

  auto* cmd_fr = app.add_subcommand("frmera", "finite-range MERA operations");
  add_common(cmd_fr, common);
  add_geometry(cmd_fr, geo);
  auto* fr_build = cmd_fr->add_subcommand("build", "emit the truncated geometry");
  auto* fr_conv = cmd_fr->add_subcommand("convert", "compile into an exact MPS");
  auto* fr_cross = cmd_fr->add_subcommand("crossover", "two-regime geodesic table");
  cmd_fr->require_subcommand(1);

  auto* cmd_branch = app.add_subcommand("branch", "holographic branching analysis");
  add_common(cmd_branch, common);
  auto* br_classify = cmd_branch->add_subcommand("classify", "entropy scaling class");
  int br_dim = 1, br_gamma = -1;
  long br_gapped = -1;
  br_classify->add_option("--D", br_dim, "spatial dimension");
  br_classify->add_option("--gamma", br_gamma, "Fermi-surface dimension");
  br_classify->add_option("--gapped-z0", br_gapped, "finite branch extent");
  cmd_branch->require_subcommand(1);

  // fit ---------------------------------------------------------------------------
  auto* cmd_fit = app.add_subcommand("fit", "fit scaling models to points");
  add_common(cmd_fit, common);
  std::string fit_in, fit_family = "decay";
  bool fit_combined = false;
  cmd_fit->add_option("--in", fit_in, "points file (x,y or sweep.csv)")->required();
  cmd_fit->add_option("--family", fit_family, "decay|entropy")
      ->check(CLI::IsMember({"decay", "entropy"}));
  cmd_fit->add_flag("--combined", fit_combined, "also try the product form");

  // run -----------------------------------------------------------------------------
  auto* cmd_run = app.add_subcommand("run", "execute a config-driven experiment");
  add_common(cmd_run, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_build)) {
      const ExperimentConfig cfg = assemble_config(common, geo, "graph-geodesic");
      emit(graph_from_config(cfg).to_text(), common.out_path);
    } else if (app.got_subcommand(cmd_geo)) {
      const ExperimentConfig cfg = assemble_config(common, geo, "graph-geodesic");
      const TNGraph g = graph_from_config(cfg);
      std::cout << geodesic(g, coord_from_string(x1), coord_from_string(x2), links)
                << "\n";
    } else if (app.got_subcommand(cmd_cut)) {
      const ExperimentConfig cfg = assemble_config(common, geo, "graph-mincut");
      const TNGraph g = graph_from_config(cfg);
      const Region region =
          (bx1 >= 0) ? Region::block2d(static_cast<int>(bx0), static_cast<int>(by0),
                                       static_cast<int>(bx1), static_cast<int>(by1))
                     : Region::interval(static_cast<int>(first), static_cast<int>(last));
      const MinCutResult cut = min_cut(g, region);
      std::cout << cut.bond_count << " " << format_double(cut.weight_bits)
                << (cut.whole_lattice ? " whole-lattice" : "") << "\n";
    } else if (app.got_subcommand(cmd_mps)) {
      const char* kind = cmd_mps->got_subcommand(mps_corr)
                             ? "mps-corr"
                             : (cmd_mps->got_subcommand(mps_ent) ? "mps-entropy"
                                                                 : "mps-spectrum");
      (void)mps_spec;
      const RunArtifacts art = run_experiment(assemble_config(common, geo, kind));
      for (const auto& p : art.csv_paths) std::cout << p << "\n";
      for (const auto& p : art.json_paths) std::cout << p << "\n";
    } else if (app.got_subcommand(cmd_mera)) {
      const char* kind = cmd_mera->got_subcommand(mera_corr)
                             ? "mera-corr"
                             : (cmd_mera->got_subcommand(mera_ent) ? "mera-entropy"
                                                                   : "mera-spectrum");
      (void)mera_spec;
      const RunArtifacts art = run_experiment(assemble_config(common, geo, kind));
      for (const auto& p : art.csv_paths) std::cout << p << "\n";
      for (const auto& p : art.json_paths) std::cout << p << "\n";
    } else if (app.got_subcommand(cmd_fr)) {
      if (cmd_fr->got_subcommand(fr_build)) {
        ExperimentConfig cfg = assemble_config(common, geo, "frmera-crossover");
        cfg.geometry = "frmera";
        emit(graph_from_config(cfg).to_text(), common.out_path);
      } else {
        const char* kind =
            cmd_fr->got_subcommand(fr_conv) ? "frmera-convert" : "frmera-crossover";
        (void)fr_cross;
        const RunArtifacts art = run_experiment(assemble_config(common, geo, kind));
        for (const auto& p : art.csv_paths) std::cout << p << "\n";
        for (const auto& p : art.json_paths) std::cout << p << "\n";
      }
    } else if (app.got_subcommand(cmd_branch)) {
      const BranchingTree tree = (br_gapped >= 0)
                                     ? BranchingTree::gapped(br_dim, br_gapped)
                                     : BranchingTree::fermi_surface(br_dim, br_gamma);
      const LayerSumPrediction pred = classify_branching(tree, br_dim);
      std::cout << scaling_class_name(pred.scaling) << "\n" << pred.formula << "\n";
    } else if (app.got_subcommand(cmd_fit)) {
      const auto pts = read_points(fit_in);
      const ScalingReport rep =
          (fit_family == "decay") ? fit_decay(pts, fit_combined) : fit_entropy(pts);
      emit(rep.to_json_string() + "\n", common.out_path);
    } else if (app.got_subcommand(cmd_run)) {
      if (common.config_path.empty())
        throw config_error("run: --config is required");
      const RunArtifacts art = run_experiment(assemble_config(common, geo, ""));
      for (const auto& p : art.csv_paths) std::cout << p << "\n";
      for (const auto& p : art.json_paths) std::cout << p << "\n";
      std::cout << art.manifest_path << "\n";
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
