// besovcap command-line front end: generation, hyperbolic fillings, condenser
// capacities, scaling experiments and quasisymmetry tests, with CSV/JSON
// artifacts. Every run writes a manifest echoing the resolved configuration.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besovcap/ahlfors.hpp"
#include "besovcap/caplab.hpp"
#include "besovcap/energy.hpp"
#include "besovcap/filling.hpp"
#include "besovcap/generators.hpp"
#include "besovcap/io.hpp"
#include "besovcap/qs.hpp"
#include "besovcap/uniformize.hpp"
#include "besovcap/util.hpp"

namespace fs = std::filesystem;
using besovcap::json;

namespace {

struct CommonOptions {
  std::string space = "interval";
  int level = 6;
  double gamma = 0.5;
  std::string cloud_file;
  double alpha = 2.0;
  double tau = 1.5;
  int depth = 0;  // 0 = default depth for the cloud
  std::string ball_rule = "open";
  double p = 2.0;
  double theta = 0.5;
  double tol = 1e-8;
  std::uint64_t seed = 20240901;
  int workers = 0;
  std::string out = "out";
};

void add_space_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--space", opt.space, "interval|cantor|carpet|gasket|snowflake")
      ->envname("BESOVCAP_SPACE");
  cmd->add_option("--level", opt.level, "generator resolution level")
      ->envname("BESOVCAP_LEVEL");
  cmd->add_option("--gamma", opt.gamma, "snowflake exponent in (0,1]")
      ->envname("BESOVCAP_GAMMA");
  cmd->add_option("--cloud", opt.cloud_file, "load the cloud from a JSON file instead");
}

void add_filling_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--alpha", opt.alpha, "net scale base (> 1)")->envname("BESOVCAP_ALPHA");
  cmd->add_option("--tau", opt.tau, "edge-rule ball inflation (> 1)")->envname("BESOVCAP_TAU");
  cmd->add_option("--depth", opt.depth, "filling depth (0 = resolve the sample)")
      ->envname("BESOVCAP_DEPTH");
  cmd->add_option("--ball-rule", opt.ball_rule, "edge-rule ball semantics: open|closed");
}

void add_energy_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--p", opt.p, "integrability exponent (> 1)")->envname("BESOVCAP_P");
  cmd->add_option("--theta", opt.theta, "smoothness exponent in (0,1); beta is derived")
      ->envname("BESOVCAP_THETA");
  cmd->add_option("--tol", opt.tol, "solver tolerance")->envname("BESOVCAP_TOL");
}

void add_run_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--seed", opt.seed, "seed for every sampled quantity")
      ->envname("BESOVCAP_SEED");
  cmd->add_option("--workers", opt.workers, "parallel worker bound (0 = cores)")
      ->envname("BESOVCAP_WORKERS");
  cmd->add_option("--out", opt.out, "output directory")->required();
}

besovcap::PointCloud resolve_cloud(const CommonOptions& opt) {
  if (!opt.cloud_file.empty()) {
    std::ifstream in(opt.cloud_file);
    if (!in) throw std::runtime_error("cannot open cloud file: " + opt.cloud_file);
    json j;
    in >> j;
    return besovcap::cloud_from_json(j);
  }
  if (opt.space == "interval") return besovcap::gen_interval(opt.level);
  if (opt.space == "cantor") return besovcap::gen_cantor(opt.level);
  if (opt.space == "carpet") return besovcap::gen_sierpinski_carpet(opt.level);
  if (opt.space == "gasket") return besovcap::gen_sierpinski_gasket(opt.level);
  if (opt.space == "snowflake")
    return besovcap::gen_snowflake_interval(opt.level, opt.gamma);
  throw std::invalid_argument("unknown --space '" + opt.space + "'");
}

besovcap::BallRule resolve_rule(const CommonOptions& opt) {
  if (opt.ball_rule == "open") return besovcap::BallRule::open;
  if (opt.ball_rule == "closed") return besovcap::BallRule::closed;
  throw std::invalid_argument("unknown --ball-rule '" + opt.ball_rule + "'");
}

int resolve_depth(const CommonOptions& opt, const besovcap::PointCloud& cloud) {
  return opt.depth > 0 ? opt.depth : besovcap::default_depth(cloud, opt.alpha);
}

json base_manifest(const std::string& command, const CommonOptions& opt) {
  json m;
  m["command"] = command;
  if (opt.cloud_file.empty()) {
    m["space"] = opt.space;
    m["level"] = opt.level;
    if (opt.space == "snowflake") m["gamma"] = opt.gamma;
  } else {
    m["cloud"] = opt.cloud_file;
  }
  m["seed"] = opt.seed;
  m["workers"] = opt.workers;
  return m;
}

void add_params_to_manifest(json& m, const CommonOptions& opt) {
  const besovcap::UniformParams params =
      besovcap::make_params(opt.alpha, opt.p, opt.theta);
  m["alpha"] = opt.alpha;
  m["tau"] = opt.tau;
  m["p"] = opt.p;
  m["theta"] = opt.theta;
  m["beta"] = params.beta;
  m["theta_relation_residual"] =
      std::abs(opt.theta - (1.0 - params.beta / (params.epsilon * opt.p)));
  m["tol"] = opt.tol;
}

void write_manifest(const fs::path& dir, const json& m) {
  besovcap::write_text(dir / "manifest.json", m.dump(2) + "\n");
}

fs::path prepare_out(const CommonOptions& opt) {
  fs::path dir(opt.out);
  fs::create_directories(dir);
  besovcap::set_worker_count(opt.workers);
  return dir;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

int run_gen(const CommonOptions& opt) {
  const fs::path dir = prepare_out(opt);
  const besovcap::PointCloud cloud = resolve_cloud(opt);
  besovcap::write_text(dir / "cloud.json", besovcap::cloud_to_json(cloud).dump(2) + "\n");
  besovcap::write_text(dir / "cloud.csv", besovcap::cloud_csv(cloud));
  const besovcap::AhlforsEstimate est = besovcap::estimate_ahlfors_Q(cloud);
  json m = base_manifest("gen", opt);
  m["n_points"] = cloud.size();
  m["diam"] = cloud.diam;
  m["ahlfors_q_hat"] = est.q_hat;
  m["ahlfors_flagged"] = est.flagged;
  m["outputs"] = {"cloud.json", "cloud.csv"};
  write_manifest(dir, m);
  return 0;
}

int run_fill(const CommonOptions& opt) {
  const fs::path dir = prepare_out(opt);
  const besovcap::PointCloud cloud = resolve_cloud(opt);
  const int depth = resolve_depth(opt, cloud);
  const besovcap::NetHierarchy nets = besovcap::build_nets(cloud, opt.alpha, depth);
  const besovcap::FillingGraph graph =
      besovcap::build_graph(cloud, nets, opt.tau, resolve_rule(opt));
  const besovcap::UniformizedGraph ug = besovcap::uniformize(
      graph, besovcap::make_params(opt.alpha, opt.p, opt.theta), cloud);

  besovcap::write_text(dir / "vertices.csv", besovcap::vertex_table_csv(graph, &ug));
  besovcap::write_text(dir / "edges.csv", besovcap::edge_table_csv(graph, &ug));
  besovcap::write_text(dir / "graph.json",
                       besovcap::graph_to_json(graph, &ug).dump(2) + "\n");
  besovcap::CodimFitOptions codim_opts;
  codim_opts.seed = opt.seed;
  const besovcap::CodimFit codim = besovcap::codim_exponent_fit(ug, cloud, codim_opts);
  besovcap::write_text(dir / "codim.json",
                       besovcap::codim_fit_to_json(codim).dump(2) + "\n");

  json m = base_manifest("fill", opt);
  add_params_to_manifest(m, opt);
  m["depth"] = depth;
  m["ball_rule"] = opt.ball_rule;
  m["n_vertices"] = graph.vertices.size();
  m["n_edges"] = graph.edges.size();
  m["net_truncated"] = nets.truncated;
  m["outputs"] = {"vertices.csv", "edges.csv", "graph.json", "codim.json"};
  write_manifest(dir, m);
  return 0;
}

int run_cap(const CommonOptions& opt, const std::string& e_list, const std::string& f_list,
            const std::string& arena) {
  const fs::path dir = prepare_out(opt);
  const besovcap::PointCloud cloud = resolve_cloud(opt);
  const std::vector<int> e_cloud = parse_index_list(e_list);
  const std::vector<int> f_cloud = parse_index_list(f_list);

  besovcap::SolveReport report;
  if (arena == "cloud") {
    besovcap::Condenser cond;
    cond.arena = besovcap::Condenser::Arena::cloud;
    cond.E = e_cloud;
    cond.F = f_cloud;
    report = besovcap::besov_capacity(cloud, cond, opt.theta, opt.p, opt.tol);
  } else if (arena == "graph") {
    const int depth = resolve_depth(opt, cloud);
    const besovcap::NetHierarchy nets = besovcap::build_nets(cloud, opt.alpha, depth);
    const besovcap::FillingGraph graph =
        besovcap::build_graph(cloud, nets, opt.tau, resolve_rule(opt));
    const besovcap::UniformizedGraph ug = besovcap::uniformize(
        graph, besovcap::make_params(opt.alpha, opt.p, opt.theta), cloud);
    besovcap::Condenser cond;
    cond.arena = besovcap::Condenser::Arena::graph;
    for (int z : e_cloud) cond.E.push_back(ug.boundary_reps.at(z));
    for (int z : f_cloud) cond.F.push_back(ug.boundary_reps.at(z));
    std::sort(cond.E.begin(), cond.E.end());
    cond.E.erase(std::unique(cond.E.begin(), cond.E.end()), cond.E.end());
    std::sort(cond.F.begin(), cond.F.end());
    cond.F.erase(std::unique(cond.F.begin(), cond.F.end()), cond.F.end());
    report = besovcap::newton_capacity(ug, cond, opt.p, opt.tol);
  } else {
    throw std::invalid_argument("unknown --arena '" + arena + "'");
  }

  besovcap::write_text(dir / "solve.json",
                       besovcap::solve_report_to_json(report, opt.p, opt.theta, arena,
                                                      static_cast<int>(e_cloud.size()),
                                                      static_cast<int>(f_cloud.size()),
                                                      opt.seed)
                               .dump(2) +
                           "\n");
  besovcap::write_text(dir / "minimizer.csv", besovcap::minimizer_csv(report));

  json m = base_manifest("cap", opt);
  add_params_to_manifest(m, opt);
  m["arena"] = arena;
  m["E"] = e_cloud;
  m["F"] = f_cloud;
  m["converged"] = report.converged;
  m["outputs"] = {"solve.json", "minimizer.csv"};
  write_manifest(dir, m);
  return report.converged ? 0 : 2;
}

int run_scaling(const CommonOptions& opt, const std::string& case_mode, int x0_flag,
                double fixed_R, double fixed_r, const std::string& grid_text) {
  const fs::path dir = prepare_out(opt);
  const besovcap::PointCloud cloud = resolve_cloud(opt);
  const int x0 = x0_flag >= 0 ? x0_flag : besovcap::medoid_index(cloud);

  int case_tag;
  if (case_mode == "auto") {
    const double q = cloud.analytic_dim > 0.0 ? cloud.analytic_dim
                                              : besovcap::estimate_ahlfors_Q(cloud).q_hat;
    case_tag = besovcap::annulus_case(opt.p, opt.theta, q);
  } else {
    case_tag = std::stoi(case_mode);
  }

  std::vector<std::pair<double, double>> grid;
  for (double value : parse_double_list(grid_text)) {
    switch (case_tag) {
      case 1: grid.emplace_back(fixed_r, value); break;          // grid lists R values
      case 2: grid.emplace_back(fixed_R / value, fixed_R); break;  // grid lists R/r ratios
      default: grid.emplace_back(value, fixed_R); break;         // grid lists r values
    }
  }

  const int depth = resolve_depth(opt, cloud);
  const besovcap::NetHierarchy nets = besovcap::build_nets(cloud, opt.alpha, depth);
  const besovcap::FillingGraph graph =
      besovcap::build_graph(cloud, nets, opt.tau, resolve_rule(opt));
  const besovcap::UniformizedGraph ug = besovcap::uniformize(
      graph, besovcap::make_params(opt.alpha, opt.p, opt.theta), cloud);

  const besovcap::ScalingReport report =
      besovcap::annulus_experiment(cloud, &ug, x0, grid, opt.p, opt.theta, opt.tol);
  besovcap::write_text(dir / "scaling.csv", besovcap::scaling_csv(report));
  besovcap::write_text(dir / "scaling.json",
                       besovcap::scaling_to_json(report).dump(2) + "\n");

  json m = base_manifest("scaling", opt);
  add_params_to_manifest(m, opt);
  m["x0"] = x0;
  m["case"] = report.case_tag;
  m["fitted_exponent"] = report.fitted_exponent;
  m["target_exponent"] = report.target_exponent;
  m["outputs"] = {"scaling.csv", "scaling.json"};
  write_manifest(dir, m);

  for (const auto& row : report.rows)
    if (row.status != "ok") return 2;
  return 0;
}

int run_loewner(const CommonOptions& opt, int x0_flag, double s,
                const std::string& scales_text) {
  const fs::path dir = prepare_out(opt);
  const besovcap::PointCloud cloud = resolve_cloud(opt);
  const int x0 = x0_flag >= 0 ? x0_flag : besovcap::medoid_index(cloud);

  std::vector<besovcap::ContinuumPair> pairs;
  for (double scale : parse_double_list(scales_text))
    pairs.push_back(besovcap::quarter_segment_condenser(cloud, x0, scale));
  const besovcap::LoewnerReport report =
      besovcap::loewner_experiment(cloud, pairs, s, opt.theta, opt.p, opt.tol);

  besovcap::write_text(dir / "loewner.csv", besovcap::loewner_csv(report));
  besovcap::write_text(dir / "loewner.json",
                       besovcap::loewner_to_json(report).dump(2) + "\n");

  json m = base_manifest("loewner", opt);
  add_params_to_manifest(m, opt);
  m["x0"] = x0;
  m["s"] = s;
  m["c_min"] = report.c_min;
  m["outputs"] = {"loewner.csv", "loewner.json"};
  write_manifest(dir, m);

  for (const auto& row : report.rows)
    if (row.status != "ok") return 2;
  return 0;
}

besovcap::SampledMap resolve_map(const CommonOptions& opt, const std::string& family,
                                 int level, const std::string& domain_file,
                                 const std::string& codomain_file,
                                 const std::string& pairing_file) {
  if (!pairing_file.empty()) {
    auto load = [](const std::string& path) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open cloud file: " + path);
      json j;
      in >> j;
      return besovcap::cloud_from_json(j);
    };
    besovcap::SampledMap map;
    map.domain = load(domain_file);
    map.codomain = load(codomain_file);
    map.pairing.assign(map.domain.size(), -1);
    std::ifstream in(pairing_file);
    if (!in) throw std::runtime_error("cannot open pairing file: " + pairing_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("z_index", 0) == 0) continue;
      const auto comma = line.find(',');
      map.pairing.at(std::stoi(line.substr(0, comma))) =
          std::stoi(line.substr(comma + 1));
    }
    map.validate();
    return map;
  }
  if (family == "identity") {
    CommonOptions gen = opt;
    gen.level = level;
    return besovcap::make_identity_map(resolve_cloud(gen));
  }
  if (family == "snowflake") return besovcap::make_snowflake_identity_map(level, opt.gamma);
  if (family == "kink") return besovcap::make_kink_inverse_map(level);
  throw std::invalid_argument("unknown --family '" + family + "'");
}

int run_qs(const CommonOptions& opt, const std::string& family,
           const std::string& levels_text, long budget, double rho, bool with_detector,
           const std::string& domain_file, const std::string& codomain_file,
           const std::string& pairing_file) {
  const fs::path dir = prepare_out(opt);
  std::vector<int> levels;
  if (pairing_file.empty())
    for (double v : parse_double_list(levels_text)) levels.push_back(static_cast<int>(v));
  else
    levels.push_back(0);  // ingested maps carry a single level

  json verdict;
  std::vector<double> h_per_level;
  json level_rows = json::array();
  for (int level : levels) {
    const besovcap::SampledMap map =
        resolve_map(opt, family, level, domain_file, codomain_file, pairing_file);
    const double h = besovcap::weak_qs_constant(map, budget, rho, opt.seed);
    h_per_level.push_back(h);

    const auto family_w =
        besovcap::lipschitz_test_family(map.codomain, 8, opt.seed + 1);
    const double theta_w = opt.theta;
    const double theta_z =
        family == "snowflake" ? opt.gamma * opt.theta : opt.theta;
    const besovcap::MorphismReport morphism =
        besovcap::besov_morphism_norm(map, family_w, theta_z, theta_w, opt.p);

    json row;
    row["level"] = level;
    row["H_hat"] = h;
    row["morphism_sup"] = morphism.sup;
    if (with_detector) {
      besovcap::DetectorOptions det;
      det.seed = opt.seed;
      det.n_configs = std::min(map.domain.size(), 64);
      det.tol = opt.tol;
      const besovcap::DetectorReport report = besovcap::qs_capacity_detector(
          map, besovcap::sharp_theta(map.domain, opt.p),
          besovcap::sharp_theta(map.codomain, opt.p), opt.p, det);
      row["detector"] = besovcap::detector_to_json(report);
    }
    level_rows.push_back(std::move(row));
  }

  verdict["H_hat"] = h_per_level;
  verdict["levels"] = level_rows;
  verdict["verdict"] = besovcap::to_string(besovcap::classify_trend(h_per_level));
  besovcap::write_text(dir / "verdict.json", verdict.dump(2) + "\n");

  json m = base_manifest("qs", opt);
  add_params_to_manifest(m, opt);
  m["family"] = pairing_file.empty() ? family : "ingested";
  m["levels"] = levels;
  m["triple_budget"] = budget;
  m["outputs"] = {"verdict.json"};
  write_manifest(dir, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic-filling Besov capacity toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOptions opt;

  CLI::App* gen = app.add_subcommand("gen", "generate a sampled metric measure space");
  add_space_flags(gen, opt);
  add_run_flags(gen, opt);

  CLI::App* fill = app.add_subcommand("fill", "build the hyperbolic filling graph");
  add_space_flags(fill, opt);
  add_filling_flags(fill, opt);
  add_energy_flags(fill, opt);
  add_run_flags(fill, opt);

  std::string e_list, f_list, arena = "cloud";
  CLI::App* cap = app.add_subcommand("cap", "condenser capacity by convex minimization");
  add_space_flags(cap, opt);
  add_filling_flags(cap, opt);
  add_energy_flags(cap, opt);
  add_run_flags(cap, opt);
  cap->add_option("--E", e_list, "comma-separated cloud indices of the 1-plate")->required();
  cap->add_option("--F", f_list, "comma-separated cloud indices of the 0-plate")->required();
  cap->add_option("--arena", arena, "cloud (Besov) or graph (Newton)");

  std::string case_mode = "auto", grid_text = "8,16,32,64";
  int x0_flag = -1;
  double fixed_R = 0.42, fixed_r = 0.004;
  CLI::App* scaling = app.add_subcommand("scaling", "annulus capacity scaling experiment");
  add_space_flags(scaling, opt);
  add_filling_flags(scaling, opt);
  add_energy_flags(scaling, opt);
  add_run_flags(scaling, opt);
  scaling->add_option("--case", case_mode, "auto|1|2|3");
  scaling->add_option("--x0", x0_flag, "annulus center index (-1 = medoid)");
  scaling->add_option("--R", fixed_R, "fixed outer radius (cases 2 and 3)");
  scaling->add_option("--r", fixed_r, "fixed inner radius (case 1)");
  scaling->add_option("--grid", grid_text,
                      "case 2: R/r ratios; case 1: R values; case 3: r values");

  double s_exponent = 1.0;
  std::string scales_text = "0.1,0.2,0.4";
  CLI::App* loewner = app.add_subcommand("loewner", "continua capacity lower-bound check");
  add_space_flags(loewner, opt);
  add_filling_flags(loewner, opt);
  add_energy_flags(loewner, opt);
  add_run_flags(loewner, opt);
  loewner->add_option("--s", s_exponent, "content dimension parameter");
  loewner->add_option("--x0", x0_flag, "window center index (-1 = medoid)");
  loewner->add_option("--scales", scales_text, "comma-separated window sizes R");

  std::string family = "identity", levels_text = "4,5,6";
  std::string domain_file, codomain_file, pairing_file;
  long budget = 200000;
  double rho = std::numeric_limits<double>::infinity();
  bool with_detector = false;
  CLI::App* qs = app.add_subcommand("qs", "quasisymmetry testing of sampled maps");
  add_space_flags(qs, opt);
  add_energy_flags(qs, opt);
  add_run_flags(qs, opt);
  qs->add_option("--family", family, "identity|snowflake|kink");
  qs->add_option("--levels", levels_text, "refinement levels to scan");
  qs->add_option("--budget", budget, "triple budget for sampled scanning");
  qs->add_option("--rho", rho, "locality radius (default: unrestricted)");
  qs->add_flag("--detector", with_detector, "run the capacity-distortion detector");
  qs->add_option("--domain", domain_file, "domain cloud JSON (ingestion mode)");
  qs->add_option("--codomain", codomain_file, "codomain cloud JSON (ingestion mode)");
  qs->add_option("--pairing", pairing_file, "pairing CSV z_index,w_index (ingestion mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(opt);
    if (fill->parsed()) return run_fill(opt);
    if (cap->parsed()) return run_cap(opt, e_list, f_list, arena);
    if (scaling->parsed())
      return run_scaling(opt, case_mode, x0_flag, fixed_R, fixed_r, grid_text);
    if (loewner->parsed()) return run_loewner(opt, x0_flag, s_exponent, scales_text);
    if (qs->parsed())
      return run_qs(opt, family, levels_text, budget, rho, with_detector, domain_file,
                    codomain_file, pairing_file);
  } catch (const std::exception& err) {
    std::cerr << "besovcap: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
