#include "besovcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace besovcap {

namespace {

std::string kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::snowflake: return "snowflake";
    default: return "explicit-matrix";
  }
}

MetricKind kind_from_name(const std::string& name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "snowflake") return MetricKind::snowflake;
  if (name == "explicit-matrix") return MetricKind::explicit_matrix;
  throw std::invalid_argument("cloud_from_json: unknown metric_kind '" + name + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

json cloud_to_json(const PointCloud& cloud) {
  json j;
  j["metric_kind"] = kind_name(cloud.kind);
  if (cloud.kind == MetricKind::snowflake) j["gamma"] = cloud.gamma;
  j["points"] = cloud.points;
  j["weights"] = cloud.weights;
  j["diam"] = cloud.diam;
  if (cloud.analytic_dim > 0.0) j["analytic_dim"] = cloud.analytic_dim;
  if (cloud.kind == MetricKind::explicit_matrix) j["dist"] = cloud.dist;
  return j;
}

PointCloud cloud_from_json(const json& j) {
  PointCloud cloud;
  cloud.kind = kind_from_name(j.at("metric_kind").get<std::string>());
  if (j.contains("gamma")) cloud.gamma = j.at("gamma").get<double>();
  if (j.contains("points")) cloud.points = j.at("points").get<std::vector<std::vector<double>>>();
  cloud.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("analytic_dim")) cloud.analytic_dim = j.at("analytic_dim").get<double>();
  if (cloud.kind == MetricKind::explicit_matrix)
    cloud.dist = j.at("dist").get<std::vector<double>>();
  cloud.finalize();
  if (cloud.kind == MetricKind::explicit_matrix) validate_metric(cloud, 512, 2024);
  return cloud;
}

std::string cloud_csv(const PointCloud& cloud) {
  std::string out = "index";
  const std::size_t dims = cloud.points.empty() ? 0 : cloud.points[0].size();
  for (std::size_t d = 0; d < dims; ++d) out += ",x" + std::to_string(d);
  out += ",weight\n";
  for (int i = 0; i < cloud.size(); ++i) {
    out += std::to_string(i);
    for (std::size_t d = 0; d < dims; ++d) out += "," + format_double(cloud.points[i][d]);
    out += "," + format_double(cloud.weights[i]) + "\n";
  }
  return out;
}

std::string vertex_table_csv(const FillingGraph& graph, const UniformizedGraph* ug) {
  std::string out = ug ? "v_id,level,point_index,mu_plus,mu_beta\n" : "v_id,level,point_index\n";
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    out += std::to_string(v) + "," + std::to_string(graph.vertices[v].level) + "," +
           std::to_string(graph.vertices[v].point);
    if (ug)
      out += "," + format_double(ug->mu_plus[v]) + "," + format_double(ug->mu_beta[v]);
    out += "\n";
  }
  return out;
}

std::string edge_table_csv(const FillingGraph& graph, const UniformizedGraph* ug) {
  std::string out = ug ? "v_id,w_id,ell_eps\n" : "v_id,w_id\n";
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    out += std::to_string(graph.edges[e].first) + "," + std::to_string(graph.edges[e].second);
    if (ug) out += "," + format_double(ug->edge_lengths[e]);
    out += "\n";
  }
  return out;
}

json graph_to_json(const FillingGraph& graph, const UniformizedGraph* ug) {
  json j;
  j["alpha"] = graph.alpha;
  j["tau"] = graph.tau;
  j["depth"] = graph.depth;
  j["root"] = graph.root;
  json verts = json::array();
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    json jv;
    jv["id"] = v;
    jv["level"] = graph.vertices[v].level;
    jv["point"] = graph.vertices[v].point;
    if (ug) {
      jv["mu_plus"] = ug->mu_plus[v];
      jv["mu_beta"] = ug->mu_beta[v];
    }
    verts.push_back(std::move(jv));
  }
  j["vertices"] = std::move(verts);
  json edges = json::array();
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    json je = json::array({graph.edges[e].first, graph.edges[e].second});
    if (ug) je.push_back(ug->edge_lengths[e]);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  if (ug) {
    j["beta"] = ug->params.beta;
    j["epsilon"] = ug->params.epsilon;
    j["boundary_reps"] = ug->boundary_reps;
  }
  return j;
}

json solve_report_to_json(const SolveReport& report, double p, double theta,
                          const std::string& arena, int e_size, int f_size,
                          std::uint64_t seed) {
  json j;
  j["value"] = report.value;
  j["iterations"] = report.iterations;
  j["optimality"] = report.final_optimality;
  j["converged"] = report.converged;
  j["p"] = p;
  j["theta"] = theta;
  j["arena"] = arena;
  j["E_size"] = e_size;
  j["F_size"] = f_size;
  j["seed"] = seed;
  return j;
}

std::string minimizer_csv(const SolveReport& report) {
  std::string out = "id,value\n";
  for (std::size_t i = 0; i < report.minimizer.size(); ++i)
    out += std::to_string(i) + "," + format_double(report.minimizer[i]) + "\n";
  return out;
}

json codim_fit_to_json(const CodimFit& fit) {
  json j;
  j["slope"] = fit.flagged && !std::isfinite(fit.slope) ? json() : json(fit.slope);
  j["residual"] = fit.residual;
  j["n_samples"] = fit.n_samples;
  j["radii"] = fit.radii;
  j["flagged"] = fit.flagged;
  return j;
}

std::string scaling_csv(const ScalingReport& report) {
  std::string out = "r,R,case,capacity,predicted,testfn_energy,status\n";
  for (const auto& row : report.rows) {
    out += format_double(row.r) + "," + format_double(row.R) + "," +
           std::to_string(row.case_tag) + "," + format_double(row.capacity) + "," +
           format_double(row.predicted) + "," + format_double(row.testfn_energy) + "," +
           row.status + "\n";
  }
  return out;
}

json scaling_to_json(const ScalingReport& report) {
  json j;
  j["case"] = report.case_tag;
  j["p"] = report.p;
  j["theta"] = report.theta;
  j["Q"] = report.Q;
  j["fit_variable"] = report.fit_variable;
  j["fitted_exponent"] = report.fitted_exponent;
  j["target_exponent"] = report.target_exponent;
  if (report.case_tag == 2) {
    j["alt_target_exponent"] = report.alt_target_exponent;
    j["alt_matches_better"] = report.alt_matches_better;
  }
  j["residual"] = report.residual;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json jr;
    jr["r"] = row.r;
    jr["R"] = row.R;
    jr["capacity"] = row.capacity;
    jr["predicted"] = row.predicted;
    jr["testfn_energy"] = row.testfn_energy;
    if (std::isfinite(row.gradbound_energy)) jr["gradbound_energy"] = row.gradbound_energy;
    jr["status"] = row.status;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

json content_to_json(const ContentEstimate& est) {
  json j;
  j["s"] = est.s;
  j["value"] = est.value;
  j["method"] = est.method;
  json cover = json::array();
  for (const auto& [center, radius] : est.cover)
    cover.push_back(json::array({center, radius}));
  j["cover"] = std::move(cover);
  return j;
}

std::string loewner_csv(const LoewnerReport& report) {
  std::string out = "R,contentE,contentF,lower_bound,capacity,ratio,status\n";
  for (const auto& row : report.rows) {
    out += format_double(row.R) + "," + format_double(row.contentE) + "," +
           format_double(row.contentF) + "," + format_double(row.lower_bound) + "," +
           format_double(row.capacity) + "," + format_double(row.ratio) + "," + row.status +
           "\n";
  }
  return out;
}

json loewner_to_json(const LoewnerReport& report) {
  json j;
  j["s"] = report.s;
  j["theta"] = report.theta;
  j["p"] = report.p;
  j["c_min"] = report.c_min;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json jr;
    jr["R"] = row.R;
    jr["contentE"] = row.contentE;
    jr["contentF"] = row.contentF;
    jr["lower_bound"] = row.lower_bound;
    jr["capacity"] = row.capacity;
    jr["ratio"] = row.ratio;
    jr["status"] = row.status;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

json detector_to_json(const DetectorReport& report) {
  json j;
  j["max_measured_ratio"] = report.max_measured_ratio;
  j["max_implied_pm1"] = report.max_implied_pm1;
  j["max_implied_p"] = report.max_implied_p;
  j["max_probe"] = report.max_probe;
  j["max_violation"] = report.max_violation;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json jr;
    jr["x"] = row.x;
    jr["y"] = row.y;
    jr["z"] = row.z;
    jr["r"] = row.r;
    jr["R"] = row.R;
    jr["L"] = row.L;
    jr["l"] = row.l;
    jr["measured_ratio"] = row.measured_ratio;
    jr["cap_annulus_w"] = row.cap_annulus_w;
    jr["cap_chains_z"] = row.cap_chains_z;
    jr["probe"] = row.probe;
    jr["implied_pm1"] = row.implied_pm1;
    jr["implied_p"] = row.implied_p;
    jr["violation"] = row.violation;
    jr["status"] = row.status;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace besovcap
