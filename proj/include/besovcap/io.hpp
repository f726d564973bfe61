#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "besovcap/caplab.hpp"
#include "besovcap/energy.hpp"
#include "besovcap/filling.hpp"
#include "besovcap/point_cloud.hpp"
#include "besovcap/qs.hpp"
#include "besovcap/uniformize.hpp"

namespace besovcap {

using json = nlohmann::ordered_json;

json cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string format_double(double v);  // %.17g, round-trip safe

/// CSV of (index, coordinates..., weight).
std::string cloud_csv(const PointCloud& cloud);

/// Vertex table CSV: v_id,level,point_index plus mu_plus,mu_beta when
/// uniformized; edge table CSV: v_id,w_id plus ell_eps.
std::string vertex_table_csv(const FillingGraph& graph, const UniformizedGraph* ug);
std::string edge_table_csv(const FillingGraph& graph, const UniformizedGraph* ug);
json graph_to_json(const FillingGraph& graph, const UniformizedGraph* ug);

json solve_report_to_json(const SolveReport& report, double p, double theta,
                          const std::string& arena, int e_size, int f_size,
                          std::uint64_t seed);
std::string minimizer_csv(const SolveReport& report);

json codim_fit_to_json(const CodimFit& fit);

std::string scaling_csv(const ScalingReport& report);
json scaling_to_json(const ScalingReport& report);

json content_to_json(const ContentEstimate& est);
std::string loewner_csv(const LoewnerReport& report);
json loewner_to_json(const LoewnerReport& report);

json detector_to_json(const DetectorReport& report);

}  // namespace besovcap
