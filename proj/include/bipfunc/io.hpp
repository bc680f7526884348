#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bipfunc/geometry.hpp"
#include "bipfunc/graph_opt.hpp"
#include "bipfunc/matching.hpp"

namespace bipfunc {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal text that reads back to the same double; locale free.
std::string format_double(double v);

// CSV with header "x0,...,x{d-1}" and one row per point. Throws
// std::runtime_error naming the line on malformed input.
PointCloud read_cloud_csv(std::istream& in);
PointCloud read_cloud_csv_file(const std::string& path);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

nlohmann::json to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BoxRegion& box);
BoxRegion box_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const BipartiteGraph& g);

}  // namespace bipfunc
