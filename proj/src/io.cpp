#include "bipfunc/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bipfunc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const char* begin = s.data();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PointCloud read_cloud_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw std::runtime_error("empty point file: missing header");
  const auto header = split_commas(trim(line));
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": header must be x0,...,x{d-1}");
    }
  }
  dim = static_cast<int>(header.size());
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split_commas(t);
    if (static_cast<int>(cells.size()) != dim) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                               " columns, found " + std::to_string(cells.size()));
    }
    for (const auto& c : cells) flat.push_back(parse_double(c, line_no));
  }
  try {
    return PointCloud(dim, std::move(flat));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
}

PointCloud read_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return read_cloud_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  for (int k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << 'x' << k;
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_double(p[k]);
    out << '\n';
  }
}

nlohmann::json to_json(const PointCloud& cloud) {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"dim", cloud.dim()}, {"points", pts}};
}

PointCloud cloud_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<double> flat;
  for (const auto& p : j.at("points")) {
    if (static_cast<int>(p.size()) != dim) throw std::runtime_error("point of the wrong dimension");
    for (const auto& c : p) flat.push_back(c.get<double>());
  }
  return PointCloud(dim, std::move(flat));
}

nlohmann::json to_json(const BoxRegion& box) { return {{"lo", box.lo()}, {"hi", box.hi()}}; }

BoxRegion box_from_json(const nlohmann::json& j) {
  return BoxRegion(j.at("lo").get<Point>(), j.at("hi").get<Point>());
}

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json matched = nlohmann::json::array();
  for (auto [i, j] : r.matched) matched.push_back({i, j});
  return {
      {"schema_version", kSchemaVersion},
      {"cost", r.cost},
      {"matched", matched},
      {"boundary_x", r.boundary_x},
      {"boundary_y", r.boundary_y},
      {"unmatched_x", r.unmatched_x},
      {"unmatched_y", r.unmatched_y},
      {"exact", r.exact},
      {"augmented_x", r.augmented_x},
      {"augmented_y", r.augmented_y},
  };
}

nlohmann::json to_json(const BipartiteGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : g.edges) edges.push_back({i, j});
  return {{"n", g.n}, {"edges", edges}};
}

}  // namespace bipfunc
