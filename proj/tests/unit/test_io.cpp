#include <doctest.h>

#include <limits>
#include <sstream>

#include "bipfunc/io.hpp"
#include "oracles.hpp"

using namespace bipfunc;

TEST_CASE("format_double round-trips") {
  StreamRng rng(51, 0);
  for (int t = 0; t < 1000; ++t) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, double(int(rng() % 40) - 20));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("CSV round trip") {
  StreamRng rng(52, 0);
  const auto c = oracle::random_cloud(rng, 3, 17, -2, 5);
  std::stringstream ss;
  write_cloud_csv(ss, c);
  CHECK(read_cloud_csv(ss) == c);

  std::istringstream blank_lines("\n x0 , x1 \n1,2\n\n3 , 4\n");
  const auto b = read_cloud_csv(blank_lines);
  CHECK(b.dim() == 2);
  CHECK(b.size() == 2);
  CHECK(b[1][0] == 3.0);
}

TEST_CASE("CSV errors name the line") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_cloud_csv(in);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("").find("header") != std::string::npos);
  CHECK(message("a,b\n1,2\n").find("line 1") != std::string::npos);
  CHECK(message("x0,x1\n1,2\n3\n").find("line 3") != std::string::npos);
  CHECK(message("x0,x1\n1,2\n3,abc\n").find("line 3") != std::string::npos);
  CHECK(message("x0\n1e5x\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(read_cloud_csv_file("/nonexistent/points.csv"), std::runtime_error);
}

TEST_CASE("JSON forms") {
  StreamRng rng(53, 0);
  const auto c = oracle::random_cloud(rng, 2, 5);
  CHECK(cloud_from_json(to_json(c)) == c);
  const auto box = BoxRegion::Cube(3, -1, 2);
  CHECK(box_from_json(to_json(box)) == box);
  // survives text serialization bit for bit
  CHECK(cloud_from_json(nlohmann::json::parse(to_json(c).dump())) == c);

  SolveResult r;
  r.cost = 1.25;
  r.matched = {{0, 1}};
  r.unmatched_y = {0};
  const auto j = to_json(r);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["cost"] == 1.25);
  CHECK(j["matched"][0][1] == 1);
  CHECK(j["exact"] == true);

  BipartiteGraph g{2, {{0, 0}, {1, 1}}};
  CHECK(to_json(g)["edges"].size() == 2);
}
