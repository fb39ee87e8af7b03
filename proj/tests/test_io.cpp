#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmuplace/fixtures.hpp"
#include "pmuplace/io.hpp"

using namespace pmuplace;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("shipped data files match the embedded fixtures") {
  const std::string data_dir = PMUPLACE_DATA_DIR;
  CHECK(slurp(data_dir + "/ieee9.grid") == fixtures::ieee9_grid_document());
  CHECK(slurp(data_dir + "/ieee9_risk.csv") == fixtures::ieee9_risk_csv());
}

TEST_CASE("grid document rejections name the offending field") {
  auto path_of = [](const std::string& doc) {
    try {
      load_grid(doc);
      return std::string("no error");
    } catch (const ValidationError& e) {
      return e.path();
    }
  };

  CHECK(path_of("not json") == "document");
  CHECK(path_of(R"({"branches": []})") == "buses");
  CHECK(path_of(R"({"buses": [{"id": 1}], "branches": [{"from": 1, "to": 2, "g": 0, "b": -1}]})") ==
        "branches[0].to");
  CHECK(path_of(R"({"buses": [{"id": 1}, {"id": 1}], "branches": []})") == "buses[1].id");
  CHECK(path_of(R"({"buses": [{"id": 1}, {"id": 2}],
                    "branches": [{"from": 1, "to": 2}]})") == "branches[0]");
  CHECK(path_of(R"({"buses": [{"id": 1}, {"id": 2}],
                    "branches": [{"from": 1, "to": 2, "g": 0, "b": -1}],
                    "adjacency": [[0, 1], [0, 0]]})") == "adjacency[0][1]");
}

TEST_CASE("declared adjacency must match the branch list") {
  const std::string good = R"({
    "buses": [{"id": 1}, {"id": 2}],
    "branches": [{"from": 1, "to": 2, "g": 0, "b": -1}],
    "adjacency": [[0, 1], [1, 0]]})";
  CHECK(load_grid(good).n_buses == 2);

  const std::string extra_edge = R"({
    "buses": [{"id": 1}, {"id": 2}, {"id": 3}],
    "branches": [{"from": 1, "to": 2, "g": 0, "b": -1}],
    "adjacency": [[0, 1, 1], [1, 0, 0], [1, 0, 0]]})";
  CHECK_THROWS_AS(load_grid(extra_edge), ValidationError);
}

TEST_CASE("risk csv loads the nine bus table") {
  const RiskMatrix r = load_risk_csv_text(fixtures::ieee9_risk_csv());
  REQUIRE(r.beta.rows() == 9);
  CHECK(r.beta(3, 6) == 0.002);  // row 4, column 7
  CHECK(r.beta(0, 0) == 1.0);
  CHECK(r.beta(8, 7) == 0.002);
}

TEST_CASE("risk csv validation") {
  CHECK_THROWS_AS(load_risk_csv_text("bus,1\n"), ValidationError);
  CHECK_THROWS_AS(load_risk_csv_text("bus,1,2\n1,1,0.5\n"), ValidationError);
  // diagonal must be one
  CHECK_THROWS_AS(load_risk_csv_text("bus,1,2\n1,0.9,0.5\n2,0.5,1\n"), ValidationError);
  // probabilities bounded
  CHECK_THROWS_AS(load_risk_csv_text("bus,1,2\n1,1,1.5\n2,0.5,1\n"), ValidationError);
  CHECK_THROWS_AS(load_risk_csv_text("bus,1,2\n1,1,x\n2,0.5,1\n"), ValidationError);
}

TEST_CASE("emit_plot_data writes deterministic csv") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "pmuplace_series_test.csv";
  emit_plot_data("stage", "value", {{"1", 1.5}, {"2", 2.25}}, path.string());
  CHECK(slurp(path.string()) == "stage,value\n1,1.5\n2,2.25\n");
  fs::remove(path);

  CHECK_THROWS_AS(emit_plot_data("stage", "value", {}, path.string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      emit_plot_data("stage", "value", {{"1", 1.0}}, "/nonexistent_dir_xyz/out.csv"),
      std::runtime_error);
}
