#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;
};

// Runs the CLI binary, capturing stdout (stderr folded in).
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PMUPLACE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    output.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string data_path(const std::string& name) {
  return std::string(PMUPLACE_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("estimate subcommand") {
  const auto res = run_cli("estimate --grid " + data_path("ieee9.grid") +
                           " --placement 4,7 --sigma 0.01");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"phi_D\": \"inf\"") != std::string::npos);
  CHECK(res.output.find("\"observable\": false") != std::string::npos);

  const auto full = run_cli("estimate --placement 4,7,9 --sigma 0.01");
  CHECK(full.exit_code == 0);
  CHECK(full.output.find("\"observable\": true") != std::string::npos);
}

TEST_CASE("observability subcommand") {
  const auto search = run_cli("observability");
  CHECK(search.exit_code == 0);
  CHECK(search.output.find("\"minimum_cardinality\": 2") != std::string::npos);

  const auto verdict = run_cli("observability --placement 4,7 --compromised 4");
  CHECK(verdict.exit_code == 0);
  CHECK(verdict.output.find("\"observable\": false") != std::string::npos);
}

TEST_CASE("attack design subcommand") {
  const auto res = run_cli("attack design --placement 4,7 --compromised 4 --tau 0.1");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"stealthy\": true") != std::string::npos);
  CHECK(res.output.find("\"objective\"") != std::string::npos);
}

TEST_CASE("stage game subcommand emits csv") {
  const fs::path dir = fs::temp_directory_path() / "pmuplace_cli_stage";
  fs::remove_all(dir);
  const auto res = run_cli("stage-game --risk " + data_path("ieee9_risk.csv") +
                           " --direct 4 --stages 4 --emit-csv --out " + dir.string());
  CHECK(res.exit_code == 0);
  std::ifstream csv(dir / "stage_game.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,value,attacker_p_attack,operator_p_optimize,s11,s12,s21,s22");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 4);
  fs::remove_all(dir);
}

TEST_CASE("bilevel subcommand") {
  const auto res = run_cli("bilevel --risk " + data_path("ieee9_risk.csv") +
                           " --stages 3");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"expected_cost\"") != std::string::npos);
  CHECK(res.output.find("\"placement_marginals\"") != std::string::npos);
}

TEST_CASE("reproduce subcommand writes the bundle") {
  const fs::path dir = fs::temp_directory_path() / "pmuplace_cli_repro";
  fs::remove_all(dir);
  const auto res = run_cli("reproduce-ieee9 --out " + dir.string());
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "incidence.csv"));
  CHECK(fs::exists(dir / "table2.csv"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  SUBCASE("validation failures exit 2") {
    CHECK(run_cli("estimate --placement 4,12").exit_code == 2);
    CHECK(run_cli("estimate --grid /nonexistent.grid --placement 4").exit_code == 2);
    CHECK(run_cli("nonsense-subcommand").exit_code == 2);
    CHECK(run_cli("estimate --placement 4 --sigma -1").exit_code == 2);
  }
  SUBCASE("infeasible problems exit 3") {
    // single load bus: the attacker burns the only possible PMU position and
    // no augmentation can restore coverage
    const fs::path tmp = fs::temp_directory_path() / "pmuplace_single.grid";
    {
      std::ofstream out(tmp);
      out << R"({"buses": [{"id": 1, "load": true}], "branches": []})";
    }
    const auto bil = run_cli("bilevel --grid " + tmp.string() + " --stages 2");
    CHECK(bil.exit_code == 3);
    fs::remove(tmp);
  }
  SUBCASE("help exits 0") {
    CHECK(run_cli("--help").exit_code == 0);
  }
}

TEST_CASE("outputs are byte identical for a fixed seed") {
  const auto a = run_cli("stage-game --risk " + data_path("ieee9_risk.csv") +
                         " --direct 4,7 --stages 3 --seed 7");
  const auto b = run_cli("stage-game --risk " + data_path("ieee9_risk.csv") +
                         " --direct 4,7 --stages 3 --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}
