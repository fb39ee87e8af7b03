#include "pmuplace/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace pmuplace {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    const auto b = field.find_last_not_of(" \t\r");
    fields.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return fields;
}

}  // namespace

GridTopology load_grid(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError("document", std::string("not valid JSON: ") + e.what());
  }

  if (!doc.contains("buses") || !doc["buses"].is_array() || doc["buses"].empty())
    throw ValidationError("buses", "non-empty array required");
  if (!doc.contains("branches") || !doc["branches"].is_array())
    throw ValidationError("branches", "array required");

  const Index n = static_cast<Index>(doc["buses"].size());
  BoolArray zero_injection = BoolArray::Constant(n, false);
  BoolArray load = BoolArray::Constant(n, false);
  std::vector<bool> seen(n, false);

  for (std::size_t i = 0; i < doc["buses"].size(); ++i) {
    const std::string path = "buses[" + std::to_string(i) + "]";
    const json& bus = doc["buses"][i];
    if (!bus.contains("id") || !bus["id"].is_number_integer())
      throw ValidationError(path + ".id", "integer id required");
    const long long id = bus["id"].get<long long>();
    if (id < 1 || id > n)
      throw ValidationError(path + ".id", "ids must cover 1.." + std::to_string(n));
    if (seen[id - 1]) throw ValidationError(path + ".id", "duplicate bus id");
    seen[id - 1] = true;
    zero_injection[id - 1] = bus.value("zero_injection", false);
    load[id - 1] = bus.value("load", false);
  }

  std::vector<Branch> branches;
  branches.reserve(doc["branches"].size());
  for (std::size_t i = 0; i < doc["branches"].size(); ++i) {
    const std::string path = "branches[" + std::to_string(i) + "]";
    const json& br = doc["branches"][i];
    for (const char* key : {"from", "to"})
      if (!br.contains(key) || !br[key].is_number_integer())
        throw ValidationError(path + "." + key, "integer bus id required");
    const long long from = br["from"].get<long long>();
    const long long to = br["to"].get<long long>();
    if (from < 1 || from > n)
      throw ValidationError(path + ".from", "dangling bus index " + std::to_string(from));
    if (to < 1 || to > n)
      throw ValidationError(path + ".to", "dangling bus index " + std::to_string(to));
    if (!br.contains("g") || !br.contains("b"))
      throw ValidationError(path, "admittance components g and b required");
    Branch out;
    out.from = static_cast<int>(from - 1);
    out.to = static_cast<int>(to - 1);
    out.admittance = Complex(br["g"].get<double>(), br["b"].get<double>());
    branches.push_back(out);
  }

  GridTopology topology =
      make_topology(n, std::move(branches), std::move(zero_injection), std::move(load));

  // Optional declared adjacency cross-checked against the derived one.
  if (doc.contains("adjacency")) {
    const json& adj = doc["adjacency"];
    if (!adj.is_array() || static_cast<Index>(adj.size()) != n)
      throw ValidationError("adjacency", "must be an n x n 0/1 array");
    for (Index i = 0; i < n; ++i) {
      if (!adj[i].is_array() || static_cast<Index>(adj[i].size()) != n)
        throw ValidationError("adjacency[" + std::to_string(i) + "]", "row length mismatch");
      for (Index k = 0; k < n; ++k) {
        const bool declared = adj[i][k].get<int>() != 0;
        const bool mirrored = adj[k][i].get<int>() != 0;
        if (declared != mirrored)
          throw ValidationError("adjacency[" + std::to_string(i) + "][" + std::to_string(k) + "]",
                                "declared adjacency is not symmetric");
        if (declared != topology.adjacency(i, k))
          throw ValidationError(
              "adjacency[" + std::to_string(i) + "][" + std::to_string(k) + "]",
              declared ? "declared edge has no branch" : "branch missing from declared adjacency");
      }
    }
  }
  return topology;
}

GridTopology load_grid_file(const std::string& path) { return load_grid(read_file(path)); }

RiskMatrix load_risk_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.size() < 2) throw ValidationError("risk", "header and data rows required");

  const std::size_t n = rows[0].size() - 1;
  if (n == 0 || rows.size() - 1 != n)
    throw ValidationError("risk", "expected square bus-by-bus layout");

  Matrix beta(n, n);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != n + 1)
      throw ValidationError("risk[row " + std::to_string(r) + "]", "column count mismatch");
    for (std::size_t c = 1; c <= n; ++c) {
      try {
        beta(r - 1, c - 1) = std::stod(rows[r][c]);
      } catch (const std::exception&) {
        throw ValidationError("risk[row " + std::to_string(r) + "]",
                              "not a number: " + rows[r][c]);
      }
    }
  }
  return RiskMatrix::from_matrix(std::move(beta));
}

RiskMatrix load_risk_csv(const std::string& path) {
  return load_risk_csv_text(read_file(path));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void emit_plot_data(const std::string& label_header, const std::string& value_header,
                    const std::vector<std::pair<std::string, double>>& rows,
                    const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("plot series must be non-empty");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << label_header << ',' << value_header << '\n';
  for (const auto& [label, value] : rows)
    out << label << ',' << format_double(value) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace pmuplace
