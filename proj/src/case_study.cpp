#include "pmuplace/case_study.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pmuplace/fixtures.hpp"
#include "pmuplace/io.hpp"
#include "pmuplace/observability.hpp"

namespace pmuplace {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string path_label(const std::vector<int>& path) {
  if (path.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(path[i] + 1);
  }
  return s;
}

ordered_json buses_json(const BoolArray& mask) {
  ordered_json arr = ordered_json::array();
  for (int b : buses_from_mask(mask)) arr.push_back(b + 1);
  return arr;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_bundle(const ScenarioConfig& config, const GridTopology& topology,
                  const Ieee9Report& rep) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);

  {
    std::ostringstream csv;
    for (Index r = 0; r < rep.incidence.rows(); ++r) {
      for (Index c = 0; c < rep.incidence.cols(); ++c) {
        if (c) csv << ',';
        csv << rep.incidence(r, c);
      }
      csv << '\n';
    }
    write_text(dir / "incidence.csv", csv.str());
  }

  {
    ordered_json combos = ordered_json::array();
    for (const auto& path : rep.attack_combinations) {
      ordered_json alpha = ordered_json::array();
      for (Index i = 0; i < topology.n_buses; ++i) {
        const bool hit =
            std::find(path.begin(), path.end(), static_cast<int>(i)) != path.end();
        alpha.push_back(hit ? 1 : 0);
      }
      combos.push_back({{"buses", ordered_json::array()}, {"alpha", alpha}});
      for (int b : path) combos.back()["buses"].push_back(b + 1);
    }
    write_text(dir / "attack_combinations.json", combos.dump(2) + "\n");
  }

  for (std::size_t j = 0; j < rep.attack_combinations.size(); ++j) {
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t k = 0; k < rep.stale_distortion_series[j].size(); ++k)
      rows.emplace_back(std::to_string(k + 1), rep.stale_distortion_series[j][k]);
    emit_plot_data("stage", "value", rows,
                   (dir / ("fig3_direct_" + path_label(rep.attack_combinations[j]) + ".csv"))
                       .string());
  }

  {
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t j = 0; j < rep.attack_combinations.size(); ++j) {
      double expected = 0.0;
      for (Index i = 0; i < rep.bilevel.cost.rows(); ++i)
        if (rep.bilevel.placement_strategy[i] > 0)
          expected += rep.bilevel.placement_strategy[i] * rep.bilevel.cost(i, j);
      rows.emplace_back(path_label(rep.attack_combinations[j]), expected);
    }
    emit_plot_data("scenario", "pmu_count", rows, (dir / "fig4.csv").string());
  }

  emit_plot_data("scenario", "pmu_count",
                 {{"no_attack_minimum", rep.no_attack_cost},
                  {"game_equilibrium", rep.game_cost},
                  {"stale_minimum_under_attack", rep.conventional_cost}},
                 (dir / "table2.csv").string());

  {
    ordered_json eq;
    eq["expected_cost"] = rep.bilevel.expected_cost;
    eq["placement_actions"] = ordered_json::array();
    for (std::size_t i = 0; i < rep.bilevel.placements.size(); ++i) {
      if (rep.bilevel.placement_strategy[i] <= 0) continue;
      eq["placement_actions"].push_back(
          {{"buses", buses_json(rep.bilevel.placements[i])},
           {"probability", rep.bilevel.placement_strategy[i]}});
    }
    eq["attack_actions"] = ordered_json::array();
    for (std::size_t j = 0; j < rep.bilevel.attack_paths.size(); ++j) {
      if (rep.bilevel.attack_strategy[j] <= 0) continue;
      ordered_json buses = ordered_json::array();
      for (int b : rep.bilevel.attack_paths[j]) buses.push_back(b + 1);
      eq["attack_actions"].push_back(
          {{"buses", buses}, {"probability", rep.bilevel.attack_strategy[j]}});
    }
    eq["placement_marginals"] = ordered_json::array();
    eq["attack_marginals"] = ordered_json::array();
    for (Index b = 0; b < topology.n_buses; ++b) {
      eq["placement_marginals"].push_back(rep.bilevel.placement_marginals[b]);
      eq["attack_marginals"].push_back(rep.bilevel.attack_marginals[b]);
    }
    write_text(dir / "equilibrium.json", eq.dump(2) + "\n");
  }

  {
    ordered_json report;
    report["config"] = {{"sigma", config.sigma},
                        {"tau", rep.bilevel.tau},
                        {"stages", config.stages},
                        {"seed", config.seed}};
    report["reference_placement"] = buses_json(rep.reference_placement);
    report["minimum_placements"] = ordered_json::array();
    for (const auto& p : rep.minimum_placements)
      report["minimum_placements"].push_back(buses_json(p));
    report["costs"] = {{"no_attack_minimum", rep.no_attack_cost},
                       {"game_equilibrium", rep.game_cost},
                       {"stale_minimum_under_attack", rep.conventional_cost},
                       {"best_deterministic", rep.best_deterministic_cost}};
    write_text(dir / "report.json", report.dump(2) + "\n");
  }
}

}  // namespace

Ieee9Report reproduce_ieee9(const ScenarioConfig& config) {
  const GridTopology topology =
      config.grid_path.empty() ? load_grid(fixtures::ieee9_grid_document())
                               : load_grid_file(config.grid_path);
  const RiskMatrix risk = config.risk_path.empty()
                              ? load_risk_csv_text(fixtures::ieee9_risk_csv())
                              : load_risk_csv(config.risk_path);
  if (risk.beta.rows() != topology.n_buses)
    throw ValidationError("risk", "risk matrix size does not match bus count");

  Ieee9Report rep;
  rep.incidence = build_incidence(topology).rows;

  const IntMatrix& ref = fixtures::ieee9_reference_incidence();
  std::vector<std::pair<Index, Index>> diff;
  if (rep.incidence.rows() != ref.rows() || rep.incidence.cols() != ref.cols()) {
    throw ValidationError("incidence",
                          "matrix shape differs from the published reference");
  }
  for (Index r = 0; r < ref.rows(); ++r)
    for (Index c = 0; c < ref.cols(); ++c)
      if (rep.incidence(r, c) != ref(r, c)) diff.emplace_back(r, c);
  if (!diff.empty()) {
    std::string cells;
    for (const auto& [r, c] : diff)
      cells += " (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
    throw ValidationError("incidence", "divergent cells:" + cells);
  }

  rep.minimum_placements = min_placement(topology);
  if (rep.minimum_placements.empty())
    throw InfeasibleError("fixture admits no observable placement");
  rep.reference_placement = rep.minimum_placements.front();
  rep.no_attack_cost = static_cast<double>(
      buses_from_mask(rep.reference_placement).size());

  rep.attack_combinations = enumerate_attack_paths(rep.reference_placement);

  GameParams params;
  params.stages = config.stages;
  params.sigma = config.sigma;
  params.tau = config.tau;

  rep.bilevel = solve_bilevel(topology, risk, params);
  rep.game_cost = rep.bilevel.expected_cost;

  for (const auto& path : rep.attack_combinations) {
    BoolArray direct = BoolArray::Constant(topology.n_buses, false);
    for (int b : path) direct[b] = true;
    const auto payoffs =
        build_stage_payoffs(topology, rep.reference_placement, risk, direct,
                            config.stages, rep.bilevel.tau, config.sigma);
    std::vector<double> stale, repaired;
    for (const auto& s : payoffs) {
      stale.push_back(s.s12);
      repaired.push_back(s.s11);
    }
    rep.stale_distortion_series.push_back(std::move(stale));
    rep.repaired_distortion_series.push_back(std::move(repaired));
    rep.stage_games.push_back(solve_stopping_game(payoffs));
  }

  // Deterministic baselines from the cost matrix.
  Index ref_row = -1;
  for (std::size_t i = 0; i < rep.bilevel.placements.size(); ++i)
    if ((rep.bilevel.placements[i] == rep.reference_placement).all())
      ref_row = static_cast<Index>(i);
  if (ref_row < 0) throw std::logic_error("reference placement missing from pool");
  rep.conventional_cost = rep.bilevel.cost.row(ref_row).maxCoeff();
  rep.best_deterministic_cost = rep.bilevel.cost.rowwise().maxCoeff().minCoeff();

  if (!config.out_dir.empty()) write_bundle(config, topology, rep);
  return rep;
}

}  // namespace pmuplace
