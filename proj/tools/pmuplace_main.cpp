#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmuplace/case_study.hpp"
#include "pmuplace/fixtures.hpp"
#include "pmuplace/io.hpp"
#include "pmuplace/observability.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace pmuplace;

// Exit codes: 0 ok, 2 validation, 3 infeasible, 4 internal.
constexpr int kOk = 0, kValidation = 2, kInfeasible = 3, kInternal = 4;

std::vector<int> parse_bus_list(const std::string& text, Index n_buses,
                                const std::string& flag) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const int id = std::stoi(item);
      if (id < 1 || id > n_buses)
        throw ValidationError(flag, "bus id " + item + " outside 1.." +
                                        std::to_string(n_buses));
      out.push_back(id - 1);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError(flag, "not a bus id: " + item);
    }
  }
  return out;
}

GridTopology load_topology(const std::string& grid_path) {
  return grid_path.empty() ? load_grid(fixtures::ieee9_grid_document())
                           : load_grid_file(grid_path);
}

RiskMatrix load_risk(const std::string& risk_path, Index n_buses) {
  if (risk_path.empty()) return RiskMatrix::identity(n_buses);
  RiskMatrix r = load_risk_csv(risk_path);
  if (r.beta.rows() != n_buses)
    throw ValidationError("risk", "risk matrix size does not match bus count");
  return r;
}

ordered_json vector_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json bus_ids_json(const BoolArray& mask) {
  ordered_json arr = ordered_json::array();
  for (int b : buses_from_mask(mask)) arr.push_back(b + 1);
  return arr;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

struct SharedFlags {
  std::string grid, risk, out;
  std::string placement, compromised, direct;
  double sigma = 0.01;
  double tau = 0.0;
  int stages = 5;
  std::uint64_t seed = 0;
  bool emit_csv = false;
};

int run_estimate(const SharedFlags& f) {
  const GridTopology topology = load_topology(f.grid);
  const BoolArray placement =
      mask_from_buses(parse_bus_list(f.placement, topology.n_buses, "--placement"),
                      topology.n_buses);
  const MeasurementSystem ms = build_measurement_system(topology, placement, f.sigma);

  // Noiseless flat-profile measurement: recovered exactly iff observable.
  Vector x0 = Vector::Zero(2 * topology.n_buses);
  x0.head(topology.n_buses).setOnes();
  const Vector z = ms.H * x0;
  const EstimateResult est = estimate_state(ms, z);

  ordered_json out;
  out["placement"] = bus_ids_json(placement);
  out["measurements"] = ms.d;
  out["phi_D"] = est.observable ? ordered_json(est.phi_d) : ordered_json("inf");
  out["observable"] = est.observable;
  out["x_hat"] = vector_json(est.x_hat);
  print_json(out);
  return kOk;
}

int run_observability(const SharedFlags& f) {
  const GridTopology topology = load_topology(f.grid);

  if (f.placement.empty()) {
    const auto minima = min_placement(topology);
    ordered_json out;
    out["minimum_cardinality"] =
        minima.empty() ? -1 : static_cast<int>(buses_from_mask(minima[0]).size());
    out["minimum_placements"] = ordered_json::array();
    for (const auto& p : minima) out["minimum_placements"].push_back(bus_ids_json(p));
    print_json(out);
    return minima.empty() ? kInfeasible : kOk;
  }

  const BoolArray placement =
      mask_from_buses(parse_bus_list(f.placement, topology.n_buses, "--placement"),
                      topology.n_buses);
  const BoolArray compromised =
      mask_from_buses(parse_bus_list(f.compromised, topology.n_buses, "--compromised"),
                      topology.n_buses);
  const auto [ok, witness] = check_observable(topology, placement, compromised);

  ordered_json out;
  out["observable"] = ok;
  out["placement"] = bus_ids_json(placement);
  out["compromised"] = bus_ids_json(compromised);
  out["coverage"] = ordered_json::array();
  for (Index i = 0; i < topology.n_buses; ++i) out["coverage"].push_back(witness.f[i]);
  out["zero_injection_monitors"] = ordered_json::array();
  for (Index i = 0; i < topology.n_buses; ++i) {
    if (!topology.zero_injection[i]) continue;
    int monitor = 0;
    for (Index k = 0; k < topology.n_buses; ++k)
      if (witness.u(i, k)) monitor = static_cast<int>(k) + 1;
    out["zero_injection_monitors"].push_back(
        {{"bus", i + 1}, {"monitor", monitor}, {"satisfied", bool(witness.z_satisfied[i])}});
  }
  print_json(out);
  return kOk;
}

int run_attack(const SharedFlags& f) {
  const GridTopology topology = load_topology(f.grid);
  const BoolArray placement =
      mask_from_buses(parse_bus_list(f.placement, topology.n_buses, "--placement"),
                      topology.n_buses);
  const BoolArray compromised =
      mask_from_buses(parse_bus_list(f.compromised, topology.n_buses, "--compromised"),
                      topology.n_buses);
  const MeasurementSystem ms = build_measurement_system(topology, placement, f.sigma);
  const double tau =
      f.tau > 0 ? f.tau : default_detection_threshold(f.sigma, 2 * ms.d);

  const AttackVector attack = design_attack(ms, compromised, tau);
  ordered_json out;
  out["tau"] = tau;
  out["a"] = vector_json(attack.a);
  out["support"] = attack.support;
  out["statistic"] = attack.statistic;
  out["objective"] = attack.objective;
  out["stealthy"] = attack.stealthy;
  print_json(out);
  return kOk;
}

ordered_json game_solution_json(const GameSolution& game) {
  ordered_json out;
  out["stages"] = game.stages;
  out["values"] = game.values;
  out["attacker_policy"] = ordered_json::array();
  out["operator_policy"] = ordered_json::array();
  out["stop_probability"] = game.stop_probability;
  out["no_stop_probability"] = game.no_stop_probability;
  out["payoffs"] = ordered_json::array();
  for (int k = 0; k < game.stages; ++k) {
    out["attacker_policy"].push_back(
        {{"attack", game.attacker_policy[k].first},
         {"no_attack", game.attacker_policy[k].second}});
    out["operator_policy"].push_back(
        {{"optimize", game.operator_policy[k].first},
         {"no_optimize", game.operator_policy[k].second}});
    const auto& s = game.payoffs[k];
    out["payoffs"].push_back({{"s11", s.s11},
                              {"s12", s.s12},
                              {"s21", s.s21},
                              {"s22", s.s22}});
  }
  return out;
}

int run_stage_game(const SharedFlags& f) {
  const GridTopology topology = load_topology(f.grid);
  const RiskMatrix risk = load_risk(f.risk, topology.n_buses);

  BoolArray placement;
  if (f.placement.empty()) {
    const auto minima = min_placement(topology);
    if (minima.empty()) throw InfeasibleError("no observable placement exists");
    placement = minima.front();
  } else {
    placement = mask_from_buses(
        parse_bus_list(f.placement, topology.n_buses, "--placement"), topology.n_buses);
  }
  const BoolArray direct = mask_from_buses(
      parse_bus_list(f.direct, topology.n_buses, "--direct"), topology.n_buses);

  const MeasurementSystem ms = build_measurement_system(topology, placement, f.sigma);
  const double tau =
      f.tau > 0 ? f.tau : default_detection_threshold(f.sigma, 2 * ms.d);

  const auto payoffs =
      build_stage_payoffs(topology, placement, risk, direct, f.stages, tau, f.sigma);
  const GameSolution game = solve_stopping_game(payoffs);

  ordered_json out = game_solution_json(game);
  out["placement"] = bus_ids_json(placement);
  out["direct"] = bus_ids_json(direct);
  out["tau"] = tau;
  print_json(out);

  if (f.emit_csv) {
    const std::filesystem::path dir = f.out.empty() ? "." : f.out;
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "stage_game.csv");
    csv << "k,value,attacker_p_attack,operator_p_optimize,s11,s12,s21,s22\n";
    for (int k = 0; k < game.stages; ++k) {
      const auto& s = game.payoffs[k];
      csv << (k + 1) << ',' << format_double(game.values[k]) << ','
          << format_double(game.attacker_policy[k].first) << ','
          << format_double(game.operator_policy[k].first) << ','
          << format_double(s.s11) << ',' << format_double(s.s12) << ','
          << format_double(s.s21) << ',' << format_double(s.s22) << '\n';
    }
  }
  return kOk;
}

int run_bilevel(const SharedFlags& f) {
  const GridTopology topology = load_topology(f.grid);
  const RiskMatrix risk = load_risk(f.risk, topology.n_buses);

  GameParams params;
  params.stages = f.stages;
  params.sigma = f.sigma;
  params.tau = f.tau;
  const BilevelGame game = solve_bilevel(topology, risk, params);

  ordered_json out;
  out["tau"] = game.tau;
  out["expected_cost"] = game.expected_cost;
  out["placements"] = ordered_json::array();
  for (std::size_t i = 0; i < game.placements.size(); ++i)
    out["placements"].push_back({{"buses", bus_ids_json(game.placements[i])},
                                 {"probability", game.placement_strategy[i]}});
  out["attack_paths"] = ordered_json::array();
  for (std::size_t j = 0; j < game.attack_paths.size(); ++j) {
    ordered_json buses = ordered_json::array();
    for (int b : game.attack_paths[j]) buses.push_back(b + 1);
    out["attack_paths"].push_back(
        {{"buses", buses}, {"probability", game.attack_strategy[j]}});
  }
  out["placement_marginals"] = vector_json(game.placement_marginals);
  out["attack_marginals"] = vector_json(game.attack_marginals);
  print_json(out);

  if (f.emit_csv) {
    const std::filesystem::path dir = f.out.empty() ? "." : f.out;
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "cost_matrix.csv");
    csv << "placement";
    for (const auto& path : game.attack_paths) {
      csv << ",attack";
      for (int b : path) csv << '_' << (b + 1);
    }
    csv << '\n';
    for (std::size_t i = 0; i < game.placements.size(); ++i) {
      const auto ids = buses_from_mask(game.placements[i]);
      for (std::size_t k = 0; k < ids.size(); ++k)
        csv << (k ? "+" : "") << (ids[k] + 1);
      for (Index j = 0; j < game.cost.cols(); ++j)
        csv << ',' << format_double(game.cost(i, j));
      csv << '\n';
    }

    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t j = 0; j < game.attack_paths.size(); ++j) {
      double expected = 0.0;
      for (Index i = 0; i < game.cost.rows(); ++i)
        if (game.placement_strategy[i] > 0)
          expected += game.placement_strategy[i] * game.cost(i, j);
      std::string label = "attack";
      for (int b : game.attack_paths[j]) label += "_" + std::to_string(b + 1);
      rows.emplace_back(label, expected);
    }
    emit_plot_data("scenario", "pmu_count", rows, (dir / "scenario_costs.csv").string());
  }
  return kOk;
}

int run_reproduce(const SharedFlags& f) {
  ScenarioConfig config;
  config.grid_path = f.grid;
  config.risk_path = f.risk;
  config.sigma = f.sigma;
  config.tau = f.tau;
  config.stages = f.stages;
  config.seed = f.seed;
  config.out_dir = f.out;

  const Ieee9Report rep = reproduce_ieee9(config);

  ordered_json out;
  out["incidence_matches_reference"] = true;
  out["reference_placement"] = bus_ids_json(rep.reference_placement);
  out["minimum_placements"] = ordered_json::array();
  for (const auto& p : rep.minimum_placements)
    out["minimum_placements"].push_back(bus_ids_json(p));
  out["attack_combinations"] = ordered_json::array();
  for (const auto& path : rep.attack_combinations) {
    ordered_json buses = ordered_json::array();
    for (int b : path) buses.push_back(b + 1);
    out["attack_combinations"].push_back(buses);
  }
  out["costs"] = {{"no_attack_minimum", rep.no_attack_cost},
                  {"game_equilibrium", rep.game_cost},
                  {"stale_minimum_under_attack", rep.conventional_cost},
                  {"best_deterministic", rep.best_deterministic_cost}};
  out["out_dir"] = f.out;
  print_json(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyber-risk-aware PMU placement solver"};
  app.require_subcommand(1);

  SharedFlags f;
  auto add_shared = [&f](CLI::App* cmd) {
    cmd->add_option("--grid", f.grid, "grid document (default: shipped 9-bus fixture)");
    cmd->add_option("--risk", f.risk, "risk propagation CSV");
    cmd->add_option("--sigma", f.sigma, "measurement noise, per-unit")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", f.tau, "detection threshold (default: 3-sigma rule)");
    cmd->add_option("--stages", f.stages, "game horizon K")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "rng seed echoed into reports");
    cmd->add_option("--out", f.out, "output directory for emitted files");
  };

  auto* estimate = app.add_subcommand("estimate", "WLS metric for one placement");
  add_shared(estimate);
  estimate->add_option("--placement", f.placement, "bus ids, e.g. 4,7");

  auto* obs = app.add_subcommand("observability", "topological observability check");
  add_shared(obs);
  obs->add_option("--placement", f.placement, "bus ids; omit to search minima");
  obs->add_option("--compromised", f.compromised, "compromised bus ids");

  auto* attack = app.add_subcommand("attack", "attacker-side computations");
  auto* design = attack->add_subcommand("design", "optimal stealthy injection");
  add_shared(design);
  design->add_option("--placement", f.placement, "bus ids")->required();
  design->add_option("--compromised", f.compromised, "compromised bus ids")->required();

  auto* stage = app.add_subcommand("stage-game", "level-1 stopping game");
  add_shared(stage);
  stage->add_option("--placement", f.placement, "bus ids; omit for the minimum placement");
  stage->add_option("--direct", f.direct, "directly attacked bus ids");
  stage->add_flag("--emit-csv", f.emit_csv, "write per-stage CSV");

  auto* bilevel_cmd = app.add_subcommand("bilevel", "level-2 placement-cost game");
  add_shared(bilevel_cmd);
  bilevel_cmd->add_flag("--emit-csv", f.emit_csv, "write cost matrix and scenario CSVs");

  auto* repro = app.add_subcommand("reproduce-ieee9", "run the full 9-bus pipeline");
  add_shared(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (estimate->parsed()) return run_estimate(f);
    if (obs->parsed()) return run_observability(f);
    if (attack->parsed()) {
      if (design->parsed()) return run_attack(f);
      std::cerr << "attack requires the design subcommand\n";
      return kValidation;
    }
    if (stage->parsed()) return run_stage_game(f);
    if (bilevel_cmd->parsed()) return run_bilevel(f);
    if (repro->parsed()) return run_reproduce(f);
    std::cerr << "no subcommand\n";
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const SizeError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
