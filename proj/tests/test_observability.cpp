#include <doctest.h>

#include <random>
#include <vector>

#include "pmuplace/fixtures.hpp"
#include "pmuplace/io.hpp"
#include "pmuplace/observability.hpp"
#include "test_support.hpp"

using namespace pmuplace;

namespace {

const BoolArray kNone9 = BoolArray::Constant(9, false);

// Exhaustive witness search, independent of the matching code: recursively
// assigns each zero-injection bus a distinct healthy PMU, then checks load
// coverage directly.
bool oracle_zi_assign(const GridTopology& t, const std::vector<int>& zi,
                      std::size_t idx, const BoolArray& healthy, BoolArray used) {
  if (idx == zi.size()) return true;
  for (Index k = 0; k < t.n_buses; ++k) {
    if (!healthy[k] || used[k]) continue;
    if (!t.covers(zi[idx], static_cast<int>(k))) continue;
    BoolArray next = used;
    next[k] = true;
    if (oracle_zi_assign(t, zi, idx + 1, healthy, next)) return true;
  }
  return false;
}

bool oracle_observable(const GridTopology& t, const BoolArray& placement,
                       const BoolArray& compromised) {
  const BoolArray healthy = placement && !compromised;
  for (Index i = 0; i < t.n_buses; ++i) {
    if (!t.load[i]) continue;
    bool covered = false;
    for (Index k = 0; k < t.n_buses; ++k)
      if (healthy[k] && t.covers(static_cast<int>(i), static_cast<int>(k)))
        covered = true;
    if (!covered) return false;
  }
  std::vector<int> zi;
  for (Index i = 0; i < t.n_buses; ++i)
    if (t.zero_injection[i]) zi.push_back(static_cast<int>(i));
  return oracle_zi_assign(t, zi, 0, healthy, BoolArray::Constant(t.n_buses, false));
}

GridTopology path3(bool middle_zero_injection) {
  BoolArray zi = BoolArray::Constant(3, false);
  BoolArray load = BoolArray::Constant(3, true);
  if (middle_zero_injection) {
    zi[1] = true;
    load[1] = false;
  }
  return make_topology(3, {{0, 1, {1.0, -5.0}}, {1, 2, {1.0, -5.0}}}, zi, load);
}

}  // namespace

TEST_CASE("nine bus baseline placements") {
  const GridTopology t = load_grid(fixtures::ieee9_grid_document());

  SUBCASE("all buses placed is observable") {
    CHECK(check_observable(t, BoolArray::Constant(9, true), kNone9).first);
  }
  SUBCASE("empty placement is not") {
    CHECK_FALSE(check_observable(t, kNone9, kNone9).first);
  }
  SUBCASE("the initial placement {4,7} is observable and matches the oracle") {
    const BoolArray p = mask_from_buses({3, 6}, 9);
    CHECK(check_observable(t, p, kNone9).first);
    CHECK(oracle_observable(t, p, kNone9));
  }
  SUBCASE("compromising bus 4 breaks it") {
    const BoolArray p = mask_from_buses({3, 6}, 9);
    const BoolArray c = mask_from_buses({3}, 9);
    CHECK_FALSE(check_observable(t, p, c).first);
    CHECK_FALSE(oracle_observable(t, p, c));
  }
}

TEST_CASE("check_observable agrees with the exhaustive oracle") {
  std::mt19937_64 rng(5);
  int zi_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GridTopology t = testsupport::random_topology(rng, 5 + trial % 3, 2, 0.3);
    const BoolArray placement = testsupport::random_mask(rng, t.n_buses, 0.5);
    const BoolArray compromised =
        testsupport::random_mask(rng, t.n_buses, 0.2) && placement;
    bool has_zi = false;
    for (Index i = 0; i < t.n_buses; ++i) has_zi |= bool(t.zero_injection[i]);
    zi_cases += has_zi ? 1 : 0;
    CHECK(check_observable(t, placement, compromised).first ==
          oracle_observable(t, placement, compromised));
  }
  CHECK(zi_cases > 50);  // make sure the matching path is actually exercised
}

TEST_CASE("witness assignment is consistent") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const GridTopology t = testsupport::random_topology(rng, 6, 2, 0.4);
    const BoolArray placement = testsupport::random_mask(rng, 6, 0.6);
    const auto [ok, w] = check_observable(t, placement, BoolArray::Constant(6, false));
    for (Index i = 0; i < 6; ++i) {
      int monitors = 0;
      for (Index k = 0; k < 6; ++k) {
        if (!w.u(i, k)) continue;
        ++monitors;
        CHECK(placement[k]);
        CHECK(t.covers(static_cast<int>(i), static_cast<int>(k)));
        CHECK(t.zero_injection[i]);
      }
      CHECK(monitors <= 1);
    }
    if (ok) {
      // distinct monitors across zero-injection buses
      for (Index k = 0; k < 6; ++k) {
        int owners = 0;
        for (Index i = 0; i < 6; ++i) owners += w.u(i, k) ? 1 : 0;
        CHECK(owners <= 1);
      }
    }
  }
}

TEST_CASE("min_placement ground truth") {
  SUBCASE("nine bus fixture: {4,7} is the unique minimum") {
    const GridTopology t = load_grid(fixtures::ieee9_grid_document());
    const auto minima = min_placement(t);
    REQUIRE(minima.size() == 1);
    CHECK(buses_from_mask(minima[0]) == std::vector<int>{3, 6});
  }
  SUBCASE("single load bus needs its own PMU") {
    const GridTopology t = make_topology(1, {}, BoolArray::Constant(1, false),
                                         BoolArray::Constant(1, true));
    const auto minima = min_placement(t);
    REQUIRE(minima.size() == 1);
    CHECK(buses_from_mask(minima[0]) == std::vector<int>{0});
  }
  SUBCASE("three bus path without zero injection: centre bus suffices") {
    const auto minima = min_placement(path3(false));
    REQUIRE(minima.size() == 1);
    CHECK(buses_from_mask(minima[0]) == std::vector<int>{1});
  }
  SUBCASE("all minima really are minimal") {
    std::mt19937_64 rng(3);
    const GridTopology t = testsupport::random_topology(rng, 7, 2, 0.3);
    const auto minima = min_placement(t);
    REQUIRE(!minima.empty());
    const std::size_t k = buses_from_mask(minima[0]).size();
    const BoolArray none = BoolArray::Constant(7, false);
    // exhaustive re-check: nothing smaller works, everything reported works
    for (const auto& p : minima) {
      CHECK(buses_from_mask(p).size() == k);
      CHECK(check_observable(t, p, none).first);
    }
    int smaller_feasible = 0;
    for (int mask = 0; mask < (1 << 7); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) >= k) continue;
      BoolArray p = none;
      for (int b = 0; b < 7; ++b)
        if (mask & (1 << b)) p[b] = true;
      smaller_feasible += check_observable(t, p, none).first ? 1 : 0;
    }
    CHECK(smaller_feasible == 0);
  }
  SUBCASE("size guard") {
    std::mt19937_64 rng(1);
    const GridTopology big = testsupport::random_topology(rng, 21, 0);
    CHECK_THROWS_AS(min_placement(big), SizeError);
  }
}

TEST_CASE("zero injection modelling") {
  const GridTopology t = path3(true);

  SUBCASE("a PMU on the zero-injection bus monitors it directly") {
    CHECK(check_observable(t, mask_from_buses({1}, 3), BoolArray::Constant(3, false)).first);
  }
  SUBCASE("two zero-injection buses cannot share one monitor") {
    // star: centre 0 placed, leaves 1 and 2 zero-injection
    BoolArray zi = BoolArray::Constant(3, false);
    zi[1] = zi[2] = true;
    BoolArray load = BoolArray::Constant(3, false);
    load[0] = true;
    const GridTopology star = make_topology(
        3, {{0, 1, {1.0, -4.0}}, {0, 2, {1.0, -4.0}}}, zi, load);
    CHECK_FALSE(
        check_observable(star, mask_from_buses({0}, 3), BoolArray::Constant(3, false)).first);
    CHECK(
        check_observable(star, mask_from_buses({0, 1}, 3), BoolArray::Constant(3, false)).first);
  }
}

TEST_CASE("observability is monotone in placement and antitone in compromise") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const GridTopology t = testsupport::random_topology(rng, 6, 2, 0.3);
    const BoolArray none = BoolArray::Constant(6, false);
    BoolArray placement = testsupport::random_mask(rng, 6, 0.5);
    if (check_observable(t, placement, none).first) {
      BoolArray more = placement;
      std::uniform_int_distribution<int> pick(0, 5);
      more[pick(rng)] = true;
      CHECK(check_observable(t, more, none).first);
    } else {
      BoolArray compromised = testsupport::random_mask(rng, 6, 0.3) && placement;
      CHECK_FALSE(check_observable(t, placement, compromised).first);
    }
  }
}

TEST_CASE("survival probabilities") {
  const GridTopology t = load_grid(fixtures::ieee9_grid_document());
  const RiskMatrix risk = load_risk_csv_text(fixtures::ieee9_risk_csv());

  SUBCASE("no attack probability means certain survival") {
    const auto rep = prob_observability(t, BoolArray::Constant(9, true),
                                        Vector::Zero(9), risk.beta);
    CHECK(rep.per_bus.minCoeff() == 1.0);
    CHECK(rep.expected_surviving == doctest::Approx(9.0));
  }
  SUBCASE("certain direct attack on bus 4 exposes bus 7 through beta_47") {
    Vector attack = Vector::Zero(9);
    attack[3] = 1.0;
    const auto rep = prob_observability(t, mask_from_buses({3, 6}, 9), attack, risk.beta);
    CHECK(rep.per_bus[6] == doctest::Approx(1.0 - 0.002).epsilon(1e-12));
    CHECK(rep.per_bus[3] == doctest::Approx(0.0));
    CHECK(rep.per_bus[0] == 1.0);  // no PMU there
  }
  SUBCASE("two bus toy matches the hand expansion") {
    const GridTopology toy = make_topology(2, {{0, 1, {1.0, -5.0}}},
                                           BoolArray::Constant(2, false),
                                           BoolArray::Constant(2, true));
    Matrix beta(2, 2);
    beta << 1.0, 0.5, 0.5, 1.0;
    Vector attack(2);
    attack << 0.5, 0.0;
    const auto rep = prob_observability(toy, BoolArray::Constant(2, true), attack, beta);
    // bus 1: survives the direct attack only; bus 2: one indirect exposure
    CHECK(rep.per_bus[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.per_bus[1] == doctest::Approx(1.0 - 0.5 * 0.5).epsilon(1e-12));
    CHECK(rep.expected_surviving == doctest::Approx(0.5 + 0.75).epsilon(1e-12));
  }
}

TEST_CASE("repair augments the cheapest way") {
  const GridTopology t = load_grid(fixtures::ieee9_grid_document());
  const BoolArray p47 = mask_from_buses({3, 6}, 9);

  SUBCASE("nothing to repair") {
    const BoolArray r = repair_placement(t, p47, kNone9, 0.01);
    CHECK((r == p47).all());
  }
  SUBCASE("bus 4 compromised costs two extra PMUs") {
    const BoolArray r = repair_placement(t, p47, mask_from_buses({3}, 9), 0.01);
    CHECK(buses_from_mask(r).size() == 4);
    CHECK(check_observable(t, r, mask_from_buses({3}, 9)).first);
  }
  SUBCASE("both compromised costs four extra PMUs") {
    const BoolArray r = repair_placement(t, p47, mask_from_buses({3, 6}, 9), 0.01);
    CHECK(buses_from_mask(r).size() == 6);
  }
  SUBCASE("unrepairable when a load loses every possible coverer") {
    // place and compromise {1,4}: load bus 1 can only be covered from 1 or 4
    const BoolArray p = mask_from_buses({0, 3, 6}, 9);
    CHECK_THROWS_AS(repair_placement(t, p, mask_from_buses({0, 3}, 9), 0.01),
                    InfeasibleError);
  }
}
