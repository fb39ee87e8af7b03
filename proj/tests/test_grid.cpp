#include <doctest.h>

#include <random>

#include "pmuplace/fixtures.hpp"
#include "pmuplace/grid.hpp"
#include "pmuplace/io.hpp"
#include "test_support.hpp"

using namespace pmuplace;

TEST_CASE("nine bus fixture loads with the expected structure") {
  const GridTopology t = load_grid(fixtures::ieee9_grid_document());
  CHECK(t.n_buses == 9);
  CHECK(t.branches.size() == 9);

  // generators at 1,2,3 hang off the ring through 4, 7 and 9
  CHECK(t.adjacent(0, 3));
  CHECK(t.adjacent(1, 6));
  CHECK(t.adjacent(2, 8));
  CHECK_FALSE(t.adjacent(0, 1));
  // seven load buses, no zero-injection flags in the fixture
  int loads = 0, zi = 0;
  for (Index i = 0; i < 9; ++i) {
    loads += t.load[i] ? 1 : 0;
    zi += t.zero_injection[i] ? 1 : 0;
  }
  CHECK(loads == 7);
  CHECK(zi == 0);
  CHECK_FALSE(t.load[2]);
  CHECK_FALSE(t.load[8]);
}

TEST_CASE("nine bus incidence reproduces the published matrix exactly") {
  const GridTopology t = load_grid(fixtures::ieee9_grid_document());
  const IncidenceMatrix inc = build_incidence(t);
  REQUIRE(inc.rows.rows() == 18);
  REQUIRE(inc.rows.cols() == 9);
  CHECK(inc.rows == fixtures::ieee9_reference_incidence());
}

TEST_CASE("two bus grid") {
  GridTopology t = make_topology(2, {{0, 1, {1.0, -5.0}}},
                                 BoolArray::Constant(2, false),
                                 BoolArray::Constant(2, true));
  CHECK(t.adjacency(0, 1));
  CHECK(t.adjacency(1, 0));
  CHECK_FALSE(t.adjacency(0, 0));

  const IncidenceMatrix inc = build_incidence(t);
  REQUIRE(inc.rows.rows() == 2);
  CHECK(inc.rows(0, 0) == 1);
  CHECK(inc.rows(0, 1) == -1);
  CHECK(inc.rows(1, 0) == -1);
  CHECK(inc.rows(1, 1) == 1);
}

TEST_CASE("validation failures carry field paths") {
  CHECK_THROWS_AS(make_topology(9, {{0, 11, {1.0, -5.0}}},
                                BoolArray::Constant(9, false),
                                BoolArray::Constant(9, true)),
                  ValidationError);
  CHECK_THROWS_AS(make_topology(3, {{0, 1, {1.0, -5.0}}, {1, 0, {1.0, -5.0}}},
                                BoolArray::Constant(3, false),
                                BoolArray::Constant(3, false)),
                  ValidationError);
  CHECK_THROWS_AS(make_topology(2, {{0, 0, {1.0, -5.0}}},
                                BoolArray::Constant(2, false),
                                BoolArray::Constant(2, false)),
                  ValidationError);

  BoolArray both = BoolArray::Constant(2, true);
  CHECK_THROWS_AS(make_topology(2, {{0, 1, {1.0, -5.0}}}, both, both),
                  ValidationError);

  try {
    make_topology(9, {{0, 11, {1.0, -5.0}}}, BoolArray::Constant(9, false),
                  BoolArray::Constant(9, true));
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "branches[0].to");
  }
}

TEST_CASE("incidence properties on random topologies") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const GridTopology t = testsupport::random_topology(rng, 4 + trial % 6, trial % 3);
    const IncidenceMatrix inc = build_incidence(t);

    CHECK(inc.rows.rows() == 2 * static_cast<Index>(t.branches.size()));
    for (Index r = 0; r < inc.rows.rows(); ++r) {
      CHECK(inc.rows.row(r).sum() == 0);
      int plus = 0, minus = 0;
      for (Index c = 0; c < inc.rows.cols(); ++c) {
        if (inc.rows(r, c) == 1) ++plus;
        if (inc.rows(r, c) == -1) ++minus;
      }
      CHECK(plus == 1);
      CHECK(minus == 1);
    }

    const auto adj = adjacency_from_incidence(inc, t.n_buses);
    CHECK((adj == t.adjacency).all());
  }
}

TEST_CASE("incidence is permutation equivariant") {
  std::mt19937_64 rng(11);
  const GridTopology t = testsupport::random_topology(rng, 6, 2);

  std::vector<int> perm{3, 0, 5, 1, 4, 2};
  std::vector<Branch> permuted;
  for (const auto& br : t.branches)
    permuted.push_back({perm[br.from], perm[br.to], br.admittance});
  BoolArray zi(6), load(6);
  for (int i = 0; i < 6; ++i) {
    zi[perm[i]] = t.zero_injection[i];
    load[perm[i]] = t.load[i];
  }
  const GridTopology tp = make_topology(6, permuted, zi, load);

  const IncidenceMatrix a = build_incidence(t);
  const IncidenceMatrix b = build_incidence(tp);
  for (Index r = 0; r < a.rows.rows(); ++r)
    for (Index c = 0; c < 6; ++c) CHECK(a.rows(r, c) == b.rows(r, perm[c]));
}
