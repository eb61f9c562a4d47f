#include <set>

#include "doctest.h"
#include "mono/orbit.hpp"
#include "oracles.hpp"

using namespace mono;

namespace {

Factorization twists(std::initializer_list<oracles::Mat> mats) {
  std::vector<Sl2z> e;
  for (const auto& m : mats) e.push_back(oracles::to_sl2z(m));
  return Factorization(std::move(e));
}

}  // namespace

TEST_CASE("canonical start states are reached immediately") {
  const OrbitReport r = enumerate_orbit(canonical_form(0, 1, 0), 16, 1000);
  CHECK(r.canonical_reached);
  CHECK(r.states_visited == 1);
  REQUIRE(r.witness_moves);
  CHECK(r.witness_moves->empty());

  const OrbitReport empty = enumerate_orbit(Factorization{}, 4, 10);
  CHECK(empty.canonical_reached);
  CHECK(empty.states_visited == 1);
}

TEST_CASE("the reversed generator tuple reaches the canonical form") {
  const Factorization f = twists({oracles::kS2, oracles::kS1, oracles::kS2,
                                  oracles::kS1, oracles::kS2, oracles::kS1});
  CHECK(product(f) == sl2z(-1, 0, 0, -1));
  const OrbitReport r = enumerate_orbit(f, 20, 500000);
  CHECK(r.canonical_reached);
  REQUIRE(r.witness_moves);
  CHECK(apply_moves(f, *r.witness_moves) == canonical_form(0, 1, 0));
  CHECK(r.states_visited > 1);
}

TEST_CASE("witness moves replay from scrambles") {
  for (std::uint64_t seed : {3, 11, 27}) {
    const Factorization f = scramble(canonical_form(0, 1, 0), seed, 10);
    EscalationOptions opt;
    opt.node_budget = 500000;
    opt.max_bound = 512;
    const OrbitReport r = enumerate_orbit_escalating(f, opt);
    REQUIRE(r.canonical_reached);
    CHECK(apply_moves(f, *r.witness_moves) == canonical_form(0, 1, 0));

    const NormalForm nf = normalize_with_moves(f, opt);
    REQUIRE(nf.moves);
    CHECK(apply_moves(f, *nf.moves) == nf.canonical);
  }
  // A starved search leaves the certificate intact and the moves absent.
  const Factorization g = scramble(canonical_form(0, 1, 0), 3, 10);
  EscalationOptions tiny;
  tiny.node_budget = 2;
  const NormalForm starved = normalize_with_moves(g, tiny);
  CHECK(starved.q == 1);
  CHECK_FALSE(starved.moves);
}

TEST_CASE("inadmissible starts are rejected") {
  const Factorization perutz = twists({oracles::kS2, {3, -1, 4, -1}});
  CHECK_THROWS_AS(enumerate_orbit(perutz, 16, 100), NotAdmissibleError);
}

TEST_CASE("preconditions") {
  const Factorization f = canonical_form(0, 0, 2);
  CHECK_THROWS_AS(enumerate_orbit(f, 0, 100), Error);
  CHECK_THROWS_AS(enumerate_orbit(f, 1ll << 40, 100), Error);
  CHECK_THROWS_AS(enumerate_orbit(f, 16, 0), Error);
  // Bound below the largest start entry.
  const Factorization big = scramble(canonical_form(0, 1, 0), 5, 40);
  auto me = max_abs_entry(big);
  REQUIRE(me);
  if (*me > 2) CHECK_THROWS_AS(enumerate_orbit(big, 2, 100), Error);
}

TEST_CASE("budget exhaustion is a report, not an error") {
  const Factorization f = scramble(canonical_form(0, 1, 0), 1, 30);
  const OrbitReport r = enumerate_orbit(f, 64, 3);
  CHECK_FALSE(r.canonical_reached);
  CHECK_FALSE(r.frontier_exhausted);
  CHECK(r.states_visited <= 3);
}

TEST_CASE("a too-small bound exhausts the frontier; escalation recovers") {
  // Scrambles can push entries outside any fixed bound; with the bound
  // pinned at the start state's entries the canonical form may be
  // unreachable, which must be reported as an exhausted frontier.
  const Factorization f = scramble(canonical_form(0, 1, 1), 9, 60);
  auto me = max_abs_entry(f);
  REQUIRE(me);
  const OrbitReport tight = enumerate_orbit(f, *me, 2000000);
  if (!tight.canonical_reached) {
    CHECK(tight.frontier_exhausted);
    EscalationOptions opt;
    opt.initial_bound = *me;
    opt.max_bound = 4096;
    opt.node_budget = 2000000;
    const OrbitReport wide = enumerate_orbit_escalating(f, opt);
    CHECK(wide.canonical_reached);
    CHECK(wide.entry_bound_used > *me);
    CHECK(apply_moves(f, *wide.witness_moves) == canonical_form(0, 1, 1));
  }
}

TEST_CASE("worker count does not change the result") {
  const Factorization f = scramble(canonical_form(0, 1, 0), 21, 14);
  const OrbitReport r1 = enumerate_orbit(f, 48, 300000, 1);
  const OrbitReport r4 = enumerate_orbit(f, 48, 300000, 4);
  CHECK(r1.canonical_reached == r4.canonical_reached);
  CHECK(r1.states_visited == r4.states_visited);
  CHECK(r1.pruned_by_bound == r4.pruned_by_bound);
  CHECK(r1.frontier_exhausted == r4.frontier_exhausted);
  REQUIRE(r1.witness_moves);
  REQUIRE(r4.witness_moves);
  CHECK(*r1.witness_moves == *r4.witness_moves);

  // Same contract when the budget stops the search mid-level.
  const Factorization g = scramble(canonical_form(0, 1, 2), 4, 30);
  for (std::size_t budget : {200, 5000}) {
    const OrbitReport b1 = enumerate_orbit(g, 64, budget, 1);
    const OrbitReport b3 = enumerate_orbit(g, 64, budget, 3);
    CHECK(b1.canonical_reached == b3.canonical_reached);
    CHECK(b1.states_visited == b3.states_visited);
    CHECK(b1.pruned_by_bound == b3.pruned_by_bound);
    CHECK(b1.frontier_exhausted == b3.frontier_exhausted);
    CHECK(b1.witness_moves == b3.witness_moves);
  }
}

TEST_CASE("sweep recovers certificates and reaches small canonical forms") {
  SweepOptions opt;
  opt.max_p = 0;
  opt.max_k = 2;
  opt.seeds = 2;
  opt.scramble_steps = 25;
  opt.entry_bound = 48;
  opt.max_entry_bound = 512;
  opt.node_budget = 300000;
  const SweepSummary s = verify_theorem_sweep(opt);
  CHECK(s.rows.size() == 2 * 3 * 2);
  CHECK(s.all_certificates_ok());
  // Tuples of length <= 2 are rigid or near-rigid; those rows must reach.
  for (const SweepRow& row : s.rows)
    if (12 * row.p + 6 * row.q + row.k <= 2) CHECK(row.reach == Reach::Reached);
}

TEST_CASE("sweep can skip reachability") {
  SweepOptions opt;
  opt.max_p = 1;
  opt.max_k = 1;
  opt.seeds = 1;
  opt.scramble_steps = 120;
  opt.entry_bound = 0;
  const SweepSummary s = verify_theorem_sweep(opt);
  CHECK(s.rows.size() == 2 * 2 * 2);
  CHECK(s.all_certificates_ok());
  CHECK(s.skipped == s.rows.size());

  // One distinct scramble length per distinct value of 12p + 6q + k.
  std::set<long long> lengths, formulas;
  for (const SweepRow& row : s.rows) {
    formulas.insert(12 * row.p + 6 * row.q + row.k);
    lengths.insert(static_cast<long long>(
        scramble(canonical_form(row.p, row.q, row.k), row.seed,
                 opt.scramble_steps)
            .size()));
  }
  CHECK(lengths == formulas);
}
