#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mono/errors.hpp"
#include "mono/factorization.hpp"

namespace mono {

struct OrbitReport {
  std::size_t states_visited = 0;
  bool canonical_reached = false;
  bool frontier_exhausted = false;
  std::optional<std::vector<MoveRecord>> witness_moves;
  std::size_t pruned_by_bound = 0;
  long long entry_bound_used = 0;
};

namespace orbit_detail {

using I64 = std::int64_t;
using I128 = __int128;

// States are flattened entry sequences: 4 integers per matrix, row-major.
using FlatState = std::vector<I64>;

struct FlatHash {
  std::size_t operator()(const FlatState& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (I64 x : v) {
      std::uint64_t z = static_cast<std::uint64_t>(x) + h;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};

// 2x2 product with 128-bit accumulation. Inputs stay within the entry bound,
// so no intermediate here can overflow.
inline void mul128(const I128* x, const I128* y, I128* out) {
  out[0] = x[0] * y[0] + x[1] * y[2];
  out[1] = x[0] * y[1] + x[1] * y[3];
  out[2] = x[2] * y[0] + x[3] * y[2];
  out[3] = x[2] * y[1] + x[3] * y[3];
}

// Neighbor under the move (index, dir); false when an entry leaves the bound.
inline bool neighbor_state(const FlatState& s, std::size_t index, MoveDir dir,
                           I64 bound, FlatState& out) {
  const std::size_t ia = 4 * (index - 1), ib = 4 * index;
  I128 a[4] = {s[ia], s[ia + 1], s[ia + 2], s[ia + 3]};
  I128 b[4] = {s[ib], s[ib + 1], s[ib + 2], s[ib + 3]};
  I128 conj[4], tmp[4];
  if (dir == MoveDir::Right) {
    // (a, b) -> (a b a^-1, a)
    I128 ainv[4] = {a[3], -a[1], -a[2], a[0]};
    mul128(a, b, tmp);
    mul128(tmp, ainv, conj);
  } else {
    // (a, b) -> (b, b^-1 a b)
    I128 binv[4] = {b[3], -b[1], -b[2], b[0]};
    mul128(binv, a, tmp);
    mul128(tmp, b, conj);
  }
  for (int i = 0; i < 4; ++i)
    if (conj[i] > bound || conj[i] < -static_cast<I128>(bound)) return false;
  out = s;
  if (dir == MoveDir::Right) {
    for (int i = 0; i < 4; ++i) {
      out[ia + i] = static_cast<I64>(conj[i]);
      out[ib + i] = s[ia + i];
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      out[ia + i] = s[ib + i];
      out[ib + i] = static_cast<I64>(conj[i]);
    }
  }
  return true;
}

inline std::optional<I64> entry_as_i64(const BigInt& v, I64 limit) {
  if (!v.fits_slong_p()) return std::nullopt;
  const long x = v.get_si();
  if (x > limit || x < -limit) return std::nullopt;
  return static_cast<I64>(x);
}

inline std::optional<FlatState> flatten(const Factorization& f, I64 limit) {
  FlatState s;
  s.reserve(4 * f.size());
  for (const Sl2z& m : f.entries())
    for (const BigInt* e : {&m.a, &m.b, &m.c, &m.d}) {
      auto x = entry_as_i64(*e, limit);
      if (!x) return std::nullopt;
      s.push_back(*x);
    }
  return s;
}

}  // namespace orbit_detail

// Largest matrix entry in absolute value, when every entry fits in 63 bits.
inline std::optional<long long> max_abs_entry(const Factorization& f) {
  long long best = 0;
  for (const Sl2z& m : f.entries())
    for (const BigInt* e : {&m.a, &m.b, &m.c, &m.d}) {
      if (!e->fits_slong_p()) return std::nullopt;
      long long v = e->get_si();
      if (v < 0) v = -v;
      if (v > best) best = v;
    }
  return best;
}

inline constexpr long long kMaxOrbitEntryBound = 1ll << 30;

// Breadth-first enumeration of the states reachable from `start` by single
// elementary transformations, pruning states with an entry exceeding
// `entry_bound` in absolute value. Stops as soon as the canonical sequence of
// the start's certificate is stored, or the in-bound component is exhausted,
// or storing one more state would exceed `node_budget` (reported via
// frontier_exhausted = false, not an error).
//
// Deterministic: states are expanded level by level, within a level in
// storage order, and each state's neighbors in order (index ascending, Right
// before Left). Workers only partition the expansion of a level; the merge
// order is fixed, so the result is identical for every `jobs` value.
// Deduplication is sequential, so extra workers help only when neighbor
// generation dominates it (long factorizations).
inline OrbitReport enumerate_orbit(const Factorization& start,
                                   long long entry_bound,
                                   std::size_t node_budget, unsigned jobs = 1) {
  using namespace orbit_detail;

  NormalForm nf = normalize(start);  // throws when inadmissible
  if (node_budget < 1) throw Error("node budget must be at least 1");
  if (entry_bound < 1 || entry_bound > kMaxOrbitEntryBound)
    throw Error("entry bound must be in [1, 2^30]");
  if (jobs < 1) jobs = 1;

  auto start_flat = flatten(start, entry_bound);
  if (!start_flat)
    throw Error("entry bound is smaller than an entry of the start state");
  auto target_flat = flatten(nf.canonical, entry_bound);

  OrbitReport report;
  report.entry_bound_used = entry_bound;

  const std::size_t n = start.size();
  std::vector<FlatState> states;
  std::vector<std::pair<std::uint32_t, MoveRecord>> parent;

  // Deduplicate by index into `states` rather than by a second copy of the
  // entry sequence; the hasher and comparator look through the vector.
  struct IndexHash {
    const std::vector<FlatState>* states;
    std::size_t operator()(std::uint32_t i) const {
      return FlatHash{}((*states)[i]);
    }
  };
  struct IndexEq {
    const std::vector<FlatState>* states;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      return (*states)[a] == (*states)[b];
    }
  };
  std::unordered_set<std::uint32_t, IndexHash, IndexEq> index_of(
      0, IndexHash{&states}, IndexEq{&states});
  index_of.reserve(std::min<std::size_t>(node_budget, 1u << 22));

  states.push_back(*start_flat);
  parent.emplace_back(0, MoveRecord{});
  index_of.insert(0);
  report.states_visited = 1;

  std::uint32_t target_index = std::numeric_limits<std::uint32_t>::max();
  if (target_flat && states[0] == *target_flat) target_index = 0;

  bool budget_hit = report.states_visited >= node_budget &&
                    target_index == std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> level{0};

  struct Candidate {
    FlatState state;
    std::uint32_t parent;
    MoveRecord move;
    // Prune events between the previous candidate and this one, so the
    // running prune total at any stop point is chunking-independent.
    std::uint32_t prunes_before;
  };

  while (target_index == std::numeric_limits<std::uint32_t>::max() &&
         !budget_hit && !level.empty() && n >= 2) {
    std::vector<std::uint32_t> next;

    // Accepts one candidate of the level's deterministic expansion sequence
    // (state order, then index ascending, Right before Left); returns false
    // when the search must stop.
    auto consume = [&](FlatState&& state, std::uint32_t from, MoveRecord move,
                       std::uint32_t prunes_before) -> bool {
      report.pruned_by_bound += prunes_before;
      const auto idx = static_cast<std::uint32_t>(states.size());
      states.push_back(std::move(state));
      auto [it, inserted] = index_of.insert(idx);
      if (!inserted) {
        states.pop_back();
        return true;
      }
      parent.emplace_back(from, move);
      next.push_back(idx);
      ++report.states_visited;
      if (target_flat && states.back() == *target_flat) {
        target_index = idx;
        return false;
      }
      if (report.states_visited >= node_budget) {
        budget_hit = true;
        return false;
      }
      return true;
    };

    if (jobs == 1) {
      // Expand and merge in one pass; no candidate buffering.
      std::uint32_t prunes = 0;
      FlatState out;
      bool stop = false;
      for (std::size_t li = 0; li < level.size() && !stop; ++li) {
        const std::uint32_t si = level[li];
        for (std::size_t i = 1; i < n && !stop; ++i)
          for (MoveDir dir : {MoveDir::Right, MoveDir::Left}) {
            if (neighbor_state(states[si], i, dir, entry_bound, out)) {
              if (!consume(std::move(out), si, MoveRecord{i, dir}, prunes)) {
                stop = true;
                break;
              }
              prunes = 0;
            } else {
              ++prunes;
            }
          }
      }
      if (!stop) report.pruned_by_bound += prunes;
    } else {
      // Partition the level into chunks; chunks are merged in order
      // regardless of which worker computed them, so the consumed candidate
      // sequence is the same as in the single-worker pass. The chunk size
      // balances thread churn against buffered-candidate memory.
      const std::size_t chunk = std::clamp<std::size_t>(
          level.size() / (4 * jobs), 1024, 16384);
      const std::size_t num_chunks = (level.size() + chunk - 1) / chunk;
      std::vector<std::vector<Candidate>> buffers(num_chunks);
      std::vector<std::uint32_t> trailing_prunes(num_chunks, 0);

      auto expand_chunk = [&](std::size_t ci) {
        const std::size_t lo = ci * chunk;
        const std::size_t hi = std::min(level.size(), lo + chunk);
        auto& buf = buffers[ci];
        std::uint32_t prunes = 0;
        FlatState out;
        for (std::size_t li = lo; li < hi; ++li) {
          const std::uint32_t si = level[li];
          const FlatState& s = states[si];
          for (std::size_t i = 1; i < n; ++i)
            for (MoveDir dir : {MoveDir::Right, MoveDir::Left}) {
              if (neighbor_state(s, i, dir, entry_bound, out)) {
                buf.push_back(Candidate{out, si, MoveRecord{i, dir}, prunes});
                prunes = 0;
              } else {
                ++prunes;
              }
            }
        }
        trailing_prunes[ci] = prunes;
      };

      bool stop = false;
      for (std::size_t base = 0; base < num_chunks && !stop; base += jobs) {
        const std::size_t wave = std::min<std::size_t>(jobs, num_chunks - base);
        if (wave == 1) {
          expand_chunk(base);
        } else {
          std::vector<std::thread> workers;
          workers.reserve(wave);
          for (std::size_t w = 0; w < wave; ++w)
            workers.emplace_back(expand_chunk, base + w);
          for (auto& t : workers) t.join();
        }
        for (std::size_t w = 0; w < wave && !stop; ++w) {
          for (Candidate& cand : buffers[base + w]) {
            if (!consume(std::move(cand.state), cand.parent, cand.move,
                         cand.prunes_before)) {
              stop = true;
              break;
            }
          }
          if (!stop) report.pruned_by_bound += trailing_prunes[base + w];
          buffers[base + w].clear();
        }
      }
    }
    if (target_index != std::numeric_limits<std::uint32_t>::max() ||
        budget_hit)
      break;
    level = std::move(next);
  }

  if (target_index != std::numeric_limits<std::uint32_t>::max()) {
    report.canonical_reached = true;
    std::vector<MoveRecord> moves;
    for (std::uint32_t at = target_index; at != 0; at = parent[at].first)
      moves.push_back(parent[at].second);
    std::reverse(moves.begin(), moves.end());
    report.witness_moves = std::move(moves);
    report.frontier_exhausted = false;
  } else {
    report.frontier_exhausted = !budget_hit;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Escalating search

struct EscalationOptions {
  long long initial_bound = 0;  // 0: twice the largest start entry, min 16
  long long max_bound = 1ll << 11;
  std::size_t node_budget = 1'000'000;
  unsigned jobs = 1;
};

// Retries enumerate_orbit with doubled entry bounds until the canonical form
// is reached, the budget is hit, or the bound ceiling is exhausted. The
// returned counters are totals across attempts; entry_bound_used is the last
// bound tried.
inline OrbitReport enumerate_orbit_escalating(const Factorization& start,
                                              const EscalationOptions& opt) {
  auto max_entry = max_abs_entry(start);
  if (!max_entry || *max_entry > kMaxOrbitEntryBound)
    throw Error("start state entries exceed the bounded-search range");
  long long bound = opt.initial_bound > 0
                        ? std::max(opt.initial_bound, *max_entry)
                        : std::max<long long>(16, 2 * *max_entry);
  const long long ceiling = std::max(bound, opt.max_bound);
  std::size_t total_visited = 0, total_pruned = 0;
  for (;;) {
    OrbitReport r = enumerate_orbit(start, bound, opt.node_budget, opt.jobs);
    total_visited += r.states_visited;
    total_pruned += r.pruned_by_bound;
    r.states_visited = total_visited;
    r.pruned_by_bound = total_pruned;
    if (r.canonical_reached || !r.frontier_exhausted || bound >= ceiling)
      return r;
    bound = std::min(ceiling, bound * 2);
  }
}

// Best-effort witness for normalize(): the move sequence from `f` to its
// canonical form, absent when the search budget is exhausted.
inline std::optional<std::vector<MoveRecord>> find_normalizing_moves(
    const Factorization& f, const EscalationOptions& opt = {}) {
  OrbitReport r = enumerate_orbit_escalating(f, opt);
  return r.witness_moves;
}

// normalize() plus the bounded witness search; the certificate is always
// valid, the moves field stays empty when the search is inconclusive.
inline NormalForm normalize_with_moves(const Factorization& f,
                                       const EscalationOptions& opt = {}) {
  NormalForm nf = normalize(f);
  nf.moves = find_normalizing_moves(f, opt);
  return nf;
}

// ---------------------------------------------------------------------------
// Scramble/recover sweep

enum class Reach : unsigned char {
  Skipped,          // reachability check disabled
  Reached,          // canonical form reached by the bounded search
  BudgetExhausted,  // node budget ran out (inconclusive)
  BoundExhausted,   // in-bound component exhausted up to the ceiling
  EntryOverflow     // scrambled entries exceed the bounded-search range
};

struct SweepRow {
  long long p = 0;
  int q = 0;
  long long k = 0;
  std::uint64_t seed = 0;
  bool certificate_ok = false;
  Reach reach = Reach::Skipped;
  std::size_t states_visited = 0;
  long long entry_bound_used = 0;
};

struct SweepOptions {
  long long max_p = 1;
  long long max_k = 4;
  int seeds = 5;
  std::size_t scramble_steps = 200;
  long long entry_bound = 48;  // initial orbit bound; 0 disables reachability
  long long max_entry_bound = 768;
  std::size_t node_budget = 200'000;
  unsigned jobs = 1;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  std::size_t certificate_failures = 0;
  std::size_t reached = 0;
  std::size_t inconclusive = 0;
  std::size_t skipped = 0;

  bool all_certificates_ok() const { return certificate_failures == 0; }
};

// For every (p <= max_p, q in {0,1}, k <= max_k) and every seed, scrambles
// the canonical form and checks certificate recovery, then (optionally)
// canonical reachability by the bounded orbit search. Certificate failures
// would falsify the normal-form theorem; budget/bound exhaustion is merely
// inconclusive and reported separately.
inline SweepSummary verify_theorem_sweep(const SweepOptions& opt) {
  SweepSummary summary;
  for (long long p = 0; p <= opt.max_p; ++p)
    for (int q = 0; q <= 1; ++q)
      for (long long k = 0; k <= opt.max_k; ++k)
        for (int seed = 1; seed <= opt.seeds; ++seed) {
          SweepRow row;
          row.p = p;
          row.q = q;
          row.k = k;
          row.seed = static_cast<std::uint64_t>(seed);
          const Factorization canon = canonical_form(p, q, k);
          const Factorization f =
              scramble(canon, row.seed, opt.scramble_steps);
          NormalForm nf = normalize(f);
          row.certificate_ok = nf.p == p && nf.q == q && nf.k == k &&
                               nf.canonical == canon;
          if (!row.certificate_ok) ++summary.certificate_failures;

          if (opt.entry_bound == 0) {
            row.reach = Reach::Skipped;
            ++summary.skipped;
          } else {
            auto max_entry = max_abs_entry(f);
            if (!max_entry || *max_entry > kMaxOrbitEntryBound) {
              row.reach = Reach::EntryOverflow;
              ++summary.inconclusive;
            } else {
              EscalationOptions eopt;
              eopt.initial_bound = std::max(opt.entry_bound, *max_entry);
              eopt.max_bound = std::max(opt.max_entry_bound, eopt.initial_bound);
              eopt.node_budget = opt.node_budget;
              eopt.jobs = opt.jobs;
              OrbitReport r = enumerate_orbit_escalating(f, eopt);
              row.states_visited = r.states_visited;
              row.entry_bound_used = r.entry_bound_used;
              if (r.canonical_reached) {
                row.reach = Reach::Reached;
                ++summary.reached;
              } else if (r.frontier_exhausted) {
                row.reach = Reach::BoundExhausted;
                ++summary.inconclusive;
              } else {
                row.reach = Reach::BudgetExhausted;
                ++summary.inconclusive;
              }
            }
          }
          summary.rows.push_back(std::move(row));
        }
  return summary;
}

}  // namespace mono
