#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mono/errors.hpp"
#include "mono/sl2z.hpp"

namespace mono {

enum class MoveDir : unsigned char { Left, Right };

// One elementary transformation: conjugate the pair at 1-based position
// (index, index+1). Right replaces (g, h) by (g h g^-1, g); Left is its
// inverse, replacing (g, h) by (h, h^-1 g h).
struct MoveRecord {
  std::size_t index = 0;  // 1-based, 1 <= index <= n-1
  MoveDir dir = MoveDir::Right;
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

// An ordered tuple of positive twists (conjugates of s1). The ordered product
// is the invariant of interest; elementary transformations permute within the
// same product class.
class Factorization {
 public:
  Factorization() = default;

  // Validates that every entry is a conjugate of s1.
  explicit Factorization(std::vector<Sl2z> entries)
      : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (!is_positive_twist(entries_[i]))
        throw InvariantViolationError(
            "factorization entry " + std::to_string(i + 1) +
            " is not a conjugate of s1");
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Sl2z>& entries() const { return entries_; }
  const Sl2z& operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  struct unchecked_t {};
  Factorization(unchecked_t, std::vector<Sl2z> entries)
      : entries_(std::move(entries)) {}

  std::vector<Sl2z> entries_;

  friend Factorization hurwitz_move(const Factorization&, std::size_t,
                                    MoveDir);
  friend Factorization canonical_form(long long, int, long long);
  friend Factorization append_twists(const Factorization&, long long);
  friend struct TestingAccess;  // test-only unchecked construction
};

// Left-to-right product; the empty product is the identity.
inline Sl2z product(const Factorization& f) {
  Sl2z r = Sl2z::identity();
  for (const Sl2z& g : f.entries()) r = r * g;
  return r;
}

inline Factorization hurwitz_move(const Factorization& f, std::size_t index,
                                  MoveDir dir) {
  const std::size_t n = f.size();
  if (index < 1 || index >= n)
    throw Error("move index " + std::to_string(index) +
                " out of range for length " + std::to_string(n));
  std::vector<Sl2z> e = f.entries();
  Sl2z& g = e[index - 1];
  Sl2z& h = e[index];
  if (dir == MoveDir::Right) {
    Sl2z conj = g * h * g.inverse();
    h = g;
    g = std::move(conj);
  } else {
    Sl2z conj = h.inverse() * g * h;
    g = h;
    h = std::move(conj);
  }
  return Factorization(Factorization::unchecked_t{}, std::move(e));
}

inline Factorization apply_moves(const Factorization& f,
                                 const std::vector<MoveRecord>& moves) {
  Factorization r = f;
  for (const MoveRecord& m : moves) r = hurwitz_move(r, m.index, m.dir);
  return r;
}

// ---------------------------------------------------------------------------
// Boundary shape and normal forms

// Global monodromy shape (s1 s2)^{3q} s1^k with q in {0,1}, k >= 0.
struct BoundaryType {
  int q = 0;
  BigInt k = 0;
  friend bool operator==(const BoundaryType&, const BoundaryType&) = default;
};

// Present iff the product is s1^k (q=0) or -s1^k (q=1) for some k >= 0.
inline std::optional<BoundaryType> boundary_type_of(const Sl2z& prod) {
  if (prod.b != 0) return std::nullopt;
  if (prod.a == 1 && prod.d == 1) {
    if (prod.c < 0) return std::nullopt;
    return BoundaryType{0, prod.c};
  }
  if (prod.a == -1 && prod.d == -1) {
    if (prod.c > 0) return std::nullopt;
    return BoundaryType{1, -prod.c};
  }
  return std::nullopt;
}

inline std::optional<BoundaryType> boundary_type(const Factorization& f) {
  return boundary_type_of(product(f));
}

// (s1, s2) repeated 6p+3q times, then k copies of s1. Length 12p+6q+k.
inline Factorization canonical_form(long long p, int q, long long k) {
  if (p < 0 || k < 0 || (q != 0 && q != 1))
    throw Error("canonical form requires p >= 0, q in {0,1}, k >= 0");
  std::vector<Sl2z> e;
  e.reserve(static_cast<std::size_t>(12 * p + 6 * q + k));
  for (long long i = 0; i < 6 * p + 3 * q; ++i) {
    e.push_back(s1());
    e.push_back(s2());
  }
  for (long long i = 0; i < k; ++i) e.push_back(s1());
  return Factorization(Factorization::unchecked_t{}, std::move(e));
}

struct NormalForm {
  long long p = 0;
  int q = 0;
  long long k = 0;
  Factorization canonical;
  // Optional explicit move sequence from the input to `canonical`, found by
  // the bounded orbit search; absent when no search was run or the budget
  // ran out. The certificate (p,q,k) is valid regardless.
  std::optional<std::vector<MoveRecord>> moves;

  std::size_t length() const {
    return static_cast<std::size_t>(12 * p + 6 * q + k);
  }
};

// Certificate extraction: reads (q,k) off the product and p off the length.
// Throws NotAdmissibleError when the product has neither admissible shape,
// and InvariantViolationError when n - 6q - k is not a non-negative multiple
// of 12 (impossible for genuine tuples of conjugates of s1).
inline NormalForm normalize(const Factorization& f) {
  auto bt = boundary_type(f);
  if (!bt)
    throw NotAdmissibleError(
        "global monodromy is not (s1 s2)^{3q} s1^k with k >= 0");
  const long long n = static_cast<long long>(f.size());
  if (bt->k > static_cast<long>(n))
    throw InvariantViolationError("boundary exponent exceeds length");
  const long long k = bt->k.get_si();
  const long long rem = n - 6 * bt->q - k;
  if (rem < 0 || rem % 12 != 0)
    throw InvariantViolationError(
        "length " + std::to_string(n) + " is incompatible with boundary (q=" +
        std::to_string(bt->q) + ", k=" + std::to_string(k) + ")");
  NormalForm nf;
  nf.p = rem / 12;
  nf.q = bt->q;
  nf.k = k;
  nf.canonical = canonical_form(nf.p, nf.q, nf.k);
  return nf;
}

// ---------------------------------------------------------------------------
// Equivalence decision

enum class Verdict : unsigned char { Equivalent, NotEquivalent, NotAdmissible };

struct EquivalenceResult {
  Verdict verdict = Verdict::NotAdmissible;
  std::string reason;

  explicit operator bool() const { return verdict == Verdict::Equivalent; }
};

inline std::string to_string(const BoundaryType& bt) {
  return "(q=" + std::to_string(bt.q) + ", k=" + bt.k.get_str() + ")";
}

// Two tuples with the same admissible boundary shape are related by
// elementary transformations iff they have the same length.
inline EquivalenceResult equivalent(const Factorization& f1,
                                    const Factorization& f2) {
  auto b1 = boundary_type(f1), b2 = boundary_type(f2);
  if (!b1 || !b2)
    return {Verdict::NotAdmissible,
            std::string("boundary shape absent for ") +
                (!b1 ? (!b2 ? "both inputs" : "first input") : "second input")};
  if (!(*b1 == *b2))
    return {Verdict::NotEquivalent,
            "boundary types differ: " + to_string(*b1) + " vs " +
                to_string(*b2)};
  if (f1.size() != f2.size())
    return {Verdict::NotEquivalent,
            "lengths differ: " + std::to_string(f1.size()) + " vs " +
                std::to_string(f2.size())};
  return {Verdict::Equivalent,
          "same boundary type " + to_string(*b1) + ", same length " +
              std::to_string(f1.size())};
}

// ---------------------------------------------------------------------------
// Seeded pseudorandom move sequences (test-data generator)

// Largest matrix entry in absolute value.
inline BigInt max_abs_entry_exact(const Factorization& f) {
  BigInt best = 0;
  for (const Sl2z& m : f.entries())
    for (const BigInt* e : {&m.a, &m.b, &m.c, &m.d}) {
      BigInt v = abs(*e);
      if (v > best) best = v;
    }
  return best;
}

// Attempts `steps` pseudorandom moves; deterministic for a fixed seed. A
// move that would push an entry past max_entry in absolute value is skipped
// (its draws still consume the seed stream): conjugation can double the bit
// length of the largest entry, so an uncapped walk grows entries
// exponentially in the number of steps. The inverse of the last accepted
// move always stays in range, so the walk never gets stuck. A factorization
// of length < 2 has no moves and is returned unchanged.
inline Factorization scramble(const Factorization& f, std::uint64_t seed,
                              std::size_t steps,
                              const BigInt& max_entry = BigInt(1) << 20) {
  if (f.size() < 2) return f;
  std::mt19937_64 rng(seed);
  Factorization r = f;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < steps; ++i) {
    const std::size_t idx = 1 + static_cast<std::size_t>(rng() % (n - 1));
    const MoveDir dir = (rng() & 1) ? MoveDir::Right : MoveDir::Left;
    Factorization moved = hurwitz_move(r, idx, dir);
    if (max_abs_entry_exact(moved) <= max_entry) r = std::move(moved);
  }
  return r;
}

}  // namespace mono
