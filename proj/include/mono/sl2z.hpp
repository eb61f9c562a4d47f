#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mono/errors.hpp"

namespace mono {

using BigInt = mpz_class;

inline BigInt to_bigint(long long v) {
  static_assert(sizeof(long) == sizeof(long long), "LP64 assumed");
  return BigInt(static_cast<long>(v));
}

// Row-major 2x2 matrix [[a,b],[c,d]] over an exact integer type.
// Default-constructs to the identity. The determinant-one invariant is
// established by sl2z() / the named generators and preserved by the group
// operations; raw aggregate construction is available to internal code that
// can guarantee it.
template <class Int>
struct Mat2 {
  Int a{1}, b{0}, c{0}, d{1};

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }

  Int det() const { return a * d - b * c; }

  // Valid for determinant-one matrices only.
  Mat2 inverse() const { return Mat2{d, -b, -c, a}; }

  static Mat2 identity() { return Mat2{}; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend bool operator<(const Mat2& x, const Mat2& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.c != y.c) return x.c < y.c;
    return x.d < y.d;
  }
};

using Sl2z = Mat2<BigInt>;

// Checked constructor: rejects determinant != 1.
inline Sl2z sl2z(BigInt a, BigInt b, BigInt c, BigInt d) {
  Sl2z m{std::move(a), std::move(b), std::move(c), std::move(d)};
  if (m.det() != 1)
    throw InvariantViolationError("matrix determinant is not 1");
  return m;
}

inline Sl2z sl2z(long long a, long long b, long long c, long long d) {
  return sl2z(to_bigint(a), to_bigint(b), to_bigint(c), to_bigint(d));
}

// The two standard twist generators.
inline const Sl2z& s1() {
  static const Sl2z m{1, 0, 1, 1};
  return m;
}
inline const Sl2z& s2() {
  static const Sl2z m{1, -1, 0, 1};
  return m;
}

inline Sl2z mul(const Sl2z& x, const Sl2z& y) { return x * y; }
inline Sl2z inverse(const Sl2z& x) { return x.inverse(); }

// Power by repeated squaring; exponent may be negative.
inline Sl2z pow(const Sl2z& base, long long e) {
  Sl2z b = e < 0 ? base.inverse() : base;
  unsigned long long n = e < 0 ? -static_cast<unsigned long long>(e) : e;
  Sl2z r = Sl2z::identity();
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Generator words

enum class Gen : unsigned char { S1, S1Inv, S2, S2Inv };

using GeneratorWord = std::vector<Gen>;

inline Gen inverse(Gen g) {
  switch (g) {
    case Gen::S1: return Gen::S1Inv;
    case Gen::S1Inv: return Gen::S1;
    case Gen::S2: return Gen::S2Inv;
    case Gen::S2Inv: return Gen::S2;
  }
  throw Error("bad generator");
}

inline const Sl2z& gen_matrix(Gen g) {
  static const Sl2z s1i = s1().inverse();
  static const Sl2z s2i = s2().inverse();
  switch (g) {
    case Gen::S1: return s1();
    case Gen::S1Inv: return s1i;
    case Gen::S2: return s2();
    case Gen::S2Inv: return s2i;
  }
  throw Error("bad generator");
}

// Left-to-right product of the generator matrices; empty word = identity.
inline Sl2z eval_word(const GeneratorWord& w) {
  Sl2z r = Sl2z::identity();
  for (Gen g : w) r = r * gen_matrix(g);
  return r;
}

// ---------------------------------------------------------------------------
// Conjugates of s1 (positive twists)

// Closed-form certificate that an element is conjugate to s1:
//   element == [[1+q*s, -q^2], [s^2, 1-q*s]]  with gcd(q,s) = 1.
// (q,s) is the second column of a conjugating matrix; (q,s) and (-q,-s)
// describe the same element, so the canonical representative has s > 0, or
// s == 0 and q > 0.
struct TwistWitness {
  BigInt q, s;
  friend bool operator==(const TwistWitness&, const TwistWitness&) = default;
};

inline Sl2z twist_from_witness(const TwistWitness& w) {
  return Sl2z{1 + w.q * w.s, -w.q * w.q, w.s * w.s, 1 - w.q * w.s};
}

inline std::optional<TwistWitness> is_positive_twist(const Sl2z& m) {
  if (m.is_identity()) return std::nullopt;
  if (m.a + m.d != 2) return std::nullopt;
  if (m.b > 0 || m.c < 0) return std::nullopt;
  BigInt qq = -m.b, ss = m.c;
  if (mpz_perfect_square_p(qq.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(ss.get_mpz_t()) == 0) return std::nullopt;
  BigInt q, s;
  mpz_sqrt(q.get_mpz_t(), qq.get_mpz_t());
  mpz_sqrt(s.get_mpz_t(), ss.get_mpz_t());
  // Fix relative sign so that q*s == a - 1.
  BigInt target = m.a - 1;
  if (q * s != target) {
    q = -q;
    if (q * s != target) return std::nullopt;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), s.get_mpz_t());
  if (g != 1) return std::nullopt;
  if (s < 0 || (s == 0 && q < 0)) {
    q = -q;
    s = -s;
  }
  TwistWitness w{std::move(q), std::move(s)};
  if (twist_from_witness(w) != m) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Subword scan for the words (s1 s2)^{3q} s1^k

struct SubwordScanReport {
  GeneratorWord word;
  unsigned long long total_subwords = 0;
  // Subwords (letter subsets, any positions) that evaluate to the identity.
  std::vector<GeneratorWord> identity_subwords;

  bool only_trivial() const {
    return identity_subwords.size() == 1 && identity_subwords.front().empty();
  }
};

// Enumerates all 2^(6q+k) subwords and reports those equal to the identity.
// The empty subword always qualifies. Throws BudgetError when the number of
// subwords would exceed max_subwords.
inline SubwordScanReport subword_identity_scan(
    int q, long long k, unsigned long long max_subwords = 1ull << 22) {
  if (q != 0 && q != 1) throw Error("q must be 0 or 1");
  if (k < 0) throw Error("k must be non-negative");
  const long long len = 6 * q + k;
  if (len >= 62 || (1ull << len) > max_subwords)
    throw BudgetError("subword enumeration budget exceeded: 2^" +
                      std::to_string(len) + " subwords");

  SubwordScanReport report;
  for (long long i = 0; i < 6 * q; ++i)
    report.word.push_back(i % 2 == 0 ? Gen::S1 : Gen::S2);
  for (long long i = 0; i < k; ++i) report.word.push_back(Gen::S1);

  const unsigned long long total = 1ull << len;
  report.total_subwords = total;
  for (unsigned long long mask = 0; mask < total; ++mask) {
    Sl2z v = Sl2z::identity();
    for (long long i = 0; i < len; ++i)
      if (mask & (1ull << i)) v = v * gen_matrix(report.word[i]);
    if (v.is_identity()) {
      GeneratorWord sub;
      for (long long i = 0; i < len; ++i)
        if (mask & (1ull << i)) sub.push_back(report.word[i]);
      report.identity_subwords.push_back(std::move(sub));
    }
  }
  return report;
}

}  // namespace mono
