#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mono/errors.hpp"
#include "mono/factorization.hpp"

namespace mono {

// ---------------------------------------------------------------------------
// Formal connected sums of the closed 4-manifolds in the classification table

enum class Prim : unsigned char {
  S4,      // the 4-sphere (connected-sum identity)
  CP2,     // complex projective plane
  CP2bar,  // reversed orientation
  S2xS2,
  S1xS3,
  T2xS2,
  S1xL,  // S^1 x L(n,1), n > 1
  L,     // Pao manifold L_n, n > 1
  Lp,    // Pao manifold L'_n, n > 1
  E      // elliptic surface E(n), n >= 1
};

struct Summand {
  Prim prim = Prim::S4;
  long long n = 0;  // parameter for S1xL, L, Lp, E; 0 otherwise
  auto operator<=>(const Summand&) const = default;
};

inline Summand s4() { return {Prim::S4, 0}; }
inline Summand cp2() { return {Prim::CP2, 0}; }
inline Summand cp2bar() { return {Prim::CP2bar, 0}; }
inline Summand s2xs2() { return {Prim::S2xS2, 0}; }
inline Summand s1xs3() { return {Prim::S1xS3, 0}; }
inline Summand t2xs2() { return {Prim::T2xS2, 0}; }
inline Summand s1xlens(long long n) {
  if (n <= 1) throw Error("S1xL(n,1) requires n > 1");
  return {Prim::S1xL, n};
}
inline Summand pao_l(long long n) {
  if (n <= 1) throw Error("L_n requires n > 1");
  return {Prim::L, n};
}
inline Summand pao_lp(long long n) {
  if (n <= 1) throw Error("L'_n requires n > 1");
  return {Prim::Lp, n};
}
inline Summand elliptic(long long n) {
  if (n < 1) throw Error("E(n) requires n >= 1");
  return {Prim::E, n};
}

inline std::string to_string(const Summand& s) {
  switch (s.prim) {
    case Prim::S4: return "S4";
    case Prim::CP2: return "CP2";
    case Prim::CP2bar: return "CP2bar";
    case Prim::S2xS2: return "S2xS2";
    case Prim::S1xS3: return "S1xS3";
    case Prim::T2xS2: return "T2xS2";
    case Prim::S1xL: return "S1xL(" + std::to_string(s.n) + ")";
    case Prim::L: return "L(" + std::to_string(s.n) + ")";
    case Prim::Lp: return "L'(" + std::to_string(s.n) + ")";
    case Prim::E: return "E(" + std::to_string(s.n) + ")";
  }
  throw Error("bad summand");
}

// A formal connected-sum expression: a multiset of summands. The expression
// with no summands denotes the empty connected sum, i.e. S4; canonicalization
// always returns a non-empty expression.
class ManifoldId {
 public:
  ManifoldId() = default;
  explicit ManifoldId(std::initializer_list<Summand> parts) {
    for (const Summand& s : parts) add(s);
  }

  void add(const Summand& s, long long multiplicity = 1) {
    if (multiplicity < 0) throw Error("negative multiplicity");
    if (multiplicity == 0) return;
    counts_[s] += multiplicity;
  }
  void remove(const Summand& s, long long multiplicity) {
    auto it = counts_.find(s);
    if (it == counts_.end() || it->second < multiplicity)
      throw Error("removing absent summand");
    it->second -= multiplicity;
    if (it->second == 0) counts_.erase(it);
  }
  long long count(const Summand& s) const {
    auto it = counts_.find(s);
    return it == counts_.end() ? 0 : it->second;
  }
  const std::map<Summand, long long>& summands() const { return counts_; }
  bool empty() const { return counts_.empty(); }

  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;
  friend bool operator<(const ManifoldId& x, const ManifoldId& y) {
    return x.counts_ < y.counts_;
  }

 private:
  std::map<Summand, long long> counts_;
};

inline std::string to_string(const ManifoldId& m) {
  if (m.empty()) return "S4";
  std::string s;
  for (auto& [part, mult] : m.summands()) {
    if (!s.empty()) s += " # ";
    if (mult != 1) s += std::to_string(mult) + "*";
    s += to_string(part);
  }
  return s;
}

// Applies, to exhaustion:
//   R1: with a CP2bar present, S2xS2 -> CP2 # CP2bar
//   R2: with a CP2bar present, L'_n -> L_n
//   R3: S4 summands are dropped unless the expression is S4 alone
inline ManifoldId canonicalize_manifold(const ManifoldId& m) {
  ManifoldId r = m;
  // R3 first: S4 is the identity.
  {
    const long long s4s = r.count(s4());
    if (s4s > 0) {
      r.remove(s4(), s4s);
    }
  }
  if (r.empty()) {
    ManifoldId sphere;
    sphere.add(s4());
    return sphere;
  }
  if (r.count(cp2bar()) > 0) {
    const long long k = r.count(s2xs2());
    if (k > 0) {
      r.remove(s2xs2(), k);
      r.add(cp2(), k);
      r.add(cp2bar(), k);
    }
    std::vector<std::pair<Summand, long long>> lps;
    for (auto& [part, mult] : r.summands())
      if (part.prim == Prim::Lp) lps.emplace_back(part, mult);
    for (auto& [part, mult] : lps) {
      r.remove(part, mult);
      r.add(pao_l(part.n), mult);
    }
  }
  return r;
}

inline bool is_canonical(const ManifoldId& m) {
  return !m.empty() && m == canonicalize_manifold(m);
}

// ---------------------------------------------------------------------------
// Invariants

struct ManifoldInvariants {
  long long euler = 0;
  std::string pi1;  // "1", "Z", "Z_n", "ZxZ", "ZxZ_n" with concrete n
  int b1 = 0;       // rank of abelianized fundamental group
};

inline ManifoldInvariants manifold_invariants(const ManifoldId& m) {
  if (!is_canonical(m))
    throw Error("manifold expression is not canonical");
  long long euler = 2;
  // chi(A # B) = chi(A) + chi(B) - 2, so each summand contributes chi - 2.
  for (auto& [part, mult] : m.summands()) {
    long long chi = 0;
    switch (part.prim) {
      case Prim::S4: chi = 2; break;
      case Prim::CP2:
      case Prim::CP2bar: chi = 3; break;
      case Prim::S2xS2: chi = 4; break;
      case Prim::S1xS3:
      case Prim::T2xS2:
      case Prim::S1xL: chi = 0; break;
      case Prim::L:
      case Prim::Lp: chi = 2; break;
      case Prim::E: chi = 12 * part.n; break;
    }
    euler += mult * (chi - 2);
  }

  // The fundamental group of a connected sum is the free product; every
  // expression in the classification table has at most one summand with
  // non-trivial fundamental group.
  std::vector<std::pair<std::string, int>> groups;  // (label, b1)
  for (auto& [part, mult] : m.summands()) {
    std::optional<std::pair<std::string, int>> g;
    switch (part.prim) {
      case Prim::S1xS3: g = {{"Z"}, 1}; break;
      case Prim::T2xS2: g = {{"ZxZ"}, 2}; break;
      case Prim::S1xL:
        g = {{"ZxZ_" + std::to_string(part.n)}, 1};
        break;
      case Prim::L:
      case Prim::Lp:
        g = {{"Z_" + std::to_string(part.n)}, 0};
        break;
      default: break;
    }
    if (g)
      for (long long i = 0; i < mult; ++i) groups.push_back(*g);
  }
  ManifoldInvariants inv;
  inv.euler = euler;
  if (groups.empty()) {
    inv.pi1 = "1";
    inv.b1 = 0;
  } else if (groups.size() == 1) {
    inv.pi1 = groups.front().first;
    inv.b1 = groups.front().second;
  } else {
    throw Error("fundamental group outside the classification table");
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Descriptors

// Lower-side gluing when there is no round circle and no twist: the boundary
// circle maps to r [C] +- [m_T].
struct TorusGluing {
  long long r = 0;
  friend bool operator==(const TorusGluing&, const TorusGluing&) = default;
};

enum class Parity : unsigned char { Even, Odd };

// Lower-side gluing in the presence of a round circle: the linking number n
// of the remaining handle with the 1-handle, and the framing parity.
struct PaoGluing {
  long long n = 0;
  Parity parity = Parity::Even;
  friend bool operator==(const PaoGluing&, const PaoGluing&) = default;
};

struct SblfDescriptor {
  bool has_round = false;
  Factorization higher_factorization;
  bool higher_gluing_twist = false;  // twisted identification with the round cobordism
  long long section_framing = 0;     // self-intersection of the section
  std::variant<TorusGluing, PaoGluing> lower_gluing = TorusGluing{};
};

// Action of the higher-side global monodromy on the attaching curve.
struct MonodromyShape {
  enum class Kind : unsigned char { Untwisted, Twisted, Invalid } kind;
  BigInt param;  // m for untwisted, n for twisted
};

inline MonodromyShape monodromy_shape(const Factorization& f) {
  const Sl2z mu = product(f);
  if (mu.b == 0 && mu.a == 1 && mu.d == 1)
    return {MonodromyShape::Kind::Untwisted, mu.c};
  if (mu.b == 0 && mu.a == -1 && mu.d == -1)
    return {MonodromyShape::Kind::Twisted, mu.c};
  return {MonodromyShape::Kind::Invalid, 0};
}

inline Factorization append_twists(const Factorization& f, long long count) {
  std::vector<Sl2z> e = f.entries();
  for (long long i = 0; i < count; ++i) e.push_back(s1());
  return Factorization(Factorization::unchecked_t{}, std::move(e));
}

struct BlowupResult {
  SblfDescriptor descriptor;
  long long blowups = 0;
};

// Appends right-handed twists along the attaching curve until the global
// monodromy has an admissible shape. Each appended twist is a blow-up of the
// total space.
inline BlowupResult blowup_normalize(const SblfDescriptor& d) {
  if (!d.has_round)
    throw Error("blow-up normalization applies to round descriptors only");
  const MonodromyShape shape = monodromy_shape(d.higher_factorization);
  if (shape.kind == MonodromyShape::Kind::Invalid)
    throw NotAdmissibleError(
        "global monodromy does not preserve the attaching curve");
  long long appended = 0;
  if (shape.kind == MonodromyShape::Kind::Untwisted && shape.param < 0) {
    if (!shape.param.fits_slong_p()) throw Error("twist count out of range");
    appended = -shape.param.get_si();
  } else if (shape.kind == MonodromyShape::Kind::Twisted && shape.param > 0) {
    if (!shape.param.fits_slong_p()) throw Error("twist count out of range");
    appended = shape.param.get_si();
  }
  BlowupResult r{d, appended};
  if (appended > 0)
    r.descriptor.higher_factorization =
        append_twists(d.higher_factorization, appended);
  return r;
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  ManifoldId manifold;       // canonical; X # blowups*CP2bar is diffeomorphic to it
  long long blowups = 0;     // twists appended by blow-up normalization
  std::string case_tag;      // torus-bundle | elliptic | round-twist-power | round-general
  std::optional<std::array<long long, 3>> pqk;
  // Solutions X of canonicalize(X # blowups*CP2bar) == manifold, when blowups > 0.
  std::vector<ManifoldId> stripped_candidates;
};

// All X with canonicalize_manifold(X # b*CP2bar) == m, for canonical m.
inline std::vector<ManifoldId> blowdown_candidates(const ManifoldId& m,
                                                   long long b) {
  std::vector<ManifoldId> out;
  if (b <= 0) {
    out.push_back(m);
    return out;
  }
  // X = S4 works exactly when m is b copies of CP2bar.
  {
    ManifoldId bars;
    bars.add(cp2bar(), b);
    if (m == bars) out.push_back(canonicalize_manifold(ManifoldId{{s4()}}));
  }
  if (m.count(cp2bar()) >= b) {
    ManifoldId base = m;
    base.remove(cp2bar(), b);
    // Converting j pairs CP2 # CP2bar back into S2xS2 and any subset of L_n
    // back into L'_n survives re-blowing-up; enumerate those preimages.
    std::vector<Summand> l_parts;
    for (auto& [part, mult] : base.summands())
      if (part.prim == Prim::L) l_parts.push_back(part);
    const long long max_pairs =
        std::min(base.count(cp2()), base.count(cp2bar()));
    for (long long j = 0; j <= max_pairs; ++j)
      for (unsigned long long lmask = 0;
           lmask < (1ull << std::min<std::size_t>(l_parts.size(), 16)); ++lmask) {
        ManifoldId x = base;
        if (j > 0) {
          x.remove(cp2(), j);
          x.remove(cp2bar(), j);
          x.add(s2xs2(), j);
        }
        for (std::size_t i = 0; i < l_parts.size(); ++i)
          if (lmask & (1ull << i)) {
            const long long mult = x.count(l_parts[i]);
            x.remove(l_parts[i], mult);
            x.add(pao_lp(l_parts[i].n), mult);
          }
        // Candidates are named by canonical representatives; a non-canonical
        // x duplicates a diffeomorphic expression already listed.
        if (x.empty() || !is_canonical(x)) continue;
        ManifoldId reblown = x;
        reblown.add(cp2bar(), b);
        if (canonicalize_manifold(reblown) == m &&
            std::find(out.begin(), out.end(), x) == out.end())
          out.push_back(x);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Classification classify(const SblfDescriptor& d) {
  Classification result;
  if (!d.has_round) {
    if (d.higher_factorization.empty()) {
      const auto* torus = std::get_if<TorusGluing>(&d.lower_gluing);
      if (!torus)
        throw Error("a descriptor without singularities needs a torus gluing");
      if (torus->r < 0) throw Error("torus gluing coefficient must be >= 0");
      ManifoldId m;
      if (torus->r == 0)
        m.add(t2xs2());
      else if (torus->r == 1)
        m.add(s1xs3());
      else
        m.add(s1xlens(torus->r));
      result.manifold = canonicalize_manifold(m);
      result.case_tag = "torus-bundle";
      return result;
    }
    // Twist-only fibrations over the sphere force trivial global monodromy.
    if (!product(d.higher_factorization).is_identity())
      throw NotAFibrationOverSphereError(
          "global monodromy of a fibration over the sphere must be trivial");
    const long long n = static_cast<long long>(d.higher_factorization.size());
    if (n % 12 != 0)
      throw InvariantViolationError(
          "trivial-monodromy factorization length must be a multiple of 12");
    ManifoldId m;
    m.add(elliptic(n / 12));
    result.manifold = canonicalize_manifold(m);
    result.case_tag = "elliptic";
    result.pqk = {{n / 12, 0, 0}};
    return result;
  }

  const auto* pao = std::get_if<PaoGluing>(&d.lower_gluing);
  if (!pao) throw Error("a round descriptor needs a pao gluing");
  if (pao->n < 0) throw Error("pao gluing parameter must be >= 0");

  BlowupResult blown = blowup_normalize(d);
  result.blowups = blown.blowups;
  const NormalForm nf = normalize(blown.descriptor.higher_factorization);
  result.pqk = {{nf.p, static_cast<long long>(nf.q), nf.k}};

  ManifoldId m;
  if (nf.p == 0 && nf.q == 0) {
    // Higher monodromy is a power of a single twist: the round piece decides.
    if (pao->n == 0) {
      if (pao->parity == Parity::Even) {
        m.add(s2xs2());
        m.add(s1xs3());
      } else {
        m.add(cp2());
        m.add(cp2bar());
        m.add(s1xs3());
      }
    } else if (pao->n == 1) {
      m.add(s4());
    } else {
      if (pao->parity == Parity::Even)
        m.add(pao_l(pao->n));
      else
        m.add(pao_lp(pao->n));
    }
    m.add(cp2bar(), nf.k);
    result.case_tag = "round-twist-power";
  } else {
    // 2p + q >= 1.
    m.add(cp2(), 2 * nf.p + nf.q);
    m.add(cp2bar(), 10 * nf.p + 5 * nf.q + nf.k);
    result.case_tag = "round-general";
  }
  result.manifold = canonicalize_manifold(m);
  if (result.blowups > 0)
    result.stripped_candidates =
        blowdown_candidates(result.manifold, result.blowups);
  return result;
}

}  // namespace mono
