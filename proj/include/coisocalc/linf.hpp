#pragma once

#include "coisocalc/findgla.hpp"
#include "coisocalc/polycalc.hpp"
#include "coisocalc/totcech.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coisocalc {

// L-infinity[1] conventions: a bracket q_n is graded symmetric of degree 1 on V.
// The unshuffle composition is
//   (f o g)(x_1..x_n) = sum over (k, n-k)-unshuffles s of eps(s) f(g(x_s1..x_sk), x_s(k+1)..x_sn)
// with eps the Koszul sign of the reordering, and the relation in arity n is
//   sum_{i+j=n+1} (q_j o q_i)(x_1..x_n) = 0.

/// Linear structure on homogeneous elements; degree is only called on nonzero elements.
template <class E>
struct GradedOps {
  std::function<int(const E&)> degree;
  std::function<E(const E&, const E&)> add;
  std::function<E(const Rat&, const E&)> scale;
  std::function<E()> zero;
  std::function<bool(const E&)> is_zero;
};

template <class E>
struct MultiMap {
  int arity = 0;
  int degree = 0;
  std::function<E(const std::vector<E>&)> eval;
};

/// Sign of moving graded elements of the given degrees into the order perm[0], perm[1], ...
int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm);

/// All (k, n-k)-unshuffles as permutations of 0..n-1.
std::vector<std::vector<int>> unshuffles(int n, int k);

template <class E>
E unshuffle_compose(const GradedOps<E>& ops, const MultiMap<E>& f, const MultiMap<E>& g, const std::vector<E>& xs) {
  const int n = static_cast<int>(xs.size());
  if (n != f.arity + g.arity - 1) throw DomainError("tuple length does not match the composite arity");
  E acc = ops.zero();
  for (const E& x : xs) {
    if (ops.is_zero(x)) return acc;
  }
  std::vector<int> deg;
  for (const E& x : xs) deg.push_back(ops.degree(x));
  for (const auto& s : unshuffles(n, g.arity)) {
    std::vector<E> inner, outer;
    for (int i = 0; i < g.arity; ++i) inner.push_back(xs[s[i]]);
    outer.push_back(g.eval(inner));
    if (ops.is_zero(outer[0])) continue;
    for (int i = g.arity; i < n; ++i) outer.push_back(xs[s[i]]);
    acc = ops.add(acc, ops.scale(koszul_sign(deg, s), f.eval(outer)));
  }
  return acc;
}

/// [f, g] = f o g - (-1)^{|f||g|} g o f on one tuple.
template <class E>
E nr_bracket(const GradedOps<E>& ops, const MultiMap<E>& f, const MultiMap<E>& g, const std::vector<E>& xs) {
  const Rat s = ((f.degree * g.degree) % 2 == 0) ? Rat(-1) : Rat(1);
  return ops.add(unshuffle_compose(ops, f, g, xs), ops.scale(s, unshuffle_compose(ops, g, f, xs)));
}

/// First adjacent transposition on the samples that breaks graded symmetry.
template <class E>
std::optional<std::string> symmetry_failure(const GradedOps<E>& ops, const MultiMap<E>& q, const std::vector<std::vector<E>>& tuples) {
  for (const auto& xs : tuples) {
    for (int i = 0; i + 1 < q.arity; ++i) {
      if (ops.is_zero(xs[i]) || ops.is_zero(xs[i + 1])) continue;
      std::vector<E> ys = xs;
      std::swap(ys[i], ys[i + 1]);
      const int s = ((ops.degree(xs[i]) * ops.degree(xs[i + 1])) % 2 == 0) ? 1 : -1;
      if (!ops.is_zero(ops.add(q.eval(xs), ops.scale(-s, q.eval(ys))))) {
        return "arity " + std::to_string(q.arity) + " map is not graded symmetric in slots " + std::to_string(i) + "," +
               std::to_string(i + 1);
      }
    }
  }
  return std::nullopt;
}

/// Multisets of size n drawn from the samples, as tuples.
template <class E>
std::vector<std::vector<E>> sample_multisets(const std::vector<E>& samples, int n) {
  std::vector<std::vector<E>> out;
  std::vector<int> idx(n, 0);
  const int m = static_cast<int>(samples.size());
  if (m == 0) return out;
  while (true) {
    std::vector<E> t;
    for (int i : idx) t.push_back(samples[i]);
    out.push_back(std::move(t));
    int p = n - 1;
    while (p >= 0 && idx[p] == m - 1) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < n; ++q) idx[q] = idx[p];
  }
  return out;
}

struct LinfReport {
  bool ok = true;
  std::string failure;
  int relations = 0;
};

/// brackets[i] is q_{i+1}; missing brackets are zero. Throws DomainError for asymmetric maps.
template <class E>
LinfReport linf_check(const GradedOps<E>& ops, const std::vector<MultiMap<E>>& brackets, int max_arity, const std::vector<E>& samples) {
  for (size_t i = 0; i < brackets.size(); ++i) {
    if (brackets[i].arity != static_cast<int>(i) + 1) throw DomainError("brackets must be listed by arity 1, 2, ...");
    if (brackets[i].degree != 1) throw DomainError("L-infinity[1] brackets have degree 1");
    if (brackets[i].arity >= 2) {
      if (auto f = symmetry_failure(ops, brackets[i], sample_multisets(samples, brackets[i].arity))) throw DomainError(*f);
    }
  }
  LinfReport rep;
  for (int n = 1; n <= max_arity; ++n) {
    for (const auto& xs : sample_multisets(samples, n)) {
      E acc = ops.zero();
      for (int i = 1; i <= n; ++i) {
        const int j = n + 1 - i;
        if (i > static_cast<int>(brackets.size()) || j > static_cast<int>(brackets.size())) continue;
        acc = ops.add(acc, unshuffle_compose(ops, brackets[j - 1], brackets[i - 1], xs));
      }
      ++rep.relations;
      if (!ops.is_zero(acc)) {
        rep.ok = false;
        rep.failure = "relation of arity " + std::to_string(n) + " fails";
        return rep;
      }
    }
  }
  return rep;
}

/// DGLA with a candidate homotopy h of degree -1; degrees are DGLA degrees.
template <class E>
struct DglaCarrier {
  GradedOps<E> ops;
  std::function<E(const E&)> d;
  std::function<E(const E&, const E&)> bracket;
  std::function<E(const E&, const E&)> h;
};

struct AbelianityReport {
  bool ok = true;
  std::string failure;
  int pairs = 0;
  int triples = 0;
};

/// Cyclic sum f(a,b,c) + (-1)^{a(b+c)} f(b,c,a) + (-1)^{c(a+b)} f(c,a,b).
template <class E, class F>
E cyclic_sum(const GradedOps<E>& ops, const E& a, const E& b, const E& c, F f) {
  const int x = ops.degree(a), y = ops.degree(b), z = ops.degree(c);
  E r = f(a, b, c);
  r = ops.add(r, ops.scale((x * (y + z)) % 2 == 0 ? 1 : -1, f(b, c, a)));
  r = ops.add(r, ops.scale((z * (x + y)) % 2 == 0 ? 1 : -1, f(c, a, b)));
  return r;
}

/// Conditions (1) antisymmetry, (2) [a,b] = dh(a,b) + h(da,b) + (-1)^a h(a,db) and
/// (3) cyclic [h(a,b),c] + cyclic h([a,b],c) = 0 on all pairs and triples of the spanning set.
template <class E>
AbelianityReport check_abelianity(const DglaCarrier<E>& C, const std::vector<E>& span) {
  const auto& o = C.ops;
  AbelianityReport rep;
  auto fail = [&](const std::string& m) {
    rep.ok = false;
    rep.failure = m;
    return rep;
  };
  for (const E& a : span) {
    if (o.is_zero(a)) continue;
    for (const E& b : span) {
      if (o.is_zero(b)) continue;
      const int x = o.degree(a), y = o.degree(b);
      ++rep.pairs;
      if (!o.is_zero(o.add(C.h(a, b), o.scale((x * y) % 2 == 0 ? 1 : -1, C.h(b, a))))) return fail("condition (1) fails");
      E rhs = o.add(C.d(C.h(a, b)), C.h(C.d(a), b));
      rhs = o.add(rhs, o.scale(x % 2 == 0 ? 1 : -1, C.h(a, C.d(b))));
      if (!o.is_zero(o.add(C.bracket(a, b), o.scale(-1, rhs)))) return fail("condition (2) fails");
    }
  }
  for (const E& a : span) {
    if (o.is_zero(a)) continue;
    for (const E& b : span) {
      if (o.is_zero(b)) continue;
      for (const E& c : span) {
        if (o.is_zero(c)) continue;
        ++rep.triples;
        E s1 = cyclic_sum(o, a, b, c, [&](const E& u, const E& v, const E& w) { return C.bracket(C.h(u, v), w); });
        E s2 = cyclic_sum(o, a, b, c, [&](const E& u, const E& v, const E& w) { return C.h(C.bracket(u, v), w); });
        if (!o.is_zero(o.add(s1, s2))) return fail("condition (3) fails");
      }
    }
  }
  return rep;
}

/// h(M x M) in M for a subalgebra given by spanning elements and a membership test.
template <class E>
std::optional<std::string> h_stability_failure(const DglaCarrier<E>& C, const std::vector<E>& sub_span,
                                               const std::function<bool(const E&)>& in_sub) {
  for (const E& a : sub_span) {
    if (!in_sub(a)) return "spanning element outside the subalgebra";
    for (const E& b : sub_span) {
      if (!in_sub(C.h(a, b))) return "h leaves the subalgebra";
    }
  }
  return std::nullopt;
}

/// Decalage V = L[1]: q1 = -d, q2(a,b) = (-1)^a [a,b], r(a,b) = (-1)^a h(a,b); V-degree = L-degree - 1.
template <class E>
struct ShiftedMaps {
  GradedOps<E> vops;
  MultiMap<E> q1, q2, r;
};

template <class E>
ShiftedMaps<E> shifted_maps(const DglaCarrier<E>& C) {
  ShiftedMaps<E> s;
  s.vops = C.ops;
  auto ldeg = C.ops.degree;
  s.vops.degree = [ldeg](const E& x) { return ldeg(x) - 1; };
  auto ops = C.ops;
  auto d = C.d;
  auto br = C.bracket;
  auto h = C.h;
  s.q1 = {1, 1, [ops, d](const std::vector<E>& x) { return ops.scale(-1, d(x[0])); }};
  s.q2 = {2, 1, [ops, br](const std::vector<E>& x) {
            if (ops.is_zero(x[0])) return ops.zero();
            return ops.scale(ops.degree(x[0]) % 2 == 0 ? 1 : -1, br(x[0], x[1]));
          }};
  s.r = {2, 0, [ops, h](const std::vector<E>& x) {
           if (ops.is_zero(x[0])) return ops.zero();
           return ops.scale(ops.degree(x[0]) % 2 == 0 ? 1 : -1, h(x[0], x[1]));
         }};
  return s;
}

/// [r, q1] = q2 on the pairs and [r, q2] = 0 on the triples.
template <class E>
std::optional<std::string> nr_identity_failure(const DglaCarrier<E>& C, const std::vector<std::vector<E>>& pairs,
                                               const std::vector<std::vector<E>>& triples) {
  ShiftedMaps<E> s = shifted_maps(C);
  const auto& o = s.vops;
  for (const auto& xs : pairs) {
    if (!o.is_zero(o.add(nr_bracket(o, s.r, s.q1, xs), o.scale(-1, s.q2.eval(xs))))) return "[r,q1] != q2";
  }
  for (const auto& xs : triples) {
    if (!o.is_zero(nr_bracket(o, s.r, s.q2, xs))) return "[r,q2] != 0";
  }
  return std::nullopt;
}

// Scalar extension to Q[t, dt] (x) L. Elements are sums of t^a dt^j (x) x, keyed by (j, a).

template <class E>
using ExtElem = std::map<std::pair<int, int>, E>;

template <class E>
DglaCarrier<ExtElem<E>> extend_scalars(const DglaCarrier<E>& C) {
  using X = ExtElem<E>;
  DglaCarrier<X> out;
  auto o = C.ops;
  auto put = [o](X& r, std::pair<int, int> k, const E& v) {
    if (o.is_zero(v)) return;
    auto it = r.find(k);
    if (it == r.end()) {
      r.emplace(k, v);
      return;
    }
    it->second = o.add(it->second, v);
    if (o.is_zero(it->second)) r.erase(it);
  };
  out.ops.zero = [] { return X{}; };
  out.ops.is_zero = [](const X& x) { return x.empty(); };
  out.ops.add = [put](const X& a, const X& b) {
    X r = a;
    for (const auto& [k, v] : b) put(r, k, v);
    return r;
  };
  out.ops.scale = [o](const Rat& s, const X& a) {
    X r;
    if (s == 0) return r;
    for (const auto& [k, v] : a) r.emplace(k, o.scale(s, v));
    return r;
  };
  out.ops.degree = [o](const X& a) { return a.begin()->first.first + o.degree(a.begin()->second); };
  out.d = [o, put, C](const X& a) {
    X r;
    for (const auto& [k, v] : a) {
      const auto [j, p] = k;
      if (j == 0 && p > 0) put(r, {1, p - 1}, o.scale(p, v));
      put(r, k, o.scale(j % 2 == 0 ? 1 : -1, C.d(v)));
    }
    return r;
  };
  // Products of monomials: dt^2 = 0 and t is central.
  auto mul = [](std::pair<int, int> u, std::pair<int, int> v) -> std::optional<std::pair<int, int>> {
    if (u.first + v.first > 1) return std::nullopt;
    return std::pair<int, int>{u.first + v.first, u.second + v.second};
  };
  out.bracket = [o, put, mul, C](const X& a, const X& b) {
    X r;
    for (const auto& [ku, x] : a) {
      for (const auto& [kv, y] : b) {
        auto k = mul(ku, kv);
        if (!k || o.is_zero(x) || o.is_zero(y)) continue;
        const int s = (o.degree(x) * kv.first) % 2 == 0 ? 1 : -1;
        put(r, *k, o.scale(s, C.bracket(x, y)));
      }
    }
    return r;
  };
  out.h = [o, put, mul, C](const X& a, const X& b) {
    X r;
    for (const auto& [ku, x] : a) {
      for (const auto& [kv, y] : b) {
        auto k = mul(ku, kv);
        if (!k || o.is_zero(x) || o.is_zero(y)) continue;
        const int e = ku.first + kv.first + kv.first * o.degree(x);
        put(r, *k, o.scale(e % 2 == 0 ? 1 : -1, C.h(x, y)));
      }
    }
    return r;
  };
  return out;
}

// Finite-dimensional instances.

GradedOps<Vec> vec_ops(std::vector<int> degrees);

/// Graded-symmetric multilinear map on a finite graded space, tabulated on
/// nondecreasing basis index tuples.
struct SymMap {
  int arity = 0;
  int degree = 0;
  std::vector<int> vdeg;
  std::map<std::vector<int>, Vec> table;

  /// Tabulates fn after checking graded symmetry on every basis tuple; throws DomainError otherwise.
  static SymMap tabulate(std::vector<int> vdeg, int arity, int degree,
                         const std::function<Vec(const std::vector<int>&)>& on_basis);
  Vec eval(const std::vector<Vec>& xs) const;
  MultiMap<Vec> as_map() const;
  bool is_zero() const;
};

/// Decalage of a finite DGLA: q1 = -d and q2(a,b) = (-1)^a [a,b] on V = L[1].
std::pair<SymMap, SymMap> decalage(const FinDGLA& L);

/// h on a finite DGLA as a table h[i][j] = h(e_i, e_j).
using HTable = std::vector<std::vector<Vec>>;
DglaCarrier<Vec> findgla_carrier(const FinDGLA& L, HTable h);

/// (Omega[1], [.,.]_pi, -del) with h = h_op. The shifted complex carries the suspension sign.
DglaCarrier<Form> koszul_carrier(const CoisoSetup& s);

/// Graded Lie algebra M = L (+) A with A abelian, a degree-1 derivation D with D^2 = 0 and D(L) in L.
class SplitGLA {
 public:
  SplitGLA() = default;
  /// M has zero differential; in_a flags the A-part of the basis. Validates every invariant.
  SplitGLA(FinDGLA M, std::vector<bool> in_a, Matrix D);

  static std::optional<std::string> failure(const FinDGLA& M, const std::vector<bool>& in_a, const Matrix& D);

  const FinDGLA& M() const { return M_; }
  const Matrix& D() const { return D_; }
  const std::vector<bool>& in_a() const { return in_a_; }
  const std::vector<int>& a_indices() const { return a_idx_; }
  const std::vector<int>& l_indices() const { return l_idx_; }
  /// Degrees of the A-basis.
  std::vector<int> a_degrees() const;

  /// Projection onto A along L.
  Vec project(const Vec& v) const;
  bool in_A(const Vec& v) const;
  /// A-coordinates to M-coordinates and back.
  Vec embed_a(const Vec& a) const;
  Vec restrict_a(const Vec& v) const;

  /// (M, D, [,]) as a DGLA, L as a sub-DGLA and its inclusion.
  FinDGLA dgla() const;
  FinDGLA l_dgla() const;
  Matrix l_inclusion() const;

  /// {"algebra": DGLA document, "a_part": [0/1...], "derivation": matrix, "labels": [...]}.
  static SplitGLA from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static SplitGLA load(const std::string& path);

  std::vector<std::string> labels;

 private:
  FinDGLA M_;
  std::vector<bool> in_a_;
  Matrix D_;
  std::vector<int> a_idx_, l_idx_;
};

/// P[...[[D a_1, a_2], a_3], ..., a_n] for a_i in A (M-coordinates). Throws for arguments outside A.
Vec derived_bracket(const SplitGLA& S, const std::vector<Vec>& a);

/// The derived brackets q_1..q_max as symmetric maps on the A-basis.
std::vector<SymMap> derived_brackets(const SplitGLA& S, int max_arity);

/// Cohomology of the homotopy fibre of L -> (M, D) against (A[-1], {.}_1).
struct FiberShadow {
  int lo = 0;
  std::vector<int> fiber_h;
  std::vector<int> a_h;
  bool match = false;
};
FiberShadow fiber_shadow(const SplitGLA& S, int bound);

/// Face compatibility h_{n+1}(d_k a, d_k b) = d_k h_n(a, b) on per-level spanning sets.
template <class E>
struct ScsHFamily {
  std::vector<std::function<E(const E&, const E&)>> h;
  std::vector<std::vector<std::function<E(const E&)>>> faces;  // faces[n-1][k]: level n-1 -> n
  std::vector<std::vector<E>> span;
  std::function<bool(const E&, const E&)> equal;
};

template <class E>
std::optional<std::string> scs_h_failure(const ScsHFamily<E>& F) {
  for (size_t n = 0; n + 1 < F.h.size(); ++n) {
    for (size_t k = 0; k < F.faces.at(n).size(); ++k) {
      const auto& f = F.faces[n][k];
      for (const E& a : F.span.at(n)) {
        for (const E& b : F.span.at(n)) {
          if (!F.equal(F.h[n + 1](f(a), f(b)), f(F.h[n](a, b)))) {
            return "face " + std::to_string(k) + " from level " + std::to_string(n) + " does not commute with h";
          }
        }
      }
    }
  }
  return std::nullopt;
}

/// The family on a finite diagram with per-level tables.
ScsHFamily<Vec> scs_h_family(const ScsDGLA& S, const std::vector<HTable>& h);

}  // namespace coisocalc
