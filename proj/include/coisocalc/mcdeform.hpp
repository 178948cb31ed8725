#pragma once

#include "coisocalc/findgla.hpp"
#include "coisocalc/polycalc.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coisocalc {

/// Element of Q[t]/(t^N): coefficients of 1, t, ..., t^{N-1}.
class ArtinScalar {
 public:
  ArtinScalar() = default;
  explicit ArtinScalar(int order) : c_(order) {}
  static ArtinScalar constant(int order, const Rat& r);
  /// The monomial t^k (zero when k >= order).
  static ArtinScalar t_power(int order, int k);

  int order() const { return static_cast<int>(c_.size()); }
  const Rat& operator[](int k) const { return c_.at(k); }
  Rat& operator[](int k) { return c_.at(k); }
  /// Value at t = 0.
  const Rat& residue() const { return c_.at(0); }
  bool is_zero() const;

  ArtinScalar& operator+=(const ArtinScalar& o);
  ArtinScalar& operator-=(const ArtinScalar& o);
  friend ArtinScalar operator+(ArtinScalar a, const ArtinScalar& b) { return a += b; }
  friend ArtinScalar operator-(ArtinScalar a, const ArtinScalar& b) { return a -= b; }
  friend ArtinScalar operator*(const ArtinScalar& a, const ArtinScalar& b);
  friend ArtinScalar operator*(const Rat& r, ArtinScalar a);
  bool operator==(const ArtinScalar& o) const = default;

 private:
  std::vector<Rat> c_;
};

/// x = sum_{k=1}^{N-1} t^k x_k with x_k in a carrier. Component 0 is kept as zero.
template <class E>
class ArtinSeries {
 public:
  ArtinSeries() = default;
  ArtinSeries(int order, const E& zero) : c_(order, zero) {
    if (order < 1) throw DomainError("Artin order must be at least 1");
  }

  int order() const { return static_cast<int>(c_.size()); }
  const E& operator[](int k) const { return c_.at(k); }
  void set(int k, E v) {
    if (k < 1) throw DomainError("series components start at t^1");
    c_.at(k) = std::move(v);
  }
  const std::vector<E>& components() const { return c_; }
  bool operator==(const ArtinSeries& o) const { return c_ == o.c_; }

  /// Same components viewed over Q[t]/(t^m); new components are zero.
  ArtinSeries resized(int m) const {
    ArtinSeries r(m, c_.at(0));
    for (int k = 1; k < std::min(m, order()); ++k) r.c_[k] = c_[k];
    return r;
  }

 private:
  std::vector<E> c_;
};

/// Polyvector carrier: the exterior algebra of Theta in exterior degree >= 1 shifted by one,
/// with d = [pi, -] and the Schouten bracket. Degree of a k-vector is k - 1.
struct PvfArena {
  using Elem = PVF;
  PVF pi;
  int n = 0;

  PvfArena(int n_, PVF pi_) : pi(std::move(pi_)), n(n_) {}
  Elem zero() const { return PVF(n); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem scale(const Rat& r, const Elem& a) const { return r * a; }
  Elem d(const Elem& a) const { return schouten(pi, a); }
  Elem bracket(const Elem& a, const Elem& b) const { return schouten(a, b); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  std::optional<int> degree(const Elem& a) const {
    if (a.is_zero()) return std::nullopt;
    if (a.nvars() != n) throw DomainError("carrier mismatch: wrong number of variables");
    return a.degree() - 1;
  }
};

/// Carrier given by a finite-dimensional DGLA. The DGLA must outlive the arena.
struct FinArena {
  using Elem = Vec;
  const FinDGLA* L = nullptr;

  explicit FinArena(const FinDGLA& l) : L(&l) {}
  Elem zero() const { return L->zero(); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem scale(const Rat& r, const Elem& a) const { return r * a; }
  Elem d(const Elem& a) const { return L->d(a); }
  Elem bracket(const Elem& a, const Elem& b) const { return L->bracket(a, b); }
  bool is_zero(const Elem& a) const { return coisocalc::is_zero(a); }
  std::optional<int> degree(const Elem& a) const {
    if (static_cast<int>(a.size()) != L->dim()) throw DomainError("carrier mismatch: wrong dimension");
    return L->degree(a);
  }
};

template <class A>
using SeriesOf = ArtinSeries<typename A::Elem>;

template <class A>
SeriesOf<A> zero_series(const A& ar, int order) {
  return SeriesOf<A>(order, ar.zero());
}

template <class A>
void require_degree(const A& ar, const SeriesOf<A>& x, int deg, const char* what) {
  for (int k = 1; k < x.order(); ++k) {
    auto g = ar.degree(x[k]);
    if (g && *g != deg) throw DomainError(std::string(what) + " has a component of the wrong degree");
  }
}

template <class A>
void require_same_order(const SeriesOf<A>& a, const SeriesOf<A>& b) {
  if (a.order() != b.order()) throw DomainError("carrier mismatch: different Artin orders");
}

template <class A>
SeriesOf<A> series_add(const A& ar, const SeriesOf<A>& a, const SeriesOf<A>& b) {
  require_same_order<A>(a, b);
  SeriesOf<A> r = a;
  for (int k = 1; k < a.order(); ++k) r.set(k, ar.add(a[k], b[k]));
  return r;
}

template <class A>
SeriesOf<A> series_scale(const A& ar, const Rat& s, const SeriesOf<A>& a) {
  SeriesOf<A> r = a;
  for (int k = 1; k < a.order(); ++k) r.set(k, ar.scale(s, a[k]));
  return r;
}

template <class A>
SeriesOf<A> series_d(const A& ar, const SeriesOf<A>& a) {
  SeriesOf<A> r = zero_series(ar, a.order());
  for (int k = 1; k < a.order(); ++k) r.set(k, ar.d(a[k]));
  return r;
}

/// Truncated product: component k is sum over i + j = k of [a_i, b_j].
template <class A>
SeriesOf<A> series_bracket(const A& ar, const SeriesOf<A>& a, const SeriesOf<A>& b) {
  require_same_order<A>(a, b);
  SeriesOf<A> r = zero_series(ar, a.order());
  for (int k = 2; k < a.order(); ++k) {
    auto acc = ar.zero();
    for (int i = 1; i < k; ++i) {
      if (ar.is_zero(a[i]) || ar.is_zero(b[k - i])) continue;
      acc = ar.add(acc, ar.bracket(a[i], b[k - i]));
    }
    r.set(k, acc);
  }
  return r;
}

template <class A>
bool series_is_zero(const A& ar, const SeriesOf<A>& a) {
  for (int k = 1; k < a.order(); ++k) {
    if (!ar.is_zero(a[k])) return false;
  }
  return true;
}

/// dx + 1/2 [x, x].
template <class A>
SeriesOf<A> mc_residual(const A& ar, const SeriesOf<A>& x) {
  require_degree(ar, x, 1, "MC element");
  return series_add(ar, series_d(ar, x), series_scale(ar, Rat(1, 2), series_bracket(ar, x, x)));
}

/// e^a * x = x + sum_{n >= 0} ad_a^n([a, x] - da) / (n+1)!.
template <class A>
SeriesOf<A> gauge(const A& ar, const SeriesOf<A>& a, const SeriesOf<A>& x) {
  require_same_order<A>(a, x);
  require_degree(ar, a, 0, "gauge element");
  require_degree(ar, x, 1, "MC element");
  SeriesOf<A> term = series_add(ar, series_bracket(ar, a, x), series_scale(ar, Rat(-1), series_d(ar, a)));
  SeriesOf<A> r = x;
  for (int m = 1; !series_is_zero(ar, term); ++m) {
    r = series_add(ar, r, series_scale(ar, 1 / factorial(m), term));
    term = series_bracket(ar, a, term);
  }
  return r;
}

/// Baker-Campbell-Hausdorff product a.b via Dynkin's formula, exact modulo t^N.
template <class A>
SeriesOf<A> bch(const A& ar, const SeriesOf<A>& a, const SeriesOf<A>& b) {
  require_same_order<A>(a, b);
  require_degree(ar, a, 0, "gauge element");
  require_degree(ar, b, 0, "gauge element");
  const int maxlen = a.order() - 1;
  SeriesOf<A> r = zero_series(ar, a.order());
  // Each block (r_i, s_i) contributes a^{r_i} b^{s_i}; words longer than N-1 vanish.
  struct Block {
    int r, s;
  };
  std::vector<Block> blocks;
  auto nested = [&](const std::vector<Block>& bl) {
    std::vector<const SeriesOf<A>*> word;
    for (const auto& q : bl) {
      for (int i = 0; i < q.r; ++i) word.push_back(&a);
      for (int i = 0; i < q.s; ++i) word.push_back(&b);
    }
    SeriesOf<A> acc = *word.back();
    for (int i = static_cast<int>(word.size()) - 2; i >= 0; --i) acc = series_bracket(ar, *word[i], acc);
    return acc;
  };
  auto recurse = [&](auto&& self, int used) -> void {
    if (!blocks.empty()) {
      const int m = static_cast<int>(blocks.size());
      Rat coef = Rat(m % 2 == 1 ? 1 : -1, m);
      Rat denom = used;
      for (const auto& q : blocks) denom *= factorial(q.r) * factorial(q.s);
      coef /= denom;
      r = series_add(ar, r, series_scale(ar, coef, nested(blocks)));
    }
    for (int len = 1; used + len <= maxlen; ++len) {
      for (int rr = 0; rr <= len; ++rr) {
        blocks.push_back({rr, len - rr});
        self(self, used + len);
        blocks.pop_back();
      }
    }
  };
  recurse(recurse, 0);
  return r;
}

/// Whether gauge(a, gauge(b, x)) == gauge(bch(a, b), x).
template <class A>
bool gauge_compose_check(const A& ar, const SeriesOf<A>& a, const SeriesOf<A>& b, const SeriesOf<A>& x) {
  SeriesOf<A> lhs = gauge(ar, a, gauge(ar, b, x));
  SeriesOf<A> rhs = gauge(ar, bch(ar, a, b), x);
  return series_is_zero(ar, series_add(ar, lhs, series_scale(ar, Rat(-1), rhs)));
}

/// Outcome of one order-by-order extension step in a finite-dimensional DGLA.
struct FinExtendResult {
  int order = 0;  // the lift lives over Q[t]/(t^order)
  bool extended = false;
  ArtinSeries<Vec> lift;
  Vec obstruction;  // t^{order-1} coefficient of 1/2[x,x] when extended is false
  bool obstruction_cocycle = false;
};

/// Given x Maurer-Cartan modulo t^k (a series of order k), finds x_k with
/// d x_k = -1/2 sum_{i+j=k} [x_i, x_j], free coordinates set to 0.
FinExtendResult mc_extend(const FinDGLA& L, const ArtinSeries<Vec>& x);

// Coisotropic embedded deformations. A deformation of Z is encoded by normal
// vector fields nu = sum t^k nu_k; the associated MC element in PvfArena is
// e^nu * 0 = e^{ad nu} pi - pi, and Z stays coisotropic iff every order of it
// lies in the ideal L_Z.

/// Slice of normal k-vectors whose coefficients have degree in [dmin, dmax].
/// Basis order: coefficient degree, then index tuple, then exponent vector.
struct NormalSlice {
  int n = 0;
  int p = 0;
  int ext_degree = 0;
  int dmin = 0;
  int dmax = 0;
  std::vector<std::pair<MIdx, Poly::Exps>> keys;
  std::map<std::pair<MIdx, Poly::Exps>, int> index;
  std::vector<NormalPVF> basis;

  int dim() const { return static_cast<int>(keys.size()); }
  /// Coordinates of a normal field; throws if it leaves the slice.
  Vec coords(const NormalPVF& v) const;
  NormalPVF element(const Vec& c) const;
};

NormalSlice normal_slice(const CoisoSetup& s, int ext_degree, int dmin, int dmax);

/// A normal slice together with the matrix of normal_dpi into the next one.
struct GradedSlice {
  NormalSlice source;
  NormalSlice target;
  Matrix differential;
};

/// Homogeneous coefficient degree of pi, nullopt when pi mixes degrees.
/// The zero bivector counts as degree 1 (normal_dpi is then zero and preserves degree).
std::optional<int> pi_coeff_degree(const CoisoSetup& s);

/// Matrix of normal_dpi from slice(k, window) into the slice that contains its image.
GradedSlice normal_complex_slice(const CoisoSetup& s, int ext_degree, int dmin, int dmax);

struct SliceBasis {
  int coeff_degree = 0;
  bool truncated = false;  // true when pi is not homogeneous and a degree cap was used
  int source_dim = 0;
  std::vector<NormalPVF> basis;
  int dimension() const { return static_cast<int>(basis.size()); }
};

/// Kernel of normal_dpi on degree-1 normal fields with coefficient degree d.
/// Non-homogeneous pi needs cap: the window becomes coefficient degrees 0..cap.
SliceBasis t1_basis(const CoisoSetup& s, int d, std::optional<int> cap = std::nullopt);

/// Cohomology at normal bivectors with coefficient degree d.
/// With a cap the image is taken only from sources whose image stays inside the window.
SliceBasis obstruction_space_basis(const CoisoSetup& s, int d, std::optional<int> cap = std::nullopt);

/// e^nu * 0 computed in PvfArena.
ArtinSeries<PVF> embedded_mc(const CoisoSetup& s, const ArtinSeries<PVF>& nu);

/// Normal projection of every order of embedded_mc; zero iff the deformation stays coisotropic.
ArtinSeries<PVF> coisotropy_residual(const CoisoSetup& s, const ArtinSeries<PVF>& nu);

struct EmbeddedExtendResult {
  int order = 0;
  bool extended = false;
  bool truncated = false;  // pi not homogeneous: the solver only searched a bounded window
  ArtinSeries<PVF> nu;      // normal fields, lifted when extended
  ArtinSeries<PVF> x;       // embedded_mc(nu) when extended
  NormalPVF obstruction;    // normal bivector that normal_dpi(nu_k) could not reach
  bool obstruction_cocycle = false;
};

/// One extension step: nu is coisotropic modulo t^k (series of order k); the result
/// has order k + 1. Throws DomainError when the input is not coisotropic modulo t^k
/// or some nu_j is not a normal vector field.
EmbeddedExtendResult mc_extend(const CoisoSetup& s, const ArtinSeries<PVF>& nu);

/// Repeated mc_extend from a first-order datum up to Q[t]/(t^order).
EmbeddedExtendResult mc_extend_to(const CoisoSetup& s, const NormalPVF& nu1, int order);

/// First-order datum normal_project(anchor(omega)) for a closed 1-form on Z.
NormalPVF anchor_first_order(const CoisoSetup& s, const Form& omega);

}  // namespace coisocalc
