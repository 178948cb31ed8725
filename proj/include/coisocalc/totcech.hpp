#pragma once

#include "coisocalc/findgla.hpp"
#include "coisocalc/multivector.hpp"
#include "coisocalc/polycalc.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coisocalc {

/// Polynomial form on the standard n-simplex in the reduced coordinates t_1..t_n
/// (t_0 = 1 - t_1 - ... - t_n); dt_i is stored as the generator i.
using SimplexForm = Form;

/// The coordinate t_i on the n-simplex, 0 <= i <= n.
SimplexForm simplex_coord(int n, int i);

/// Pullback along the k-th coface Delta^{n-1} -> Delta^n.
SimplexForm face_pullback(int k, const SimplexForm& phi, int n);

/// Integral over the n-simplex; only the top-degree part contributes.
Rat simplex_integrate(const SimplexForm& phi, int n);

/// Semicosimplicial DGLA L_0, ..., L_m. faces[n-1][k] is the k-th face L_{n-1} -> L_n.
class ScsDGLA {
 public:
  ScsDGLA() = default;
  ScsDGLA(std::vector<FinDGLA> levels, std::vector<std::vector<Matrix>> faces);

  int top() const { return static_cast<int>(levels_.size()) - 1; }
  const FinDGLA& level(int n) const { return levels_.at(n); }
  const Matrix& face(int n, int k) const { return faces_.at(n - 1).at(k); }

  /// First failing shape, morphism or face-relation check, or nullopt.
  std::optional<std::string> failure() const;

  /// {"levels": [DGLA documents], "faces": [[matrices L_0 -> L_1], [L_1 -> L_2], ...]}.
  static ScsDGLA from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ScsDGLA load(const std::string& path);

 private:
  std::vector<FinDGLA> levels_;
  std::vector<std::vector<Matrix>> faces_;
};

/// x_n = sum_b omega_{n,b} (x) e_b with omega_{n,b} a form on Delta^n.
struct TotElem {
  std::vector<std::vector<SimplexForm>> levels;
  bool operator==(const TotElem& o) const;
};

TotElem tot_zero(const ScsDGLA& S);
void check_tot_shape(const ScsDGLA& S, const TotElem& x);
/// Matching conditions (d_k^* (x) Id) x_n = (Id (x) d_k) x_{n-1}.
bool tot_check(const ScsDGLA& S, const TotElem& x);
/// d(omega (x) v) = d omega (x) v + (-1)^{|omega|} omega (x) dv, levelwise.
TotElem tot_diff(const ScsDGLA& S, const TotElem& x);
/// [omega (x) u, eta (x) v] = (-1)^{|u||eta|} omega eta (x) [u, v], levelwise.
TotElem tot_bracket(const ScsDGLA& S, const TotElem& x, const TotElem& y);
TotElem tot_add(const TotElem& a, const TotElem& b);
TotElem tot_scale(const Rat& r, const TotElem& a);

/// v_n in L_n, sitting in total degree deg + n.
struct CochainElem {
  std::vector<Vec> levels;
  bool operator==(const CochainElem& o) const = default;
};

CochainElem cochain_zero(const ScsDGLA& S);
/// v in L_n of degree i maps to (-1)^n dv + sum_k (-1)^k d_k v.
CochainElem cech_diff(const ScsDGLA& S, const CochainElem& v);

/// Levelwise integration over the simplices. Throws DomainError for non-members.
CochainElem whitney_I(const ScsDGLA& S, const TotElem& x);

/// e(x) = (1 (x) x, 1 (x) d_0 x, 1 (x) d_0^2 x, ...) for x in the equalizer of L_0.
TotElem e_map(const ScsDGLA& S, const Vec& x);
bool in_equalizer(const ScsDGLA& S, const Vec& x);

/// Finite complex C^lo -> ... -> C^hi; d[i] maps degree lo+i to lo+i+1.
struct FiniteComplex {
  int lo = 0;
  std::vector<int> dims;
  std::vector<Matrix> d;
};

struct ComplexCohomology {
  int lo = 0;
  std::vector<int> dims;  // dim C^k
  std::vector<int> h;     // dim H^k
  std::vector<std::vector<Vec>> representatives;
};

/// Exact cohomology; throws DomainError when d^2 != 0 or shapes disagree.
ComplexCohomology complex_cohomology(const FiniteComplex& C);

/// Degree-m part of Tot with every form of weight (polynomial degree + form degree) <= bound.
/// Both d and the face pullbacks preserve weight, so these slices form a subcomplex.
class TotSlice {
 public:
  TotSlice(const ScsDGLA& S, int m, int bound);

  int degree() const { return m_; }
  int bound() const { return bound_; }
  int ambient_dim() const { return static_cast<int>(keys_.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }

  TotElem element(const Vec& ambient) const;
  /// Ambient coordinates; throws if x leaves the bounded degree-m space.
  Vec coords(const TotElem& x) const;

 private:
  struct Key {
    int level, b;
    MIdx forms;
    Poly::Exps exps;
    auto operator<=>(const Key&) const = default;
  };
  const ScsDGLA* S_;
  int m_, bound_;
  std::vector<Key> keys_;
  std::map<Key, int> index_;
  std::vector<Vec> basis_;
};

/// Total-degree slice of the cochain complex C(V): sum over n of L_n in degree m - n.
struct CochainSlice {
  int m = 0;
  std::vector<std::pair<int, int>> keys;  // (level, basis index)
  int dim() const { return static_cast<int>(keys.size()); }
  Vec coords(const CochainElem& c) const;
  CochainElem element(const ScsDGLA& S, const Vec& v) const;
};
CochainSlice cochain_slice(const ScsDGLA& S, int m);

/// Total-degree range that can carry nonzero Tot or cochain elements.
std::pair<int, int> total_degree_range(const ScsDGLA& S);

/// Weight-bounded Tot and C(V) as finite complexes over total_degree_range.
FiniteComplex tot_complex(const ScsDGLA& S, int bound);
FiniteComplex cochain_complex(const ScsDGLA& S);

/// Levelwise linear map between two diagrams, applied on Tot.
TotElem tot_map(const std::vector<Matrix>& f, const TotElem& x);

// Homotopy fibre of a DGLA morphism chi: L -> M, with Q[t, dt] as forms in one variable.

struct HFiberElem {
  Vec l;
  std::vector<SimplexForm> m;  // one form in t per basis vector of M
};

class HFiber {
 public:
  /// Validates chi as a DGLA morphism.
  HFiber(FinDGLA L, FinDGLA M, Matrix chi);

  const FinDGLA& L() const { return L_; }
  const FinDGLA& M() const { return M_; }
  const Matrix& chi() const { return chi_; }

  /// e_0(m) = 0 and e_1(m) = chi(l).
  bool contains(const HFiberElem& z) const;
  HFiberElem diff(const HFiberElem& z) const;
  HFiberElem bracket(const HFiberElem& a, const HFiberElem& b) const;

  /// Degree-m elements with forms of weight <= bound; basis of the kernel of the end conditions.
  std::vector<HFiberElem> slice_basis(int m, int bound) const;
  /// Weight-bounded K(chi) as a finite complex.
  FiniteComplex complex(int bound) const;

  /// Coordinates on coker(chi) and the induced differential on them.
  int coker_dim() const { return coker_proj_.rows(); }
  Vec coker_class(const Vec& v) const { return coker_proj_ * v; }
  const Matrix& coker_d() const { return coker_d_; }
  /// Degree of each coker coordinate (as a class in M).
  const std::vector<int>& coker_degrees() const { return coker_deg_; }

  /// integral_0^1 of the dt-part, as a class in coker(chi). Requires chi injective.
  Vec integrate01(const HFiberElem& z) const;

 private:
  FinDGLA L_, M_;
  Matrix chi_;
  Matrix coker_proj_;
  Matrix coker_d_;
  std::vector<int> coker_deg_;
  bool injective_ = false;
};

/// The two-level diagram L => M with faces (chi, 0).
ScsDGLA chi_diagram(const FinDGLA& L, const FinDGLA& M, const Matrix& chi);

/// Exhaustive checks on the weight-bounded slices: I is a chain map on every slice basis
/// vector, I o e is the inclusion on an equalizer basis, and H(Tot) agrees with H(C(V)).
struct TotVerifyReport {
  int bound = 0;
  bool chain_map = false;
  bool inclusion = false;
  ComplexCohomology tot, cech;
  bool agree = false;
  int checked = 0;
  bool ok() const { return chain_map && inclusion && agree; }
};
TotVerifyReport verify_tot(const ScsDGLA& S, int bound);

}  // namespace coisocalc
