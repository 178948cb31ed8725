#pragma once

#include "coisocalc/poly.hpp"

#include <map>
#include <set>
#include <vector>

namespace coisocalc {

/// Strictly increasing 1-based index tuple labelling d_{i1}^..^d_{ik} or dz_{i1}^..^dz_{ik}.
using MIdx = std::vector<int>;

/// Sorts idx in place. Returns the permutation sign, or 0 if an index repeats.
int sort_with_sign(MIdx& idx);

/// Sign and result of concatenating two sorted tuples; 0 if they overlap.
int merge_sign(const MIdx& a, const MIdx& b, MIdx& out);

/// Element of an exterior algebra over polynomials: a finite sum of
/// Poly * (odd generator product). Shared layout of polyvector fields and forms.
template <class Tag>
class Multi {
 public:
  using Map = std::map<MIdx, Poly>;

  Multi() = default;
  explicit Multi(int nvars) : n_(nvars) {}

  static Multi scalar(const Poly& f) {
    Multi m(f.nvars());
    m.add(MIdx{}, f);
    return m;
  }
  static Multi basis(int nvars, MIdx idx, const Poly& f) {
    Multi m(nvars);
    m.add(std::move(idx), f);
    return m;
  }

  int nvars() const { return n_; }
  const Map& components() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  /// Adds f * generator(idx); idx may be unsorted, the sign is absorbed.
  void add(MIdx idx, const Poly& f) {
    for (int i : idx) {
      if (i < 1 || i > n_) throw std::out_of_range("generator index out of range");
    }
    int s = sort_with_sign(idx);
    if (s == 0 || f.is_zero()) return;
    if (f.nvars() != n_) throw std::invalid_argument("coefficient variable count mismatch");
    auto it = c_.find(idx);
    if (it == c_.end()) {
      c_.emplace(std::move(idx), s > 0 ? f : -f);
      return;
    }
    if (s > 0) {
      it->second += f;
    } else {
      it->second -= f;
    }
    if (it->second.is_zero()) c_.erase(it);
  }

  Poly coeff(const MIdx& idx) const {
    auto it = c_.find(idx);
    return it == c_.end() ? Poly(n_) : it->second;
  }

  /// Exterior degrees present.
  std::set<int> degrees() const {
    std::set<int> d;
    for (const auto& [k, v] : c_) d.insert(static_cast<int>(k.size()));
    return d;
  }
  bool is_homogeneous() const { return degrees().size() <= 1; }
  /// Degree of a homogeneous element; -1 for zero. Throws if mixed.
  int degree() const {
    auto d = degrees();
    if (d.empty()) return -1;
    if (d.size() > 1) throw std::invalid_argument("element is not homogeneous");
    return *d.begin();
  }
  Multi part(int k) const {
    Multi m(n_);
    for (const auto& [idx, f] : c_) {
      if (static_cast<int>(idx.size()) == k) m.c_.emplace(idx, f);
    }
    return m;
  }
  int max_coeff_degree() const {
    int d = -1;
    for (const auto& [idx, f] : c_) d = std::max(d, f.degree());
    return d;
  }

  Multi operator-() const {
    Multi m = *this;
    for (auto& [k, v] : m.c_) v = -v;
    return m;
  }
  Multi& operator+=(const Multi& o) {
    if (o.c_.empty()) return *this;
    if (c_.empty() && n_ == 0) n_ = o.n_;
    if (n_ != o.n_) throw std::invalid_argument("variable count mismatch");
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  Multi& operator-=(const Multi& o) { return *this += -o; }
  Multi& operator*=(const Rat& r) {
    if (r == 0) c_.clear();
    for (auto& [k, v] : c_) v *= r;
    return *this;
  }
  friend Multi operator+(Multi a, const Multi& b) { return a += b; }
  friend Multi operator-(Multi a, const Multi& b) { return a -= b; }
  friend Multi operator*(Multi a, const Rat& r) { return a *= r; }
  friend Multi operator*(const Rat& r, Multi a) { return a *= r; }
  friend Multi operator*(const Poly& f, const Multi& a) {
    Multi m(a.n_);
    for (const auto& [k, v] : a.c_) m.add(k, f * v);
    return m;
  }
  bool operator==(const Multi& o) const {
    if (c_.empty() && o.c_.empty()) return true;
    return n_ == o.n_ && c_ == o.c_;
  }
  bool operator!=(const Multi& o) const { return !(*this == o); }

 private:
  int n_ = 0;
  Map c_;
};

struct PvfTag {};
struct FormTag {};

/// Polyvector field sum f_I d_{i1}^..^d_{ik}.
using PVF = Multi<PvfTag>;
/// Holomorphic differential form sum f_I dz_{i1}^..^dz_{ik}.
using Form = Multi<FormTag>;

template <class Tag>
Multi<Tag> wedge(const Multi<Tag>& a, const Multi<Tag>& b) {
  if (a.is_zero() || b.is_zero()) return Multi<Tag>(std::max(a.nvars(), b.nvars()));
  if (a.nvars() != b.nvars()) throw std::invalid_argument("wedge: variable count mismatch");
  Multi<Tag> r(a.nvars());
  MIdx out;
  for (const auto& [ia, fa] : a.components()) {
    for (const auto& [ib, fb] : b.components()) {
      int s = merge_sign(ia, ib, out);
      if (s == 0) continue;
      Poly f = fa * fb;
      r.add(out, s > 0 ? f : -f);
    }
  }
  return r;
}

inline PVF wedge_pvf(const PVF& a, const PVF& b) { return wedge(a, b); }
inline Form wedge_form(const Form& a, const Form& b) { return wedge(a, b); }

}  // namespace coisocalc
