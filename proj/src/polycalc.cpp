#include "coisocalc/polycalc.hpp"

#include <algorithm>

namespace coisocalc {

int sort_with_sign(MIdx& idx) {
  int sign = 1;
  // Insertion sort counting transpositions; tuples are short.
  for (size_t i = 1; i < idx.size(); ++i) {
    for (size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] == idx[i - 1]) return 0;
  }
  return sign;
}

int merge_sign(const MIdx& a, const MIdx& b, MIdx& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  int inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      inversions += static_cast<int>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

namespace {

void check_nvars(int a, int b) {
  if (a != b) throw std::invalid_argument("variable count mismatch");
}

// Position of i in the sorted tuple, or -1.
int position(const MIdx& idx, int i) {
  auto it = std::lower_bound(idx.begin(), idx.end(), i);
  if (it == idx.end() || *it != i) return -1;
  return static_cast<int>(it - idx.begin());
}

MIdx without(const MIdx& idx, int pos) {
  MIdx r = idx;
  r.erase(r.begin() + pos);
  return r;
}

}  // namespace

CoisoSetup::CoisoSetup(int n_, int p_, PVF pi_) : n(n_), p(p_), pi(std::move(pi_)) {
  if (n < 1) throw DomainError("chart dimension must be positive");
  if (p < 0 || p > n) throw DomainError("codimension must satisfy 0 <= p <= n");
  if (pi.is_zero()) pi = PVF(n);
  check_nvars(pi.nvars(), n);
  for (const auto& [idx, f] : pi.components()) {
    if (idx.size() != 2) throw DomainError("pi must have exterior degree exactly 2");
  }
}

Poly CoisoSetup::pi_coeff(int i, int j) const { return pi.coeff(MIdx{i, j}); }

NormalPVF::NormalPVF(int p, PVF v) : p_(p), v_(std::move(v)) {
  for (const auto& [idx, f] : v_.components()) {
    for (int i : idx) {
      if (i > p_) throw DomainError("normal field involves a tangent direction");
    }
    if (!f.free_of_first(p_)) throw DomainError("normal field coefficient depends on z_1..z_p");
  }
}

PVF coord_field(int n, int i) { return PVF::basis(n, MIdx{i}, Poly::constant(n, 1)); }
PVF pvf_function(const Poly& f) { return PVF::scalar(f); }
Form form_function(const Poly& f) { return Form::scalar(f); }
Form coord_form(int n, int i) { return Form::basis(n, MIdx{i}, Poly::constant(n, 1)); }

// In odd coordinates theta_i = d_i:
//   [F,G] = sum_i (F <d/dtheta_i)(dG/dz_i) - (-1)^{(|F|-1)(|G|-1)} (G <d/dtheta_i)(dF/dz_i)
// with right derivatives in theta.
PVF schouten(const PVF& xi, const PVF& eta) {
  if (xi.is_zero() || eta.is_zero()) return PVF(std::max(xi.nvars(), eta.nvars()));
  check_nvars(xi.nvars(), eta.nvars());
  const int n = xi.nvars();
  PVF r(n);
  MIdx out;
  // First half: (xi <d/dtheta_i)(d eta/dz_i).
  for (const auto& [I, f] : xi.components()) {
    const int k = static_cast<int>(I.size());
    for (int q = 0; q < k; ++q) {
      const int i = I[q];
      const int s_right = ((k - 1 - q) % 2 == 0) ? 1 : -1;
      MIdx Irest = without(I, q);
      for (const auto& [J, g] : eta.components()) {
        Poly dg = g.deriv(i);
        if (dg.is_zero()) continue;
        int s = merge_sign(Irest, J, out);
        if (s == 0) continue;
        s *= s_right;
        Poly c = f * dg;
        r.add(out, s > 0 ? c : -c);
      }
    }
  }
  // The second half is -(-1)^{(|xi|-1)(|eta|-1)} times the roles swapped, so the
  // sign exponent uses the degree of eta's component (as F) and xi's (as G).
  for (const auto& [I, f] : eta.components()) {
    const int k = static_cast<int>(I.size());
    for (int q = 0; q < k; ++q) {
      const int i = I[q];
      const int s_right = ((k - 1 - q) % 2 == 0) ? 1 : -1;
      MIdx Irest = without(I, q);
      for (const auto& [J, g] : xi.components()) {
        Poly dg = g.deriv(i);
        if (dg.is_zero()) continue;
        int s = merge_sign(Irest, J, out);
        if (s == 0) continue;
        s *= s_right;
        const int l = static_cast<int>(J.size());
        if (((l - 1) * (k - 1)) % 2 == 0) s = -s;
        Poly c = f * dg;
        r.add(out, s > 0 ? c : -c);
      }
    }
  }
  return r;
}

namespace {

// Left contraction by d_j: i_{d_j}(dz_K) = (-1)^{pos} dz_{K \ j}.
int contract_one(int j, MIdx& K) {
  int q = position(K, j);
  if (q < 0) return 0;
  K.erase(K.begin() + q);
  return (q % 2 == 0) ? 1 : -1;
}

}  // namespace

Form interior(const PVF& eta, const Form& alpha) {
  if (eta.is_zero() || alpha.is_zero()) return Form(std::max(eta.nvars(), alpha.nvars()));
  check_nvars(eta.nvars(), alpha.nvars());
  Form r(alpha.nvars());
  for (const auto& [J, g] : eta.components()) {
    for (const auto& [K, f] : alpha.components()) {
      if (J.size() > K.size()) continue;
      MIdx rest = K;
      int s = 1;
      // i_{d_j1 ^ ... ^ d_jk} = i_{d_j1} o ... o i_{d_jk}: innermost is j_k.
      for (auto it = J.rbegin(); it != J.rend() && s != 0; ++it) s *= contract_one(*it, rest);
      if (s == 0) continue;
      Poly c = g * f;
      r.add(rest, s > 0 ? c : -c);
    }
  }
  return r;
}

Form holo_d(const Form& alpha) {
  const int n = alpha.nvars();
  Form r(n);
  for (const auto& [K, f] : alpha.components()) {
    for (int i = 1; i <= n; ++i) {
      Poly df = f.deriv(i);
      if (df.is_zero()) continue;
      MIdx idx = K;
      idx.insert(idx.begin(), i);
      r.add(idx, df);
    }
  }
  return r;
}

Form lie_deriv(const PVF& eta, const Form& alpha) {
  Form r(alpha.nvars());
  for (int k : eta.degrees()) {
    PVF ek = eta.part(k);
    Form a = interior(ek, holo_d(alpha));
    Form b = holo_d(interior(ek, alpha));
    // Graded commutator [i_eta, d] = i_eta d - (-1)^{k} d i_eta.
    r += (k % 2 == 0) ? a - b : a + b;
  }
  return r;
}

PVF lichnerowicz(const CoisoSetup& s, const PVF& xi) { return schouten(s.pi, xi); }

Poly poisson_bracket(const CoisoSetup& s, const Poly& f, const Poly& g) {
  Form df = holo_d(form_function(f));
  Form dg = holo_d(form_function(g));
  return interior(s.pi, wedge(df, dg)).coeff(MIdx{});
}

Form koszul(const CoisoSetup& s, const Form& alpha, const Form& beta) {
  Form r(s.n);
  for (int i : alpha.degrees()) {
    Form a = alpha.part(i);
    Form t = lie_deriv(s.pi, wedge(a, beta)) - wedge(lie_deriv(s.pi, a), beta);
    if (i % 2 != 0) t = -t;
    r += t - wedge(a, lie_deriv(s.pi, beta));
  }
  return r;
}

PVF anchor(const CoisoSetup& s, const Form& alpha) {
  std::vector<PVF> images;
  images.reserve(s.n);
  for (int i = 1; i <= s.n; ++i) images.push_back(lichnerowicz(s, pvf_function(Poly::var(s.n, i))));
  PVF r(s.n);
  for (const auto& [K, f] : alpha.components()) {
    PVF term = pvf_function(f);
    for (int k : K) term = wedge(term, images[k - 1]);
    r += term;
  }
  return r;
}

Form h_op(const CoisoSetup& s, const Form& alpha, const Form& beta) {
  Form r(s.n);
  for (int i : alpha.degrees()) {
    Form a = alpha.part(i);
    Form t = interior(s.pi, wedge(a, beta)) - wedge(interior(s.pi, a), beta) -
             wedge(a, interior(s.pi, beta));
    r += (i % 2 == 0) ? t : -t;
  }
  return r;
}

bool is_poisson(const PVF& pi) {
  for (const auto& [idx, f] : pi.components()) {
    if (idx.size() != 2) throw DomainError("is_poisson expects a bivector");
  }
  return schouten(pi, pi).is_zero();
}

bool is_coisotropic(const CoisoSetup& s) {
  if (!is_poisson(s.pi)) throw DomainError("pi is not a Poisson bivector");
  for (int i = 1; i <= s.p; ++i) {
    for (int j = i + 1; j <= s.p; ++j) {
      if (!s.pi_coeff(i, j).restrict_zero(s.p).is_zero()) return false;
    }
  }
  return true;
}

NormalPVF normal_project(const CoisoSetup& s, const PVF& xi) {
  PVF r(s.n);
  for (const auto& [idx, f] : xi.components()) {
    if (!idx.empty() && idx.back() > s.p) continue;
    r.add(idx, f.restrict_zero(s.p));
  }
  return NormalPVF(s.p, r);
}

bool in_LZ(const CoisoSetup& s, const PVF& xi) { return normal_project(s, xi).is_zero(); }

Form restrict_to_Z(const CoisoSetup& s, const Form& alpha) {
  Form r(s.n);
  for (const auto& [idx, f] : alpha.components()) {
    if (!idx.empty() && idx.front() <= s.p) continue;
    r.add(idx, f.restrict_zero(s.p));
  }
  return r;
}

bool in_IZ(const CoisoSetup& s, const Form& alpha) { return restrict_to_Z(s, alpha).is_zero(); }

NormalPVF normal_dpi(const CoisoSetup& s, const NormalPVF& nu) {
  if (nu.p() != s.p || (!nu.is_zero() && nu.nvars() != s.n)) {
    throw DomainError("normal field does not belong to this setup");
  }
  if (!is_coisotropic(s)) throw DomainError("normal differential requires a coisotropic setup");
  return normal_project(s, lichnerowicz(s, nu.lift()));
}

std::vector<Form> iz_generators(const CoisoSetup& s) {
  std::vector<Form> g;
  for (int j = 1; j <= s.p; ++j) g.push_back(form_function(Poly::var(s.n, j)));
  for (int i = 1; i <= s.p; ++i) g.push_back(coord_form(s.n, i));
  return g;
}

CoisotropyWitness coisotropy_characterizations(const CoisoSetup& s) {
  CoisotropyWitness w;
  w.bivector_test = is_coisotropic(s);
  const auto gens = iz_generators(s);
  w.koszul_closed = true;
  w.h_closed = true;
  for (const auto& a : gens) {
    for (const auto& b : gens) {
      if (!in_IZ(s, koszul(s, a, b))) w.koszul_closed = false;
      if (!in_IZ(s, h_op(s, a, b))) w.h_closed = false;
    }
  }
  w.anchor_maps_ideal = true;
  for (const auto& a : gens) {
    if (!in_LZ(s, anchor(s, a))) w.anchor_maps_ideal = false;
  }
  return w;
}

}  // namespace coisocalc
