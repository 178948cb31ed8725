#include "coisocalc/mcdeform.hpp"

#include <set>
#include <stdexcept>

namespace coisocalc {

ArtinScalar ArtinScalar::constant(int order, const Rat& r) {
  ArtinScalar a(order);
  a.c_.at(0) = r;
  return a;
}

ArtinScalar ArtinScalar::t_power(int order, int k) {
  ArtinScalar a(order);
  if (k < order) a.c_.at(k) = 1;
  return a;
}

bool ArtinScalar::is_zero() const {
  for (const auto& x : c_) {
    if (x != 0) return false;
  }
  return true;
}

ArtinScalar& ArtinScalar::operator+=(const ArtinScalar& o) {
  if (o.order() != order()) throw DomainError("Artin order mismatch");
  for (int k = 0; k < order(); ++k) c_[k] += o.c_[k];
  return *this;
}

ArtinScalar& ArtinScalar::operator-=(const ArtinScalar& o) {
  if (o.order() != order()) throw DomainError("Artin order mismatch");
  for (int k = 0; k < order(); ++k) c_[k] -= o.c_[k];
  return *this;
}

ArtinScalar operator*(const ArtinScalar& a, const ArtinScalar& b) {
  if (a.order() != b.order()) throw DomainError("Artin order mismatch");
  ArtinScalar r(a.order());
  for (int i = 0; i < a.order(); ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; i + j < a.order(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

ArtinScalar operator*(const Rat& r, ArtinScalar a) {
  for (auto& x : a.c_) x *= r;
  return a;
}

FinExtendResult mc_extend(const FinDGLA& L, const ArtinSeries<Vec>& x) {
  FinArena ar(L);
  if (!series_is_zero(ar, mc_residual(ar, x))) throw DomainError("input is not Maurer-Cartan modulo t^k");
  const int k = x.order();
  FinExtendResult out;
  out.order = k + 1;
  ArtinSeries<Vec> lift = x.resized(k + 1);
  Vec b = series_scale(ar, Rat(1, 2), series_bracket(ar, lift, lift))[k];
  auto src = L.indices_of_degree(1);
  auto tgt = L.indices_of_degree(2);
  Vec rhs(tgt.size());
  for (size_t r = 0; r < tgt.size(); ++r) rhs[r] = -b[tgt[r]];
  auto sol = solve(L.d_block(1), rhs);
  if (!sol) {
    out.obstruction = b;
    out.obstruction_cocycle = is_zero(L.d(b));
    out.lift = lift;
    return out;
  }
  Vec xk = L.zero();
  for (size_t c = 0; c < src.size(); ++c) xk[src[c]] = (*sol)[c];
  lift.set(k, xk);
  if (!series_is_zero(ar, mc_residual(ar, lift))) throw std::logic_error("extension step left a residual");
  out.extended = true;
  out.lift = std::move(lift);
  return out;
}

namespace {

void subsets(int p, int k, int start, MIdx& cur, std::vector<MIdx>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= p; ++i) {
    cur.push_back(i);
    subsets(p, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Degrees of all monomials occurring in the coefficients of pi.
std::set<int> pi_term_degrees(const CoisoSetup& s) {
  std::set<int> ds;
  for (const auto& [idx, f] : s.pi.components()) {
    for (const auto& [e, c] : f.terms()) {
      int d = 0;
      for (int x : e) d += x;
      ds.insert(d);
    }
  }
  return ds;
}

Matrix dpi_matrix(const CoisoSetup& s, const NormalSlice& src, const NormalSlice& tgt) {
  Matrix m(tgt.dim(), src.dim());
  for (int c = 0; c < src.dim(); ++c) {
    Vec col = tgt.coords(normal_dpi(s, src.basis[c]));
    for (int r = 0; r < tgt.dim(); ++r) m(r, c) = col[r];
  }
  return m;
}

// Lowest and highest monomial degree in the coefficients of pi.
std::pair<int, int> pi_degree_range(const CoisoSetup& s) {
  auto ds = pi_term_degrees(s);
  if (ds.empty()) return {1, 1};
  return {*ds.begin(), *ds.rbegin()};
}

void require_slice_setup(const CoisoSetup& s) {
  if (!is_coisotropic(s)) throw DomainError("slice computations require a coisotropic setup");
}

}  // namespace

Vec NormalSlice::coords(const NormalPVF& v) const {
  Vec c(dim());
  for (const auto& [idx, f] : v.lift().components()) {
    for (const auto& [e, coef] : f.terms()) {
      auto it = index.find({idx, e});
      if (it == index.end()) throw std::out_of_range("normal field leaves the slice");
      c[it->second] = coef;
    }
  }
  return c;
}

NormalPVF NormalSlice::element(const Vec& c) const {
  if (static_cast<int>(c.size()) != dim()) throw std::invalid_argument("coordinate length mismatch");
  PVF v(n);
  for (int i = 0; i < dim(); ++i) {
    if (c[i] != 0) v += c[i] * basis[i].lift();
  }
  return NormalPVF(p, v);
}

NormalSlice normal_slice(const CoisoSetup& s, int ext_degree, int dmin, int dmax) {
  NormalSlice sl;
  sl.n = s.n;
  sl.p = s.p;
  sl.ext_degree = ext_degree;
  sl.dmin = dmin;
  sl.dmax = dmax;
  std::vector<MIdx> idxs;
  MIdx cur;
  if (ext_degree >= 0) subsets(s.p, ext_degree, 1, cur, idxs);
  for (int d = std::max(dmin, 0); d <= dmax; ++d) {
    auto monos = monomials_of_degree(s.n - s.p, d);
    for (const auto& idx : idxs) {
      for (const auto& m : monos) {
        Poly::Exps e(s.n, 0);
        for (int i = 0; i < s.n - s.p; ++i) e[s.p + i] = m[i];
        sl.index.emplace(std::make_pair(idx, e), sl.dim());
        sl.keys.emplace_back(idx, e);
        sl.basis.emplace_back(s.p, PVF::basis(s.n, idx, Poly::monomial(s.n, e, 1)));
      }
    }
  }
  return sl;
}

std::optional<int> pi_coeff_degree(const CoisoSetup& s) {
  auto ds = pi_term_degrees(s);
  if (ds.empty()) return 1;
  if (ds.size() > 1) return std::nullopt;
  return *ds.begin();
}

GradedSlice normal_complex_slice(const CoisoSetup& s, int ext_degree, int dmin, int dmax) {
  require_slice_setup(s);
  auto [emin, emax] = pi_degree_range(s);
  GradedSlice g;
  g.source = normal_slice(s, ext_degree, dmin, dmax);
  g.target = normal_slice(s, ext_degree + 1, dmin + emin - 1, dmax + emax - 1);
  g.differential = dpi_matrix(s, g.source, g.target);
  return g;
}

SliceBasis t1_basis(const CoisoSetup& s, int d, std::optional<int> cap) {
  require_slice_setup(s);
  SliceBasis out;
  out.coeff_degree = d;
  int lo = d, hi = d;
  if (!pi_coeff_degree(s)) {
    if (!cap) throw DomainError("pi is not homogeneous; a coefficient-degree cap is required");
    if (d > *cap) throw DomainError("degree exceeds the cap");
    lo = 0;
    hi = *cap;
    out.truncated = true;
  }
  GradedSlice g = normal_complex_slice(s, 1, lo, hi);
  out.source_dim = g.source.dim();
  for (const auto& v : kernel(g.differential)) out.basis.push_back(g.source.element(v));
  return out;
}

SliceBasis obstruction_space_basis(const CoisoSetup& s, int d, std::optional<int> cap) {
  require_slice_setup(s);
  SliceBasis out;
  out.coeff_degree = d;
  auto [emin, emax] = pi_degree_range(s);
  int lo = d, hi = d;
  int src_lo = d - emax + 1, src_hi = d - emax + 1;
  if (!pi_coeff_degree(s)) {
    if (!cap) throw DomainError("pi is not homogeneous; a coefficient-degree cap is required");
    if (d > *cap) throw DomainError("degree exceeds the cap");
    lo = 0;
    hi = *cap;
    src_lo = 0;
    src_hi = *cap - emax + 1;
    out.truncated = true;
  }
  GradedSlice out_map = normal_complex_slice(s, 2, lo, hi);
  NormalSlice src = normal_slice(s, 1, src_lo, src_hi);
  Matrix d_in = dpi_matrix(s, src, out_map.source);
  CohomologySlice h = cohomology(d_in, out_map.differential);
  out.source_dim = h.dim;
  for (const auto& v : h.representatives) out.basis.push_back(out_map.source.element(v));
  return out;
}

namespace {

void require_normal(const CoisoSetup& s, const ArtinSeries<PVF>& nu) {
  for (int k = 1; k < nu.order(); ++k) {
    if (nu[k].is_zero()) continue;
    if (nu[k].nvars() != s.n) throw DomainError("normal field has the wrong number of variables");
    NormalPVF check(s.p, nu[k]);
    if (nu[k].degree() != 1) throw DomainError("deformation parameters must be vector fields");
  }
}

}  // namespace

ArtinSeries<PVF> embedded_mc(const CoisoSetup& s, const ArtinSeries<PVF>& nu) {
  PvfArena ar(s.n, s.pi);
  return gauge(ar, nu, zero_series(ar, nu.order()));
}

ArtinSeries<PVF> coisotropy_residual(const CoisoSetup& s, const ArtinSeries<PVF>& nu) {
  ArtinSeries<PVF> x = embedded_mc(s, nu);
  ArtinSeries<PVF> r(nu.order(), PVF(s.n));
  for (int k = 1; k < x.order(); ++k) r.set(k, normal_project(s, x[k]).lift());
  return r;
}

EmbeddedExtendResult mc_extend(const CoisoSetup& s, const ArtinSeries<PVF>& nu) {
  require_slice_setup(s);
  require_normal(s, nu);
  PvfArena ar(s.n, s.pi);
  if (!series_is_zero(ar, coisotropy_residual(s, nu))) {
    throw DomainError("input is not a coisotropic deformation modulo t^k");
  }
  const int k = nu.order();
  EmbeddedExtendResult out;
  out.order = k + 1;
  out.truncated = !pi_coeff_degree(s).has_value();
  out.nu = nu.resized(k + 1);
  out.x = embedded_mc(s, out.nu);
  NormalPVF c = normal_project(s, out.x[k]);
  if (c.is_zero()) {
    out.extended = true;
    return out;
  }
  const int emax = pi_degree_range(s).second;
  const int top = c.lift().max_coeff_degree();
  NormalSlice src = normal_slice(s, 1, 0, top + 1);
  NormalSlice tgt = normal_slice(s, 2, 0, std::max(top + emax, top));
  Matrix m = dpi_matrix(s, src, tgt);
  auto sol = solve(m, tgt.coords(c));
  if (!sol) {
    out.obstruction = c;
    out.obstruction_cocycle = normal_dpi(s, c).is_zero();
    return out;
  }
  out.nu.set(k, src.element(*sol).lift());
  out.x = embedded_mc(s, out.nu);
  if (!series_is_zero(ar, coisotropy_residual(s, out.nu))) {
    throw std::logic_error("extension step left a coisotropy residual");
  }
  out.extended = true;
  return out;
}

EmbeddedExtendResult mc_extend_to(const CoisoSetup& s, const NormalPVF& nu1, int order) {
  if (order < 2) throw DomainError("target order must be at least 2");
  require_slice_setup(s);
  ArtinSeries<PVF> nu(2, PVF(s.n));
  if (!nu1.is_zero()) nu.set(1, nu1.lift());
  require_normal(s, nu);
  EmbeddedExtendResult r;
  r.order = 2;
  r.extended = true;
  r.truncated = !pi_coeff_degree(s).has_value();
  r.nu = nu;
  r.x = embedded_mc(s, nu);
  if (!normal_project(s, r.x[1]).is_zero()) throw DomainError("first-order datum is not in the kernel of normal_dpi");
  while (r.nu.order() < order) {
    r = mc_extend(s, r.nu);
    if (!r.extended) return r;
  }
  return r;
}

NormalPVF anchor_first_order(const CoisoSetup& s, const Form& omega) {
  if (omega.is_zero()) return NormalPVF(s.n, s.p);
  if (omega.nvars() != s.n) throw DomainError("form has the wrong number of variables");
  if (omega.degree() != 1) throw DomainError("expected a 1-form");
  for (const auto& [idx, f] : omega.components()) {
    if (idx.front() <= s.p) throw DomainError("form is not a form on Z: it involves dz_1..dz_p");
    if (!f.free_of_first(s.p)) throw DomainError("form is not a form on Z: coefficient depends on z_1..z_p");
  }
  if (!holo_d(omega).is_zero()) throw DomainError("1-form is not closed");
  return normal_project(s, anchor(s, omega));
}

}  // namespace coisocalc
