#include "coisocalc/totcech.hpp"

#include <fstream>
#include <stdexcept>

namespace coisocalc {

namespace {

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

// (-1)^{form degree} applied componentwise.
Form graded_sign(const Form& w) {
  Form r(w.nvars());
  for (const auto& [idx, f] : w.components()) r.add(idx, (idx.size() % 2 == 0) ? f : -f);
  return r;
}

void subsets(int n, int k, int start, MIdx& cur, std::vector<MIdx>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<MIdx> subsets_of_size(int n, int k) {
  std::vector<MIdx> out;
  MIdx cur;
  if (k >= 0 && k <= n) subsets(n, k, 1, cur, out);
  return out;
}

// Columns of `images` expressed in the basis `basis` (both in ambient coordinates).
Matrix express(int ambient, const std::vector<Vec>& basis, const std::vector<Vec>& images) {
  Matrix B = Matrix::from_columns(ambient, basis);
  Matrix r(static_cast<int>(basis.size()), static_cast<int>(images.size()));
  for (size_t j = 0; j < images.size(); ++j) {
    auto x = solve(B, images[j]);
    if (!x) throw std::logic_error("image left the target subspace");
    for (size_t i = 0; i < basis.size(); ++i) r(static_cast<int>(i), static_cast<int>(j)) = (*x)[i];
  }
  return r;
}

Form constant_form(int n, const Rat& c) { return Form::scalar(Poly::constant(n, c)); }

Rat eval_function_part(const Form& w, const Rat& t) {
  Poly f = w.coeff(MIdx{});
  if (f.is_zero()) return 0;
  std::vector<Poly> images(f.nvars(), Poly::constant(0, t));
  return f.substitute(images, 0).constant_term();
}

}  // namespace

SimplexForm simplex_coord(int n, int i) {
  if (i < 0 || i > n) throw DomainError("simplex coordinate index out of range");
  if (i > 0) return Form::scalar(Poly::var(n, i));
  Poly t0 = Poly::constant(n, 1);
  for (int j = 1; j <= n; ++j) t0 -= Poly::var(n, j);
  return Form::scalar(t0);
}

SimplexForm face_pullback(int k, const SimplexForm& phi, int n) {
  if (n < 1 || k < 0 || k > n) throw DomainError("face index out of range");
  if (!phi.is_zero() && phi.nvars() != n) throw DomainError("form does not live on the n-simplex");
  const int m = n - 1;
  std::vector<Poly> img(n);
  for (int j = 1; j <= n; ++j) {
    if (k == 0) {
      img[j - 1] = (j == 1) ? simplex_coord(m, 0).coeff(MIdx{}) : Poly::var(m, j - 1);
    } else if (j < k) {
      img[j - 1] = Poly::var(m, j);
    } else if (j == k) {
      img[j - 1] = Poly(m);
    } else {
      img[j - 1] = Poly::var(m, j - 1);
    }
  }
  std::vector<Form> dimg;
  for (const auto& p : img) dimg.push_back(holo_d(form_function(p)));
  Form r(m);
  for (const auto& [idx, f] : phi.components()) {
    Form term = Form::scalar(f.substitute(img, m));
    for (int i : idx) term = wedge(term, dimg[i - 1]);
    r += term;
  }
  return r;
}

Rat simplex_integrate(const SimplexForm& phi, int n) {
  if (n < 0) throw DomainError("negative simplex dimension");
  if (!phi.is_zero() && phi.nvars() != n) throw DomainError("form does not live on the n-simplex");
  MIdx top;
  for (int i = 1; i <= n; ++i) top.push_back(i);
  Poly f = phi.coeff(top);
  Rat r = 0;
  for (const auto& [e, c] : f.terms()) {
    Rat num = 1;
    int s = n;
    for (int a : e) {
      num *= factorial(a);
      s += a;
    }
    r += c * num / factorial(s);
  }
  return r;
}

ScsDGLA::ScsDGLA(std::vector<FinDGLA> levels, std::vector<std::vector<Matrix>> faces)
    : levels_(std::move(levels)), faces_(std::move(faces)) {
  if (levels_.empty()) throw DomainError("diagram needs at least one level");
  if (static_cast<int>(faces_.size()) != top()) throw DomainError("need one face family per positive level");
  for (int n = 1; n <= top(); ++n) {
    if (static_cast<int>(faces_[n - 1].size()) != n + 1) throw DomainError("level " + std::to_string(n) + " needs n+1 faces");
    for (const auto& f : faces_[n - 1]) {
      if (f.rows() != levels_[n].dim() || f.cols() != levels_[n - 1].dim()) throw DomainError("face matrix has the wrong shape");
    }
  }
}

std::optional<std::string> ScsDGLA::failure() const {
  for (int n = 0; n <= top(); ++n) {
    if (auto f = levels_[n].axiom_failure()) return "level " + std::to_string(n) + ": " + *f;
  }
  for (int n = 1; n <= top(); ++n) {
    for (int k = 0; k <= n; ++k) {
      if (auto f = morphism_failure(levels_[n - 1], levels_[n], face(n, k))) {
        return "face " + std::to_string(k) + " into level " + std::to_string(n) + ": " + *f;
      }
    }
  }
  // d_l d_k = d_{k+1} d_l for l <= k, as maps L_{n-1} -> L_{n+1}.
  for (int n = 1; n < top(); ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int l = 0; l <= k; ++l) {
        if (!(face(n + 1, l) * face(n, k) == face(n + 1, k + 1) * face(n, l))) {
          return "face relation fails for l=" + std::to_string(l) + ", k=" + std::to_string(k) + " at level " + std::to_string(n);
        }
      }
    }
  }
  return std::nullopt;
}

ScsDGLA ScsDGLA::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("levels")) throw DomainError("diagram document needs \"levels\"");
  std::vector<FinDGLA> levels;
  for (const auto& l : j.at("levels")) levels.push_back(FinDGLA::from_json(l));
  std::vector<std::vector<Matrix>> faces;
  const auto& fj = j.contains("faces") ? j.at("faces") : nlohmann::json::array();
  if (fj.size() + 1 != levels.size()) throw DomainError("need one face family per positive level");
  for (size_t n = 1; n < levels.size(); ++n) {
    std::vector<Matrix> fam;
    for (const auto& m : fj[n - 1]) fam.push_back(matrix_from_json(m, levels[n].dim(), levels[n - 1].dim()));
    faces.push_back(std::move(fam));
  }
  ScsDGLA S(std::move(levels), std::move(faces));
  if (auto f = S.failure()) throw DomainError("invalid diagram: " + *f);
  return S;
}

nlohmann::json ScsDGLA::to_json() const {
  nlohmann::json j;
  j["levels"] = nlohmann::json::array();
  for (const auto& l : levels_) j["levels"].push_back(l.to_json());
  j["faces"] = nlohmann::json::array();
  for (const auto& fam : faces_) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& m : fam) a.push_back(matrix_to_json(m));
    j["faces"].push_back(a);
  }
  return j;
}

ScsDGLA ScsDGLA::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
  return from_json(j);
}

bool TotElem::operator==(const TotElem& o) const { return levels == o.levels; }

TotElem tot_zero(const ScsDGLA& S) {
  TotElem x;
  for (int n = 0; n <= S.top(); ++n) x.levels.emplace_back(S.level(n).dim(), Form(n));
  return x;
}

void check_tot_shape(const ScsDGLA& S, const TotElem& x) {
  if (static_cast<int>(x.levels.size()) != S.top() + 1) throw DomainError("level count mismatch");
  for (int n = 0; n <= S.top(); ++n) {
    if (static_cast<int>(x.levels[n].size()) != S.level(n).dim()) throw DomainError("level shape mismatch");
    for (const auto& w : x.levels[n]) {
      if (!w.is_zero() && w.nvars() != n) throw DomainError("form lives on the wrong simplex");
    }
  }
}

bool tot_check(const ScsDGLA& S, const TotElem& x) {
  check_tot_shape(S, x);
  for (int n = 1; n <= S.top(); ++n) {
    const int dim = S.level(n).dim();
    for (int k = 0; k <= n; ++k) {
      const Matrix& f = S.face(n, k);
      for (int c = 0; c < dim; ++c) {
        Form lhs = face_pullback(k, x.levels[n][c], n);
        Form rhs(n - 1);
        for (int b = 0; b < S.level(n - 1).dim(); ++b) {
          if (f(c, b) != 0) rhs += f(c, b) * x.levels[n - 1][b];
        }
        if (lhs != rhs) return false;
      }
    }
  }
  return true;
}

TotElem tot_diff(const ScsDGLA& S, const TotElem& x) {
  check_tot_shape(S, x);
  TotElem r = tot_zero(S);
  for (int n = 0; n <= S.top(); ++n) {
    const Matrix& d = S.level(n).d_matrix();
    const int dim = S.level(n).dim();
    for (int b = 0; b < dim; ++b) {
      const Form& w = x.levels[n][b];
      if (w.is_zero()) continue;
      r.levels[n][b] += holo_d(w);
      Form sw = graded_sign(w);
      for (int c = 0; c < dim; ++c) {
        if (d(c, b) != 0) r.levels[n][c] += d(c, b) * sw;
      }
    }
  }
  return r;
}

TotElem tot_bracket(const ScsDGLA& S, const TotElem& x, const TotElem& y) {
  check_tot_shape(S, x);
  check_tot_shape(S, y);
  TotElem r = tot_zero(S);
  for (int n = 0; n <= S.top(); ++n) {
    const FinDGLA& L = S.level(n);
    for (int a = 0; a < L.dim(); ++a) {
      if (x.levels[n][a].is_zero()) continue;
      for (int b = 0; b < L.dim(); ++b) {
        const Form& eta = y.levels[n][b];
        if (eta.is_zero()) continue;
        const Vec& s = L.structure(a, b);
        if (is_zero(s)) continue;
        Form eta_s = (L.degrees()[a] % 2 == 0) ? eta : graded_sign(eta);
        Form w = wedge(x.levels[n][a], eta_s);
        for (int c = 0; c < L.dim(); ++c) {
          if (s[c] != 0) r.levels[n][c] += s[c] * w;
        }
      }
    }
  }
  return r;
}

TotElem tot_add(const TotElem& a, const TotElem& b) {
  if (a.levels.size() != b.levels.size()) throw DomainError("level count mismatch");
  TotElem r = a;
  for (size_t n = 0; n < a.levels.size(); ++n) {
    if (a.levels[n].size() != b.levels[n].size()) throw DomainError("level shape mismatch");
    for (size_t i = 0; i < a.levels[n].size(); ++i) r.levels[n][i] += b.levels[n][i];
  }
  return r;
}

TotElem tot_scale(const Rat& s, const TotElem& a) {
  TotElem r = a;
  for (auto& lv : r.levels) {
    for (auto& w : lv) w *= s;
  }
  return r;
}

CochainElem cochain_zero(const ScsDGLA& S) {
  CochainElem c;
  for (int n = 0; n <= S.top(); ++n) c.levels.push_back(S.level(n).zero());
  return c;
}

CochainElem cech_diff(const ScsDGLA& S, const CochainElem& v) {
  if (static_cast<int>(v.levels.size()) != S.top() + 1) throw DomainError("level count mismatch");
  CochainElem r = cochain_zero(S);
  for (int n = 0; n <= S.top(); ++n) {
    if (static_cast<int>(v.levels[n].size()) != S.level(n).dim()) throw DomainError("level shape mismatch");
    r.levels[n] = r.levels[n] + Rat(sign_pow(n)) * S.level(n).d(v.levels[n]);
    if (n < S.top()) {
      for (int k = 0; k <= n + 1; ++k) r.levels[n + 1] = r.levels[n + 1] + Rat(sign_pow(k)) * (S.face(n + 1, k) * v.levels[n]);
    }
  }
  return r;
}

CochainElem whitney_I(const ScsDGLA& S, const TotElem& x) {
  if (!tot_check(S, x)) throw DomainError("element does not satisfy the matching conditions");
  CochainElem c = cochain_zero(S);
  for (int n = 0; n <= S.top(); ++n) {
    for (int b = 0; b < S.level(n).dim(); ++b) c.levels[n][b] = simplex_integrate(x.levels[n][b], n);
  }
  return c;
}

bool in_equalizer(const ScsDGLA& S, const Vec& x) {
  if (static_cast<int>(x.size()) != S.level(0).dim()) throw DomainError("element does not belong to L_0");
  if (S.top() < 1) return true;
  return S.face(1, 0) * x == S.face(1, 1) * x;
}

TotElem e_map(const ScsDGLA& S, const Vec& x) {
  if (!in_equalizer(S, x)) throw DomainError("element is not in the equalizer of d_0, d_1");
  TotElem r = tot_zero(S);
  Vec v = x;
  for (int n = 0; n <= S.top(); ++n) {
    if (n > 0) v = S.face(n, 0) * v;
    for (int b = 0; b < S.level(n).dim(); ++b) {
      if (v[b] != 0) r.levels[n][b] = constant_form(n, v[b]);
    }
  }
  return r;
}

ComplexCohomology complex_cohomology(const FiniteComplex& C) {
  const int len = static_cast<int>(C.dims.size());
  if (static_cast<int>(C.d.size()) != std::max(len - 1, 0)) throw DomainError("need one differential between consecutive degrees");
  ComplexCohomology out;
  out.lo = C.lo;
  out.dims = C.dims;
  for (int i = 0; i < len; ++i) {
    Matrix d_in = (i > 0) ? C.d[i - 1] : Matrix(C.dims[0], 0);
    Matrix d_out = (i + 1 < len) ? C.d[i] : Matrix(0, C.dims[i]);
    if (d_in.rows() != C.dims[i] || d_out.cols() != C.dims[i]) throw DomainError("differential shape mismatch");
    CohomologySlice s;
    try {
      s = cohomology(d_in, d_out);
    } catch (const std::invalid_argument& e) {
      throw DomainError(std::string("not a complex: ") + e.what());
    }
    out.h.push_back(s.h);
    out.representatives.push_back(std::move(s.representatives));
  }
  return out;
}

TotSlice::TotSlice(const ScsDGLA& S, int m, int bound) : S_(&S), m_(m), bound_(bound) {
  for (int n = 0; n <= S.top(); ++n) {
    const FinDGLA& L = S.level(n);
    for (int b = 0; b < L.dim(); ++b) {
      const int j = m - L.degrees()[b];
      if (j < 0 || j > n) continue;
      for (const auto& K : subsets_of_size(n, j)) {
        for (int pd = 0; pd + j <= bound; ++pd) {
          for (const auto& e : monomials_of_degree(n, pd)) {
            Key key{n, b, K, e};
            index_.emplace(key, static_cast<int>(keys_.size()));
            keys_.push_back(std::move(key));
          }
        }
      }
    }
  }
  // Matching conditions as a linear map on ambient coordinates.
  std::map<std::tuple<int, int, int, MIdx, Poly::Exps>, int> rows;
  std::vector<std::vector<std::pair<int, Rat>>> cols(keys_.size());
  auto emit = [&](int col, int n, int k, int c, const Form& w, const Rat& s) {
    for (const auto& [idx, f] : w.components()) {
      for (const auto& [e, coef] : f.terms()) {
        auto it = rows.emplace(std::make_tuple(n, k, c, idx, e), static_cast<int>(rows.size())).first;
        cols[col].emplace_back(it->second, s * coef);
      }
    }
  };
  for (size_t col = 0; col < keys_.size(); ++col) {
    const Key& key = keys_[col];
    const int n = key.level;
    Form w = Form::basis(n, key.forms, Poly::monomial(n, key.exps, 1));
    if (n >= 1) {
      for (int k = 0; k <= n; ++k) emit(static_cast<int>(col), n, k, key.b, face_pullback(k, w, n), 1);
    }
    if (n < S.top()) {
      for (int k = 0; k <= n + 1; ++k) {
        const Matrix& f = S.face(n + 1, k);
        for (int c = 0; c < f.rows(); ++c) {
          if (f(c, key.b) != 0) emit(static_cast<int>(col), n + 1, k, c, w, -f(c, key.b));
        }
      }
    }
  }
  Matrix cond(static_cast<int>(rows.size()), static_cast<int>(keys_.size()));
  for (size_t col = 0; col < cols.size(); ++col) {
    for (const auto& [r, v] : cols[col]) cond(r, static_cast<int>(col)) += v;
  }
  basis_ = kernel(cond);
}

TotElem TotSlice::element(const Vec& a) const {
  if (static_cast<int>(a.size()) != ambient_dim()) throw DomainError("ambient coordinate length mismatch");
  TotElem x = tot_zero(*S_);
  for (size_t i = 0; i < keys_.size(); ++i) {
    if (a[i] == 0) continue;
    const Key& k = keys_[i];
    x.levels[k.level][k.b].add(k.forms, Poly::monomial(k.level, k.exps, a[i]));
  }
  return x;
}

Vec TotSlice::coords(const TotElem& x) const {
  check_tot_shape(*S_, x);
  Vec a(ambient_dim());
  for (int n = 0; n <= S_->top(); ++n) {
    for (int b = 0; b < S_->level(n).dim(); ++b) {
      for (const auto& [idx, f] : x.levels[n][b].components()) {
        for (const auto& [e, c] : f.terms()) {
          auto it = index_.find(Key{n, b, idx, e});
          if (it == index_.end()) throw DomainError("element leaves the bounded slice");
          a[it->second] = c;
        }
      }
    }
  }
  return a;
}

Vec CochainSlice::coords(const CochainElem& c) const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = c.levels.at(keys[i].first).at(keys[i].second);
  return v;
}

CochainElem CochainSlice::element(const ScsDGLA& S, const Vec& v) const {
  CochainElem c = cochain_zero(S);
  for (int i = 0; i < dim(); ++i) c.levels[keys[i].first][keys[i].second] = v.at(i);
  return c;
}

CochainSlice cochain_slice(const ScsDGLA& S, int m) {
  CochainSlice s;
  s.m = m;
  for (int n = 0; n <= S.top(); ++n) {
    for (int b : S.level(n).indices_of_degree(m - n)) s.keys.emplace_back(n, b);
  }
  return s;
}

std::pair<int, int> total_degree_range(const ScsDGLA& S) {
  int lo = S.level(0).min_degree(), hi = S.level(0).max_degree();
  for (int n = 0; n <= S.top(); ++n) {
    if (S.level(n).dim() == 0) continue;
    lo = std::min(lo, S.level(n).min_degree());
    hi = std::max(hi, S.level(n).max_degree() + n);
  }
  return {lo, hi};
}

FiniteComplex tot_complex(const ScsDGLA& S, int bound) {
  auto [lo, hi] = total_degree_range(S);
  FiniteComplex C;
  C.lo = lo;
  std::vector<TotSlice> slices;
  for (int m = lo; m <= hi; ++m) {
    slices.emplace_back(S, m, bound);
    C.dims.push_back(slices.back().dim());
  }
  for (size_t i = 0; i + 1 < slices.size(); ++i) {
    std::vector<Vec> images;
    for (const auto& v : slices[i].basis()) images.push_back(slices[i + 1].coords(tot_diff(S, slices[i].element(v))));
    C.d.push_back(express(slices[i + 1].ambient_dim(), slices[i + 1].basis(), images));
  }
  return C;
}

FiniteComplex cochain_complex(const ScsDGLA& S) {
  auto [lo, hi] = total_degree_range(S);
  FiniteComplex C;
  C.lo = lo;
  std::vector<CochainSlice> slices;
  for (int m = lo; m <= hi; ++m) {
    slices.push_back(cochain_slice(S, m));
    C.dims.push_back(slices.back().dim());
  }
  for (size_t i = 0; i + 1 < slices.size(); ++i) {
    Matrix d(slices[i + 1].dim(), slices[i].dim());
    for (int c = 0; c < slices[i].dim(); ++c) {
      Vec e(slices[i].dim());
      e[c] = 1;
      Vec img = slices[i + 1].coords(cech_diff(S, slices[i].element(S, e)));
      for (int r = 0; r < d.rows(); ++r) d(r, c) = img[r];
    }
    C.d.push_back(std::move(d));
  }
  return C;
}

TotElem tot_map(const std::vector<Matrix>& f, const TotElem& x) {
  if (f.size() != x.levels.size()) throw DomainError("level count mismatch");
  TotElem r;
  for (size_t n = 0; n < f.size(); ++n) {
    if (f[n].cols() != static_cast<int>(x.levels[n].size())) throw DomainError("level shape mismatch");
    std::vector<Form> lv(f[n].rows(), Form(static_cast<int>(n)));
    for (int c = 0; c < f[n].rows(); ++c) {
      for (int b = 0; b < f[n].cols(); ++b) {
        if (f[n](c, b) != 0) lv[c] += f[n](c, b) * x.levels[n][b];
      }
    }
    r.levels.push_back(std::move(lv));
  }
  return r;
}

HFiber::HFiber(FinDGLA L, FinDGLA M, Matrix chi) : L_(std::move(L)), M_(std::move(M)), chi_(std::move(chi)) {
  if (auto f = morphism_failure(L_, M_, chi_)) throw DomainError("chi is not a DGLA morphism: " + *f);
  injective_ = rank(chi_) == L_.dim();
  // Left kernel of chi, degree by degree, gives coordinates on the cokernel.
  std::vector<Vec> rows;
  for (int k = M_.min_degree(); k <= M_.max_degree(); ++k) {
    auto mi = M_.indices_of_degree(k);
    auto li = L_.indices_of_degree(k);
    if (mi.empty()) continue;
    Matrix blockT(static_cast<int>(li.size()), static_cast<int>(mi.size()));
    for (size_t r = 0; r < li.size(); ++r)
      for (size_t c = 0; c < mi.size(); ++c) blockT(static_cast<int>(r), static_cast<int>(c)) = chi_(mi[c], li[r]);
    for (const auto& w : kernel(blockT)) {
      Vec row(M_.dim());
      for (size_t c = 0; c < mi.size(); ++c) row[mi[c]] = w[c];
      rows.push_back(std::move(row));
      coker_deg_.push_back(k);
    }
  }
  coker_proj_ = Matrix(static_cast<int>(rows.size()), M_.dim());
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < M_.dim(); ++c) coker_proj_(static_cast<int>(r), c) = rows[r][c];
  // Induced differential Q d_M S with S a right inverse of Q.
  std::vector<Vec> section;
  for (int i = 0; i < coker_proj_.rows(); ++i) {
    Vec e(coker_proj_.rows());
    e[i] = 1;
    section.push_back(*solve(coker_proj_, e));
  }
  coker_d_ = Matrix(coker_proj_.rows(), coker_proj_.rows());
  for (int i = 0; i < coker_proj_.rows(); ++i) {
    Vec img = coker_proj_ * M_.d(section[i]);
    for (int r = 0; r < coker_proj_.rows(); ++r) coker_d_(r, i) = img[r];
  }
}

bool HFiber::contains(const HFiberElem& z) const {
  if (static_cast<int>(z.l.size()) != L_.dim() || static_cast<int>(z.m.size()) != M_.dim()) {
    throw DomainError("element shape mismatch");
  }
  Vec target = chi_ * z.l;
  for (int b = 0; b < M_.dim(); ++b) {
    if (eval_function_part(z.m[b], 0) != 0) return false;
    if (eval_function_part(z.m[b], 1) != target[b]) return false;
  }
  return true;
}

HFiberElem HFiber::diff(const HFiberElem& z) const {
  HFiberElem r{L_.d(z.l), std::vector<Form>(M_.dim(), Form(1))};
  const Matrix& d = M_.d_matrix();
  for (int b = 0; b < M_.dim(); ++b) {
    const Form& w = z.m.at(b);
    if (w.is_zero()) continue;
    r.m[b] += holo_d(w);
    Form sw = graded_sign(w);
    for (int c = 0; c < M_.dim(); ++c) {
      if (d(c, b) != 0) r.m[c] += d(c, b) * sw;
    }
  }
  return r;
}

HFiberElem HFiber::bracket(const HFiberElem& x, const HFiberElem& y) const {
  HFiberElem r{L_.bracket(x.l, y.l), std::vector<Form>(M_.dim(), Form(1))};
  for (int a = 0; a < M_.dim(); ++a) {
    if (x.m.at(a).is_zero()) continue;
    for (int b = 0; b < M_.dim(); ++b) {
      const Form& eta = y.m.at(b);
      const Vec& s = M_.structure(a, b);
      if (eta.is_zero() || is_zero(s)) continue;
      Form w = wedge(x.m[a], (M_.degrees()[a] % 2 == 0) ? eta : graded_sign(eta));
      for (int c = 0; c < M_.dim(); ++c) {
        if (s[c] != 0) r.m[c] += s[c] * w;
      }
    }
  }
  return r;
}

std::vector<HFiberElem> HFiber::slice_basis(int m, int bound) const {
  // Ambient coordinates: L^m, then (basis b of M, j in {0, 1}, power a) for t^a dt^j (x) e_b.
  auto li = L_.indices_of_degree(m);
  struct Slot {
    int b, j, a;
  };
  std::vector<Slot> slots;
  for (int b = 0; b < M_.dim(); ++b) {
    const int j = m - M_.degrees()[b];
    if (j < 0 || j > 1) continue;
    for (int a = 0; a + j <= bound; ++a) slots.push_back({b, j, a});
  }
  const int nl = static_cast<int>(li.size());
  const int amb = nl + static_cast<int>(slots.size());
  // Rows: e_0 and e_1 - chi(l) for every basis vector of M.
  Matrix cond(2 * M_.dim(), amb);
  for (int c = 0; c < nl; ++c)
    for (int b = 0; b < M_.dim(); ++b) cond(M_.dim() + b, c) = -chi_(b, li[c]);
  for (size_t s = 0; s < slots.size(); ++s) {
    const Slot& sl = slots[s];
    if (sl.j != 0) continue;
    const int col = nl + static_cast<int>(s);
    if (sl.a == 0) cond(sl.b, col) = 1;  // value at t = 0
    cond(M_.dim() + sl.b, col) = 1;      // value at t = 1
  }
  std::vector<HFiberElem> out;
  for (const auto& v : kernel(cond)) {
    HFiberElem z{L_.zero(), std::vector<Form>(M_.dim(), Form(1))};
    for (int c = 0; c < nl; ++c) z.l[li[c]] = v[c];
    for (size_t s = 0; s < slots.size(); ++s) {
      const Rat& x = v[nl + s];
      if (x == 0) continue;
      const Slot& sl = slots[s];
      z.m[sl.b].add(sl.j == 0 ? MIdx{} : MIdx{1}, Poly::monomial(1, {sl.a}, x));
    }
    out.push_back(std::move(z));
  }
  return out;
}

namespace {

Vec hfiber_coords(const FinDGLA& L, const FinDGLA& M, int bound, const HFiberElem& z) {
  // Flattened (l, coefficient of t^a dt^j for each b) in a fixed layout.
  Vec v = z.l;
  for (int b = 0; b < M.dim(); ++b) {
    for (int j = 0; j <= 1; ++j) {
      Poly f = z.m[b].coeff(j == 0 ? MIdx{} : MIdx{1});
      for (int a = 0; a <= bound + 1; ++a) {
        Rat c = 0;
        auto it = f.terms().find(Poly::Exps{a});
        if (it != f.terms().end()) c = it->second;
        v.push_back(c);
      }
      if (f.degree() > bound + 1) throw DomainError("element leaves the bounded slice");
    }
  }
  (void)L;
  return v;
}

}  // namespace

FiniteComplex HFiber::complex(int bound) const {
  int lo = std::min(L_.min_degree(), M_.min_degree());
  int hi = std::max(L_.max_degree(), M_.max_degree() + 1);
  FiniteComplex C;
  C.lo = lo;
  std::vector<std::vector<Vec>> coords;
  for (int m = lo; m <= hi; ++m) {
    std::vector<Vec> cs;
    for (const auto& z : slice_basis(m, bound)) cs.push_back(hfiber_coords(L_, M_, bound, z));
    C.dims.push_back(static_cast<int>(cs.size()));
    coords.push_back(std::move(cs));
  }
  const int amb = L_.dim() + M_.dim() * 2 * (bound + 2);
  for (int m = lo; m < hi; ++m) {
    std::vector<Vec> images;
    for (const auto& z : slice_basis(m, bound)) images.push_back(hfiber_coords(L_, M_, bound, diff(z)));
    C.d.push_back(express(amb, coords[m + 1 - lo], images));
  }
  return C;
}

Vec HFiber::integrate01(const HFiberElem& z) const {
  if (!injective_) throw DomainError("integration to the cokernel needs an injective chi");
  if (static_cast<int>(z.m.size()) != M_.dim()) throw DomainError("element shape mismatch");
  Vec v(M_.dim());
  for (int b = 0; b < M_.dim(); ++b) {
    Poly g = z.m[b].coeff(MIdx{1});
    for (const auto& [e, c] : g.terms()) v[b] += c / (e[0] + 1);
  }
  return coker_class(v);
}

ScsDGLA chi_diagram(const FinDGLA& L, const FinDGLA& M, const Matrix& chi) {
  return ScsDGLA({L, M}, {{chi, Matrix(M.dim(), L.dim())}});
}

TotVerifyReport verify_tot(const ScsDGLA& S, int bound) {
  TotVerifyReport r;
  r.bound = bound;
  r.chain_map = true;
  auto [lo, hi] = total_degree_range(S);
  for (int m = lo; m <= hi; ++m) {
    TotSlice sl(S, m, bound);
    for (const auto& b : sl.basis()) {
      TotElem x = sl.element(b);
      if (!(whitney_I(S, tot_diff(S, x)) == cech_diff(S, whitney_I(S, x)))) r.chain_map = false;
      ++r.checked;
    }
  }
  r.inclusion = true;
  std::vector<Vec> eq = S.top() >= 1 ? kernel(S.face(1, 0) - S.face(1, 1)) : kernel(Matrix(0, S.level(0).dim()));
  for (const auto& x : eq) {
    TotElem ex = e_map(S, x);
    CochainElem incl = cochain_zero(S);
    incl.levels[0] = x;
    if (!tot_check(S, ex) || !(whitney_I(S, ex) == incl)) r.inclusion = false;
    ++r.checked;
  }
  r.tot = complex_cohomology(tot_complex(S, bound));
  r.cech = complex_cohomology(cochain_complex(S));
  r.agree = r.tot.lo == r.cech.lo && r.tot.h == r.cech.h;
  return r;
}

}  // namespace coisocalc
