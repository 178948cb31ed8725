#include "coisocalc/linf.hpp"

#include <algorithm>
#include <fstream>

namespace coisocalc {

namespace {

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

Vec bilinear(const HTable& t, const Vec& a, const Vec& b, int dim) {
  Vec r(dim);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      r = r + (a[i] * b[j]) * t[i][j];
    }
  }
  return r;
}

// Sorts a basis index tuple into nondecreasing order and returns the Koszul sign,
// or 0 when an odd index repeats.
int sort_tuple(std::vector<int>& idx, const std::vector<int>& vdeg) {
  int s = 1;
  for (size_t i = 1; i < idx.size(); ++i) {
    for (size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      s *= sign_pow(vdeg[idx[j - 1]] * vdeg[idx[j]]);
      std::swap(idx[j - 1], idx[j]);
    }
  }
  for (size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] == idx[i - 1] && vdeg[idx[i]] % 2 != 0) return 0;
  }
  return s;
}

void for_each_tuple(int dim, int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(n, 0);
  if (dim == 0) return;
  while (true) {
    f(idx);
    int p = n - 1;
    while (p >= 0 && idx[p] == dim - 1) idx[p--] = 0;
    if (p < 0) return;
    ++idx[p];
  }
}

}  // namespace

int koszul_sign(const std::vector<int>& degrees, const std::vector<int>& perm) {
  int s = 1;
  for (size_t p = 0; p < perm.size(); ++p) {
    for (size_t q = p + 1; q < perm.size(); ++q) {
      if (perm[p] > perm[q]) s *= sign_pow(degrees[perm[p]] * degrees[perm[q]]);
    }
  }
  return s;
}

std::vector<std::vector<int>> unshuffles(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    for (int i = 0; i < n; ++i)
      if (!pick[i]) s.push_back(i);
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

GradedOps<Vec> vec_ops(std::vector<int> degrees) {
  GradedOps<Vec> o;
  const int dim = static_cast<int>(degrees.size());
  o.degree = [degrees](const Vec& v) {
    std::optional<int> k;
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      if (k && *k != degrees[i]) throw DomainError("element is not homogeneous");
      k = degrees[i];
    }
    if (!k) throw DomainError("degree of the zero element");
    return *k;
  };
  o.add = [](const Vec& a, const Vec& b) { return a + b; };
  o.scale = [](const Rat& s, const Vec& a) { return s * a; };
  o.zero = [dim] { return Vec(dim); };
  o.is_zero = [](const Vec& v) { return is_zero(v); };
  return o;
}

SymMap SymMap::tabulate(std::vector<int> vdeg, int arity, int degree, const std::function<Vec(const std::vector<int>&)>& on_basis) {
  if (arity < 1) throw DomainError("arity must be positive");
  SymMap m;
  m.arity = arity;
  m.degree = degree;
  m.vdeg = std::move(vdeg);
  const int dim = static_cast<int>(m.vdeg.size());
  std::map<std::vector<int>, Vec> raw;
  for_each_tuple(dim, arity, [&](const std::vector<int>& idx) { raw.emplace(idx, on_basis(idx)); });
  for (const auto& [idx, v] : raw) {
    if (static_cast<int>(v.size()) != dim) throw DomainError("map value has the wrong length");
    std::vector<int> s = idx;
    const int sign = sort_tuple(s, m.vdeg);
    if (sign == 0) {
      if (!coisocalc::is_zero(v)) throw DomainError("map is not graded symmetric (repeated odd argument)");
      continue;
    }
    const Vec& ref = raw.at(s);
    if (v != Rat(sign) * ref) throw DomainError("map is not graded symmetric");
    if (s == idx && !coisocalc::is_zero(v)) m.table.emplace(idx, v);
  }
  return m;
}

Vec SymMap::eval(const std::vector<Vec>& xs) const {
  if (static_cast<int>(xs.size()) != arity) throw DomainError("wrong number of arguments");
  const int dim = static_cast<int>(vdeg.size());
  for (const auto& x : xs) {
    if (static_cast<int>(x.size()) != dim) throw DomainError("argument has the wrong length");
  }
  Vec r(dim);
  std::vector<int> idx(arity);
  std::function<void(int, Rat)> rec = [&](int k, Rat c) {
    if (k == arity) {
      std::vector<int> s = idx;
      const int sign = sort_tuple(s, vdeg);
      if (sign == 0) return;
      auto it = table.find(s);
      if (it != table.end()) r = r + (c * sign) * it->second;
      return;
    }
    for (int i = 0; i < dim; ++i) {
      if (xs[k][i] == 0) continue;
      idx[k] = i;
      rec(k + 1, c * xs[k][i]);
    }
  };
  rec(0, 1);
  return r;
}

MultiMap<Vec> SymMap::as_map() const {
  SymMap self = *this;
  return {arity, degree, [self](const std::vector<Vec>& xs) { return self.eval(xs); }};
}

bool SymMap::is_zero() const { return table.empty(); }

std::pair<SymMap, SymMap> decalage(const FinDGLA& L) {
  std::vector<int> vdeg;
  for (int d : L.degrees()) vdeg.push_back(d - 1);
  SymMap q1 = SymMap::tabulate(vdeg, 1, 1, [&](const std::vector<int>& i) { return Rat(-1) * L.d(L.basis(i[0])); });
  SymMap q2 = SymMap::tabulate(vdeg, 2, 1, [&](const std::vector<int>& i) {
    return Rat(sign_pow(L.degrees()[i[0]])) * L.structure(i[0], i[1]);
  });
  return {q1, q2};
}

DglaCarrier<Vec> findgla_carrier(const FinDGLA& L, HTable h) {
  if (static_cast<int>(h.size()) != L.dim()) throw DomainError("h table has the wrong size");
  for (const auto& row : h) {
    if (static_cast<int>(row.size()) != L.dim()) throw DomainError("h table has the wrong size");
    for (const auto& v : row) {
      if (static_cast<int>(v.size()) != L.dim()) throw DomainError("h value has the wrong length");
    }
  }
  DglaCarrier<Vec> c;
  c.ops = vec_ops(L.degrees());
  c.d = [L](const Vec& v) { return L.d(v); };
  c.bracket = [L](const Vec& a, const Vec& b) { return L.bracket(a, b); };
  const int dim = L.dim();
  c.h = [h = std::move(h), dim](const Vec& a, const Vec& b) { return bilinear(h, a, b, dim); };
  return c;
}

DglaCarrier<Form> koszul_carrier(const CoisoSetup& s) {
  DglaCarrier<Form> c;
  const int n = s.n;
  c.ops.degree = [](const Form& a) { return a.degree() - 1; };
  c.ops.add = [](const Form& a, const Form& b) { return a + b; };
  c.ops.scale = [](const Rat& r, const Form& a) { return r * a; };
  c.ops.zero = [n] { return Form(n); };
  c.ops.is_zero = [](const Form& a) { return a.is_zero(); };
  c.d = [](const Form& a) { return -holo_d(a); };
  c.bracket = [s](const Form& a, const Form& b) { return koszul(s, a, b); };
  c.h = [s](const Form& a, const Form& b) { return h_op(s, a, b); };
  return c;
}

std::optional<std::string> SplitGLA::failure(const FinDGLA& M, const std::vector<bool>& in_a, const Matrix& D) {
  const int m = M.dim();
  if (static_cast<int>(in_a.size()) != m) return "partition flags do not match the basis";
  if (D.rows() != m || D.cols() != m) return "derivation has the wrong shape";
  if (!M.d_matrix().is_zero()) return "the algebra must carry zero differential";
  if (auto f = M.axiom_failure()) return *f;
  for (int i = 0; i < m; ++i) {
    Vec di = D.column(i);
    if (!is_zero(di) && M.degree(di) != M.degrees()[i] + 1) return "derivation is not of degree 1";
    if (!is_zero(D * di)) return "derivation does not square to zero";
    if (!in_a[i]) {
      for (int j = 0; j < m; ++j)
        if (in_a[j] && di[j] != 0) return "D(L) is not contained in L";
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Vec& b = M.structure(i, j);
      Vec lhs = D * b;
      Vec rhs = M.bracket(D.column(i), M.basis(j)) + Rat(sign_pow(M.degrees()[i])) * M.bracket(M.basis(i), D.column(j));
      if (lhs != rhs) return "D is not a derivation of the bracket";
      if (in_a[i] && in_a[j] && !is_zero(b)) return "A is not abelian";
      if (!in_a[i] && !in_a[j]) {
        for (int k = 0; k < m; ++k)
          if (in_a[k] && b[k] != 0) return "L is not a subalgebra";
      }
    }
  }
  return std::nullopt;
}

SplitGLA::SplitGLA(FinDGLA M, std::vector<bool> in_a, Matrix D) : M_(std::move(M)), in_a_(std::move(in_a)), D_(std::move(D)) {
  if (auto f = failure(M_, in_a_, D_)) throw DomainError("invalid split algebra: " + *f);
  for (int i = 0; i < M_.dim(); ++i) (in_a_[i] ? a_idx_ : l_idx_).push_back(i);
}

std::vector<int> SplitGLA::a_degrees() const {
  std::vector<int> d;
  for (int i : a_idx_) d.push_back(M_.degrees()[i]);
  return d;
}

Vec SplitGLA::project(const Vec& v) const {
  Vec r(M_.dim());
  for (int i : a_idx_) r[i] = v.at(i);
  return r;
}

bool SplitGLA::in_A(const Vec& v) const {
  for (int i : l_idx_)
    if (v.at(i) != 0) return false;
  return true;
}

Vec SplitGLA::embed_a(const Vec& a) const {
  if (a.size() != a_idx_.size()) throw DomainError("A-coordinate length mismatch");
  Vec r(M_.dim());
  for (size_t k = 0; k < a_idx_.size(); ++k) r[a_idx_[k]] = a[k];
  return r;
}

Vec SplitGLA::restrict_a(const Vec& v) const {
  Vec r;
  for (int i : a_idx_) r.push_back(v.at(i));
  return r;
}

FinDGLA SplitGLA::dgla() const {
  const int m = M_.dim();
  std::vector<std::vector<Vec>> br(m, std::vector<Vec>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) br[i][j] = M_.structure(i, j);
  return FinDGLA(M_.degrees(), D_, br);
}

FinDGLA SplitGLA::l_dgla() const {
  const int l = static_cast<int>(l_idx_.size());
  std::vector<int> deg;
  for (int i : l_idx_) deg.push_back(M_.degrees()[i]);
  Matrix d(l, l);
  std::vector<std::vector<Vec>> br(l, std::vector<Vec>(l, Vec(l)));
  for (int a = 0; a < l; ++a) {
    for (int b = 0; b < l; ++b) {
      d(a, b) = D_(l_idx_[a], l_idx_[b]);
      for (int c = 0; c < l; ++c) br[a][b][c] = M_.structure(l_idx_[a], l_idx_[b])[l_idx_[c]];
    }
  }
  return FinDGLA(std::move(deg), std::move(d), std::move(br));
}

Matrix SplitGLA::l_inclusion() const {
  Matrix inc(M_.dim(), static_cast<int>(l_idx_.size()));
  for (size_t k = 0; k < l_idx_.size(); ++k) inc(l_idx_[k], static_cast<int>(k)) = 1;
  return inc;
}

SplitGLA SplitGLA::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("a_part") || !j.contains("derivation")) {
    throw DomainError("split algebra document needs \"algebra\", \"a_part\" and \"derivation\"");
  }
  FinDGLA M = FinDGLA::from_json(j.at("algebra"));
  std::vector<bool> flags;
  for (const auto& f : j.at("a_part")) {
    if (!f.is_number_integer() || (f.get<int>() != 0 && f.get<int>() != 1)) throw DomainError("a_part entries must be 0 or 1");
    flags.push_back(f.get<int>() == 1);
  }
  Matrix D = matrix_from_json(j.at("derivation"), M.dim(), M.dim());
  SplitGLA S(std::move(M), std::move(flags), std::move(D));
  if (j.contains("labels")) S.labels = j.at("labels").get<std::vector<std::string>>();
  return S;
}

nlohmann::json SplitGLA::to_json() const {
  nlohmann::json j;
  j["algebra"] = M_.to_json();
  std::vector<int> flags;
  for (bool b : in_a_) flags.push_back(b ? 1 : 0);
  j["a_part"] = flags;
  j["derivation"] = matrix_to_json(D_);
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

SplitGLA SplitGLA::load(const std::string& path) {
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

Vec derived_bracket(const SplitGLA& S, const std::vector<Vec>& a) {
  if (a.empty()) throw DomainError("derived bracket needs at least one argument");
  for (const auto& x : a) {
    if (static_cast<int>(x.size()) != S.M().dim() || !S.in_A(x)) throw DomainError("derived bracket argument outside A");
  }
  Vec x = S.D() * a[0];
  for (size_t k = 1; k < a.size(); ++k) x = S.M().bracket(x, a[k]);
  return S.project(x);
}

std::vector<SymMap> derived_brackets(const SplitGLA& S, int max_arity) {
  std::vector<SymMap> out;
  for (int n = 1; n <= max_arity; ++n) {
    out.push_back(SymMap::tabulate(S.a_degrees(), n, 1, [&](const std::vector<int>& idx) {
      std::vector<Vec> args;
      for (int i : idx) args.push_back(S.M().basis(S.a_indices()[i]));
      return S.restrict_a(derived_bracket(S, args));
    }));
  }
  return out;
}

FiberShadow fiber_shadow(const SplitGLA& S, int bound) {
  HFiber K(S.l_dgla(), S.dgla(), S.l_inclusion());
  FiniteComplex C = K.complex(bound);
  ComplexCohomology H = complex_cohomology(C);
  std::vector<int> adeg = S.a_degrees();
  int lo = C.lo, hi = C.lo + static_cast<int>(C.dims.size()) - 1;
  for (int d : adeg) {
    lo = std::min(lo, d + 1);
    hi = std::max(hi, d + 1);
  }
  FiberShadow out;
  out.lo = lo;
  const auto& ai = S.a_indices();
  auto block = [&](int from, int to) {
    // P D restricted to A, from A-degree `from` to `to`.
    std::vector<int> src, dst;
    for (size_t k = 0; k < ai.size(); ++k) {
      if (adeg[k] == from) src.push_back(ai[k]);
      if (adeg[k] == to) dst.push_back(ai[k]);
    }
    Matrix m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (size_t r = 0; r < dst.size(); ++r)
      for (size_t c = 0; c < src.size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = S.D()(dst[r], src[c]);
    return m;
  };
  for (int k = lo; k <= hi; ++k) {
    const int i = k - C.lo;
    out.fiber_h.push_back(i >= 0 && i < static_cast<int>(H.h.size()) ? H.h[i] : 0);
    // A[-1] in degree k is A in degree k - 1.
    out.a_h.push_back(cohomology(block(k - 2, k - 1), block(k - 1, k)).h);
  }
  out.match = out.fiber_h == out.a_h;
  return out;
}

ScsHFamily<Vec> scs_h_family(const ScsDGLA& S, const std::vector<HTable>& h) {
  if (static_cast<int>(h.size()) != S.top() + 1) throw DomainError("need one h table per level");
  ScsHFamily<Vec> F;
  for (int n = 0; n <= S.top(); ++n) {
    const int dim = S.level(n).dim();
    if (static_cast<int>(h[n].size()) != dim) throw DomainError("h table has the wrong size");
    F.h.push_back([t = h[n], dim](const Vec& a, const Vec& b) { return bilinear(t, a, b, dim); });
    std::vector<Vec> basis;
    for (int i = 0; i < dim; ++i) basis.push_back(S.level(n).basis(i));
    F.span.push_back(std::move(basis));
  }
  for (int n = 1; n <= S.top(); ++n) {
    std::vector<std::function<Vec(const Vec&)>> fam;
    for (int k = 0; k <= n; ++k) fam.push_back([m = S.face(n, k)](const Vec& v) { return m * v; });
    F.faces.push_back(std::move(fam));
  }
  F.equal = [](const Vec& a, const Vec& b) { return a == b; };
  return F;
}

}  // namespace coisocalc
