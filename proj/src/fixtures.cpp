#include "coisocalc/fixtures.hpp"

#include <stdexcept>

namespace coisocalc::fixtures {

namespace {

Vec unit(int n, int i, const Rat& c = 1) {
  Vec v(n);
  v.at(i) = c;
  return v;
}

// Direct product of DGLAs with the componentwise bracket.
FinDGLA product(const std::vector<FinDGLA>& parts) {
  std::vector<int> deg;
  std::vector<int> off;
  for (const auto& p : parts) {
    off.push_back(static_cast<int>(deg.size()));
    deg.insert(deg.end(), p.degrees().begin(), p.degrees().end());
  }
  const int n = static_cast<int>(deg.size());
  Matrix d(n, n);
  std::vector<std::vector<Vec>> br(n, std::vector<Vec>(n, Vec(n)));
  for (size_t q = 0; q < parts.size(); ++q) {
    const FinDGLA& p = parts[q];
    const int o = off[q];
    for (int i = 0; i < p.dim(); ++i) {
      for (int j = 0; j < p.dim(); ++j) {
        d(o + i, o + j) = p.d_matrix()(i, j);
        for (int k = 0; k < p.dim(); ++k) br[o + i][o + j][o + k] = p.structure(i, j)[k];
      }
    }
  }
  FinDGLA r(std::move(deg), std::move(d), std::move(br));
  r.validate();
  return r;
}

// Block matrix: block (r, c) of the result is blocks[r][c] (empty matrix means zero).
Matrix blocks(const std::vector<int>& row_dims, const std::vector<int>& col_dims,
              const std::vector<std::tuple<int, int, Matrix>>& entries) {
  int R = 0, C = 0;
  std::vector<int> ro, co;
  for (int d : row_dims) {
    ro.push_back(R);
    R += d;
  }
  for (int d : col_dims) {
    co.push_back(C);
    C += d;
  }
  Matrix m(R, C);
  for (const auto& [r, c, b] : entries) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(ro[r] + i, co[c] + j) = b(i, j);
  }
  return m;
}

}  // namespace

FinDGLA make_dgla(std::vector<int> degrees, const std::vector<std::tuple<int, int, Rat>>& d_entries,
                  const std::vector<BracketEntry>& brackets) {
  const int n = static_cast<int>(degrees.size());
  Matrix d(n, n);
  for (const auto& [r, c, v] : d_entries) d(r, c) = v;
  std::vector<std::vector<Vec>> br(n, std::vector<Vec>(n, Vec(n)));
  for (const auto& [i, j, v] : brackets) {
    br.at(i).at(j) = v;
    const Rat s = ((degrees[i] * degrees[j]) % 2 == 0) ? Rat(-1) : Rat(1);
    br.at(j).at(i) = s * v;
  }
  FinDGLA L(std::move(degrees), std::move(d), std::move(br));
  L.validate();
  return L;
}

FinDGLA toy_g() { return make_dgla({0, 1, 1}, {{1, 0, 1}}, {{0, 1, unit(3, 1)}, {0, 2, unit(3, 2)}}); }

ScsDGLA two_open() {
  FinDGLA G = toy_g();
  Matrix I = Matrix::identity(3);
  Matrix d0 = blocks({3}, {3, 3}, {{0, 1, I}});
  Matrix d1 = blocks({3}, {3, 3}, {{0, 0, I}});
  ScsDGLA S({product({G, G}), G}, {{d0, d1}});
  if (auto f = S.failure()) throw DomainError(*f);
  return S;
}

ScsDGLA three_open() {
  FinDGLA U0 = toy_g();
  FinDGLA U = make_dgla({0, 1}, {}, {{0, 1, unit(2, 1)}});
  FinDGLA K = FinDGLA::abelian({0}, Matrix(1, 1));
  // Restrictions to the overlap algebra keep only x.
  Matrix r0(1, 3), r(1, 2);
  r0(0, 0) = 1;
  r(0, 0) = 1;
  const std::vector<Matrix> res{r0, r, r};
  const std::vector<int> dims0{3, 2, 2};
  const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {1, 2}};
  // (d_k v)_{i0 i1} = v restricted from the open with index k omitted.
  std::vector<Matrix> f1;
  for (int k = 0; k <= 1; ++k) {
    std::vector<std::tuple<int, int, Matrix>> e;
    for (int p = 0; p < 3; ++p) {
      const int src = (k == 0) ? pairs[p].second : pairs[p].first;
      e.emplace_back(p, src, res[src]);
    }
    f1.push_back(blocks({1, 1, 1}, dims0, e));
  }
  // Level 2 is the triple overlap; omitting index k leaves the pair 12, 02, 01.
  std::vector<Matrix> f2;
  const int omit_pair[3] = {2, 1, 0};
  for (int k = 0; k <= 2; ++k) {
    Matrix m(1, 3);
    m(0, omit_pair[k]) = 1;
    f2.push_back(m);
  }
  ScsDGLA S({product({U0, U, U}), product({K, K, K}), K}, {f1, f2});
  if (auto f = S.failure()) throw DomainError(*f);
  return S;
}

ShortExact two_open_ideal_sequence() {
  ScsDGLA B = two_open();
  FinDGLA Ga = FinDGLA::abelian({1, 1}, Matrix(2, 2));
  FinDGLA Gc = FinDGLA::abelian({0}, Matrix(1, 1));
  Matrix I2 = Matrix::identity(2), I1 = Matrix::identity(1);
  ScsDGLA A({product({Ga, Ga}), Ga},
            {{blocks({2}, {2, 2}, {{0, 1, I2}}), blocks({2}, {2, 2}, {{0, 0, I2}})}});
  ScsDGLA C({product({Gc, Gc}), Gc},
            {{blocks({1}, {1, 1}, {{0, 1, I1}}), blocks({1}, {1, 1}, {{0, 0, I1}})}});
  // G = <x, y, z>: inclusion of <y, z>, projection onto <x>.
  Matrix inc_g(3, 2), proj_g(1, 3);
  inc_g(1, 0) = 1;
  inc_g(2, 1) = 1;
  proj_g(0, 0) = 1;
  std::vector<Matrix> inc{blocks({3, 3}, {2, 2}, {{0, 0, inc_g}, {1, 1, inc_g}}), inc_g};
  std::vector<Matrix> proj{blocks({1, 1}, {3, 3}, {{0, 0, proj_g}, {1, 1, proj_g}}), proj_g};
  for (const auto* S : {&A, &C}) {
    if (auto f = S->failure()) throw DomainError(*f);
  }
  for (int n = 0; n <= 1; ++n) {
    if (auto f = morphism_failure(A.level(n), B.level(n), inc[n])) throw DomainError(*f);
    if (auto f = morphism_failure(B.level(n), C.level(n), proj[n])) throw DomainError(*f);
  }
  return {std::move(A), std::move(B), std::move(C), std::move(inc), std::move(proj)};
}

namespace {

struct GlElem {
  std::string label;
  Vec m;  // row-major 3x3
  int deg = 0;
};

Vec gl_mul(const Vec& a, const Vec& b) {
  Vec r(9);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      if (a[3 * i + k] == 0) continue;
      for (int j = 0; j < 3; ++j) r[3 * i + j] += a[3 * i + k] * b[3 * k + j];
    }
  return r;
}

Vec gl_bracket(const GlElem& x, const GlElem& y) {
  const Rat s = ((x.deg * y.deg) % 2 == 0) ? Rat(1) : Rat(-1);
  return gl_mul(x.m, y.m) - s * gl_mul(y.m, x.m);
}

Vec gl_unit(int i, int j) {
  Vec v(9);
  v[3 * (i - 1) + (j - 1)] = 1;
  return v;
}

std::vector<GlElem> gl_candidates(const std::vector<int>& g) {
  std::vector<GlElem> c;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) c.push_back({"E" + std::to_string(i) + std::to_string(j), gl_unit(i, j), g[i - 1] - g[j - 1]});
  for (int i = 1; i <= 3; ++i) c.push_back({"E" + std::to_string(i) + std::to_string(i), gl_unit(i, i), 0});
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      const std::string a = "E" + std::to_string(i) + std::to_string(i), b = "E" + std::to_string(j) + std::to_string(j);
      c.push_back({a + "+" + b, gl_unit(i, i) + gl_unit(j, j), 0});
      c.push_back({a + "-" + b, gl_unit(i, i) - gl_unit(j, j), 0});
    }
  return c;
}

// Coordinates of every bracket in the basis, or nullopt when the span is not closed.
std::optional<std::vector<std::vector<Vec>>> structure_in(const std::vector<GlElem>& basis) {
  std::vector<Vec> cols;
  for (const auto& b : basis) cols.push_back(b.m);
  Matrix B = Matrix::from_columns(9, cols);
  const int m = static_cast<int>(basis.size());
  std::vector<std::vector<Vec>> br(m, std::vector<Vec>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      auto x = solve(B, gl_bracket(basis[i], basis[j]));
      if (!x) return std::nullopt;
      br[i][j] = *x;
    }
  return br;
}

std::optional<SplitGLA> try_split(const std::vector<GlElem>& basis, int na) {
  const int m = static_cast<int>(basis.size());
  std::vector<Vec> cols;
  for (const auto& b : basis) cols.push_back(b.m);
  if (span_rank(9, cols) != m) return std::nullopt;
  auto br = structure_in(basis);
  if (!br) return std::nullopt;
  const int nl = m - na;
  // D = [X, .] with X = basis[0].
  Matrix D(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) D(k, i) = (*br)[0][i][k];
  bool leaves_a = false;
  for (int i = nl; i < m; ++i)
    for (int k = 0; k < nl; ++k)
      if (D(k, i) != 0) leaves_a = true;
  if (!leaves_a) return std::nullopt;
  std::vector<int> deg;
  for (const auto& b : basis) deg.push_back(b.deg);
  std::vector<bool> in_a(m, false);
  for (int i = nl; i < m; ++i) in_a[i] = true;
  FinDGLA M(deg, Matrix(m, m), *br);
  if (SplitGLA::failure(M, in_a, D)) return std::nullopt;
  SplitGLA S(std::move(M), std::move(in_a), std::move(D));
  for (const auto& b : basis) S.labels.push_back(b.label);
  for (int a : S.a_indices())
    for (int b : S.a_indices())
      if (!is_zero(derived_bracket(S, {S.M().basis(a), S.M().basis(b)}))) return S;
  return std::nullopt;
}

}  // namespace

SplitGLA split_gla() {
  for (int g1 = -1; g1 <= 1; ++g1)
    for (int g2 = -1; g2 <= 1; ++g2)
      for (int g3 = -1; g3 <= 1; ++g3) {
        const std::vector<GlElem> cand = gl_candidates({g1, g2, g3});
        const int nc = static_cast<int>(cand.size());
        for (int x = 0; x < 6; ++x) {
          if (cand[x].deg != 1) continue;
          for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b) {
              if (a == x || b == x) continue;
              if (!is_zero(gl_bracket(cand[a], cand[a])) || !is_zero(gl_bracket(cand[b], cand[b])) ||
                  !is_zero(gl_bracket(cand[a], cand[b]))) {
                continue;
              }
              for (int p = 0; p < nc; ++p)
                for (int q = p + 1; q < nc; ++q)
                  for (int r = q + 1; r < nc; ++r) {
                    bool clash = false;
                    for (int u : {p, q, r}) clash = clash || u == x || u == a || u == b;
                    if (clash) continue;
                    if (auto S = try_split({cand[x], cand[p], cand[q], cand[r], cand[a], cand[b]}, 2)) return *S;
                  }
            }
        }
      }
  throw std::logic_error("no split algebra found in the search space");
}

std::vector<std::pair<std::string, nlohmann::json>> all_documents() {
  std::vector<std::pair<std::string, nlohmann::json>> docs;
  docs.emplace_back("two_open.json", two_open().to_json());
  docs.emplace_back("three_open.json", three_open().to_json());
  docs.emplace_back("split_gla.json", split_gla().to_json());
  return docs;
}

}  // namespace coisocalc::fixtures
