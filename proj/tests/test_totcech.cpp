#include <catch_amalgamated.hpp>

#include "coisocalc/fixtures.hpp"
#include "support/pools.hpp"

#include <fstream>
#include <sstream>

using namespace coisocalc;
using coisocalc::testing::Pool;

namespace {

SimplexForm t(int n, int i) { return simplex_coord(n, i); }
SimplexForm dt(int n, int i) { return holo_d(simplex_coord(n, i)); }
SimplexForm c(int n, const Rat& v) { return Form::scalar(Poly::constant(n, v)); }

// Iterated one-dimensional integration: integrate t_n from 0 to 1 - t_1 - ... - t_{n-1}, then recurse.
Rat iterated_integral(Poly f) {
  for (int n = f.nvars(); n >= 1; --n) {
    Poly anti(n);
    for (const auto& [e, v] : f.terms()) {
      Poly::Exps e2 = e;
      e2[n - 1] += 1;
      anti.add_term(e2, v / e2[n - 1]);
    }
    std::vector<Poly> img;
    Poly upper = Poly::constant(n - 1, 1);
    for (int j = 1; j < n; ++j) {
      img.push_back(Poly::var(n - 1, j));
      upper -= Poly::var(n - 1, j);
    }
    img.push_back(upper);
    f = anti.substitute(img, n - 1);
  }
  return f.constant_term();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vec random_combo(Pool& pool, int n) {
  Vec v(n);
  for (auto& x : v) x = pool.uniform(-2, 2);
  return v;
}

// Random Tot member mixing every total degree of the bounded complex.
TotElem random_member(const ScsDGLA& S, Pool& pool, int bound) {
  auto [lo, hi] = total_degree_range(S);
  TotElem x = tot_zero(S);
  for (int m = lo; m <= hi; ++m) {
    TotSlice sl(S, m, bound);
    Vec a(sl.ambient_dim());
    for (const auto& b : sl.basis()) a = a + Rat(pool.uniform(-2, 2)) * b;
    x = tot_add(x, sl.element(a));
  }
  return x;
}

CochainElem random_cochain(const ScsDGLA& S, Pool& pool) {
  CochainElem v = cochain_zero(S);
  for (auto& lv : v.levels) lv = random_combo(pool, static_cast<int>(lv.size()));
  return v;
}

bool is_zero_tot(const TotElem& x) {
  for (const auto& lv : x.levels)
    for (const auto& w : lv)
      if (!w.is_zero()) return false;
  return true;
}

std::vector<int> h_of(const FiniteComplex& C) { return complex_cohomology(C).h; }

}  // namespace

TEST_CASE("face pullback examples") {
  CHECK(face_pullback(0, t(1, 0), 1).is_zero());
  CHECK(face_pullback(0, t(1, 1), 1) == c(0, 1));
  CHECK(face_pullback(2, t(2, 1), 2) == t(1, 1));
  CHECK(face_pullback(1, t(1, 1), 1).is_zero());
  CHECK(face_pullback(1, t(1, 0), 1) == c(0, 1));
  // t_0 on the face opposite vertex 1 of Delta^2 becomes t_0 of Delta^1.
  CHECK(face_pullback(1, t(2, 0), 2) == t(1, 0));
  CHECK(face_pullback(0, dt(2, 1), 2) == -dt(1, 1));
  CHECK_THROWS_AS(face_pullback(3, t(2, 1), 2), DomainError);
  CHECK_THROWS_AS(face_pullback(-1, t(2, 1), 2), DomainError);
  CHECK_THROWS_AS(face_pullback(0, t(2, 1), 3), DomainError);
}

TEST_CASE("face pullback is a DG algebra morphism") {
  Pool pool(11);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Form a = pool.form(n, pool.uniform(0, n), 2);
      Form b = pool.form(n, pool.uniform(0, n), 2);
      for (int k = 0; k <= n; ++k) {
        CHECK(face_pullback(k, wedge(a, b), n) == wedge(face_pullback(k, a, n), face_pullback(k, b, n)));
        CHECK(face_pullback(k, holo_d(a), n) == holo_d(face_pullback(k, a, n)));
        CHECK(face_pullback(k, a + b, n) == face_pullback(k, a, n) + face_pullback(k, b, n));
      }
    }
  }
}

TEST_CASE("cosimplicial identities on generators") {
  // (delta_{k+1} delta_l)^* = (delta_l delta_k)^* for l <= k.
  for (int n = 1; n <= 3; ++n) {
    const int N = n + 1;
    std::vector<Form> gens;
    for (int i = 0; i <= N; ++i) {
      gens.push_back(t(N, i));
      gens.push_back(dt(N, i));
    }
    for (const auto& g : gens) {
      for (int k = 0; k <= n; ++k) {
        for (int l = 0; l <= k; ++l) {
          CHECK(face_pullback(l, face_pullback(k + 1, g, N), n) == face_pullback(k, face_pullback(l, g, N), n));
        }
      }
    }
  }
  // The vertex coordinates: t_i maps to 0 on the face i, otherwise to a vertex coordinate.
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int i = 0; i <= n; ++i) {
        SimplexForm expect = (i == k) ? Form(n - 1) : t(n - 1, i < k ? i : i - 1);
        CHECK(face_pullback(k, t(n, i), n) == expect);
      }
    }
  }
}

TEST_CASE("simplex integration") {
  CHECK(simplex_integrate(dt(1, 1), 1) == 1);
  CHECK(simplex_integrate(Form::basis(1, {1}, Poly::var(1, 1)), 1) == Rat(1, 2));
  CHECK(simplex_integrate(Form::basis(2, {1, 2}, Poly::var(2, 1) * Poly::var(2, 2)), 2) == Rat(1, 24));
  CHECK(iterated_integral(Poly::var(2, 1) * Poly::var(2, 2)) == Rat(1, 24));
  CHECK(simplex_integrate(c(0, 7), 0) == 7);
  CHECK(simplex_integrate(t(2, 1), 2) == 0);
  CHECK(simplex_integrate(Form(3), 3) == 0);

  Pool pool(5);
  for (int n = 1; n <= 3; ++n) {
    MIdx top;
    for (int i = 1; i <= n; ++i) top.push_back(i);
    for (int trial = 0; trial < 15; ++trial) {
      Poly f = pool.poly(n, 4, 3);
      CHECK(simplex_integrate(Form::basis(n, top, f), n) == iterated_integral(f));
    }
    // Stokes: the integral of d omega is the alternating sum over the faces.
    for (int trial = 0; trial < 10; ++trial) {
      Form w = pool.form(n, n - 1, 3);
      Rat boundary = 0;
      for (int k = 0; k <= n; ++k) boundary += Rat(testing::gsign(k)) * simplex_integrate(face_pullback(k, w, n), n - 1);
      CHECK(simplex_integrate(holo_d(w), n) == boundary);
    }
  }
}

TEST_CASE("fixture documents load and regenerate deterministically") {
  for (const auto& [name, doc] : fixtures::all_documents()) {
    INFO(name);
    const std::string path = std::string(COISOCALC_FIXTURE_DIR) + "/" + name;
    CHECK(slurp(path) == doc.dump(2) + "\n");
    CHECK(fixtures::all_documents() == fixtures::all_documents());
    if (name == "split_gla.json") {
      CHECK(SplitGLA::load(path).to_json() == doc);
      continue;
    }
    ScsDGLA S = ScsDGLA::load(path);
    CHECK(S.to_json() == doc);
    CHECK_FALSE(S.failure().has_value());
  }
  ScsDGLA S3 = ScsDGLA::load(std::string(COISOCALC_FIXTURE_DIR) + "/three_open.json");
  int total = 0;
  for (int n = 0; n <= S3.top(); ++n) total += S3.level(n).dim();
  CHECK(S3.top() == 2);
  CHECK(total == 11);
}

TEST_CASE("diagram validation rejects broken faces") {
  nlohmann::json doc = fixtures::two_open().to_json();
  doc["faces"][0][0][0][3] = "0";  // d_0 no longer a morphism of the identity shape
  doc["faces"][0][0][0][0] = "1";
  CHECK_THROWS_AS(ScsDGLA::from_json(doc), DomainError);

  // Faces that are morphisms but violate the cosimplicial relation.
  ScsDGLA S3 = fixtures::three_open();
  nlohmann::json bad = S3.to_json();
  std::swap(bad["faces"][1][0], bad["faces"][1][1]);
  CHECK_THROWS_AS(ScsDGLA::from_json(bad), DomainError);

  nlohmann::json wrong_count = S3.to_json();
  wrong_count["faces"][1].erase(2);
  CHECK_THROWS_AS(ScsDGLA::from_json(wrong_count), DomainError);
}

TEST_CASE("tot membership and differential") {
  ScsDGLA S = fixtures::two_open();
  // Equalizer element: the diagonal (z, z).
  Vec diag{0, 0, 1, 0, 0, 1};
  TotElem e = e_map(S, diag);
  CHECK(tot_check(S, e));

  // Negative control: break the face equation at t_1 = 0.
  TotElem broken = e;
  broken.levels[1][2] = t(1, 1) * Rat(1);
  CHECK_FALSE(tot_check(S, broken));

  TotElem wrong_shape = e;
  wrong_shape.levels[1].pop_back();
  CHECK_THROWS_AS(tot_check(S, wrong_shape), DomainError);

  Pool pool(3);
  for (const auto& D : {fixtures::two_open(), fixtures::three_open()}) {
    for (int trial = 0; trial < 8; ++trial) {
      TotElem x = random_member(D, pool, 3);
      TotElem y = random_member(D, pool, 2);
      REQUIRE(tot_check(D, x));
      TotElem dx = tot_diff(D, x);
      CHECK(tot_check(D, dx));
      CHECK(is_zero_tot(tot_diff(D, dx)));
      CHECK(tot_check(D, tot_bracket(D, x, y)));
    }
  }
}

TEST_CASE("tot differential is a derivation of the bracket") {
  ScsDGLA S = fixtures::three_open();
  Pool pool(8);
  for (int trial = 0; trial < 6; ++trial) {
    // Homogeneous members so the sign is defined.
    const int mx = pool.uniform(0, 2), my = pool.uniform(0, 2);
    TotSlice sx(S, mx, 2), sy(S, my, 2);
    Vec ax(sx.ambient_dim()), ay(sy.ambient_dim());
    for (const auto& b : sx.basis()) ax = ax + Rat(pool.uniform(-2, 2)) * b;
    for (const auto& b : sy.basis()) ay = ay + Rat(pool.uniform(-2, 2)) * b;
    TotElem x = sx.element(ax), y = sy.element(ay);
    TotElem lhs = tot_diff(S, tot_bracket(S, x, y));
    TotElem rhs = tot_add(tot_bracket(S, tot_diff(S, x), y), tot_scale(testing::gsign(mx), tot_bracket(S, x, tot_diff(S, y))));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("cech differential") {
  ScsDGLA S = fixtures::two_open();
  // Closed equalizer element (z, z): total differential vanishes.
  CochainElem v = cochain_zero(S);
  v.levels[0] = Vec{0, 0, 1, 0, 0, 1};
  CHECK(cech_diff(S, v) == cochain_zero(S));

  // Single level-0 element x on the first open: d x = y there, and
  // d_0 - d_1 at level 1 gives 0 - x.
  CochainElem w = cochain_zero(S);
  w.levels[0] = Vec{1, 0, 0, 0, 0, 0};
  CochainElem expect = cochain_zero(S);
  expect.levels[0] = Vec{0, 1, 0, 0, 0, 0};
  expect.levels[1] = Vec{-1, 0, 0};
  CHECK(cech_diff(S, w) == expect);

  // Level-1 element picks up the sign (-1)^1 on d.
  CochainElem u = cochain_zero(S);
  u.levels[1] = Vec{1, 0, 0};
  CochainElem expect_u = cochain_zero(S);
  expect_u.levels[1] = Vec{0, -1, 0};
  CHECK(cech_diff(S, u) == expect_u);

  Pool pool(17);
  for (const auto& D : {fixtures::two_open(), fixtures::three_open()}) {
    for (int trial = 0; trial < 30; ++trial) {
      CochainElem r = random_cochain(D, pool);
      CHECK(cech_diff(D, cech_diff(D, r)) == cochain_zero(D));
    }
  }
}

TEST_CASE("whitney integration is a surjective chain map") {
  Pool pool(23);
  for (const auto& S : {fixtures::two_open(), fixtures::three_open()}) {
    CHECK(whitney_I(S, tot_zero(S)) == cochain_zero(S));
    for (int trial = 0; trial < 10; ++trial) {
      TotElem x = random_member(S, pool, 3);
      CHECK(whitney_I(S, tot_diff(S, x)) == cech_diff(S, whitney_I(S, x)));
    }
    auto [lo, hi] = total_degree_range(S);
    for (int m = lo; m <= hi; ++m) {
      TotSlice sl(S, m, 3);
      CochainSlice cs = cochain_slice(S, m);
      std::vector<Vec> imgs;
      for (const auto& b : sl.basis()) imgs.push_back(cs.coords(whitney_I(S, sl.element(b))));
      CHECK(span_rank(cs.dim(), imgs) == cs.dim());
    }
  }
  ScsDGLA S = fixtures::two_open();
  TotElem bad = tot_zero(S);
  bad.levels[1][0] = t(1, 1);
  CHECK_THROWS_AS(whitney_I(S, bad), DomainError);
}

TEST_CASE("e map") {
  for (const auto& S : {fixtures::two_open(), fixtures::three_open()}) {
    const int d0 = S.level(0).dim();
    CHECK(is_zero_tot(e_map(S, Vec(d0))));
    // Equalizer basis: kernel of d_0 - d_1.
    std::vector<Vec> eq = kernel(S.face(1, 0) - S.face(1, 1));
    REQUIRE_FALSE(eq.empty());
    for (const auto& x : eq) {
      TotElem ex = e_map(S, x);
      CHECK(tot_check(S, ex));
      CochainElem incl = cochain_zero(S);
      incl.levels[0] = x;
      CHECK(whitney_I(S, ex) == incl);
      // Commutes with differentials.
      if (in_equalizer(S, S.level(0).d(x))) CHECK(tot_diff(S, ex) == e_map(S, S.level(0).d(x)));
      for (const auto& y : eq) CHECK(e_map(S, S.level(0).bracket(x, y)) == tot_bracket(S, ex, e_map(S, y)));
    }
  }
  ScsDGLA S = fixtures::two_open();
  CHECK_THROWS_AS(e_map(S, Vec{1, 0, 0, 0, 0, 0}), DomainError);
}

TEST_CASE("complex cohomology plumbing") {
  FiniteComplex zero{0, {2, 3}, {Matrix(3, 2)}};
  CHECK(complex_cohomology(zero).h == std::vector<int>{2, 3});
  FiniteComplex iso{0, {2, 2}, {Matrix::identity(2)}};
  CHECK(complex_cohomology(iso).h == std::vector<int>{0, 0});
  Matrix a(1, 1), b(1, 1);
  a(0, 0) = 1;
  b(0, 0) = 1;
  FiniteComplex bad{0, {1, 1, 1}, {a, b}};
  CHECK_THROWS_AS(complex_cohomology(bad), DomainError);
  FiniteComplex shape{0, {1, 2}, {Matrix(1, 1)}};
  CHECK_THROWS_AS(complex_cohomology(shape), DomainError);
}

TEST_CASE("tot and cech cohomology agree") {
  // Hand computation: two_open is G glued to itself, so H = H(G) = <z> in degree 1.
  // three_open: vertical cohomology first, the degree-0 Cech row is acyclic and the
  // degree-1 row is <z_0, z_1, z_2>.
  const std::vector<std::pair<ScsDGLA, std::vector<int>>> cases{
      {fixtures::two_open(), {0, 1, 0}}, {fixtures::three_open(), {0, 3, 0}}};
  for (const auto& [S, expect] : cases) {
    FiniteComplex cc = cochain_complex(S);
    CHECK(h_of(cc) == expect);
    for (int bound = 1; bound <= 3; ++bound) {
      FiniteComplex tc = tot_complex(S, bound);
      CHECK(tc.lo == cc.lo);
      CHECK(h_of(tc) == expect);
    }
  }
}

TEST_CASE("whitney integration is a quasi-isomorphism on slices") {
  ScsDGLA S = fixtures::three_open();
  FiniteComplex tc = tot_complex(S, 3);
  FiniteComplex cc = cochain_complex(S);
  ComplexCohomology th = complex_cohomology(tc);
  for (size_t i = 0; i < tc.dims.size(); ++i) {
    const int m = tc.lo + static_cast<int>(i);
    TotSlice sl(S, m, 3);
    CochainSlice cs = cochain_slice(S, m);
    // Images of cohomology representatives stay independent modulo coboundaries.
    std::vector<Vec> span;
    if (i > 0) {
      for (int col = 0; col < cc.d[i - 1].cols(); ++col) span.push_back(cc.d[i - 1].column(col));
    }
    const int boundary_rank = span_rank(cs.dim(), span);
    for (const auto& rep : th.representatives[i]) {
      Vec amb(sl.ambient_dim());
      for (size_t j = 0; j < rep.size(); ++j) amb = amb + rep[j] * sl.basis()[j];
      span.push_back(cs.coords(whitney_I(S, sl.element(amb))));
    }
    CHECK(span_rank(cs.dim(), span) == boundary_rank + th.h[i]);
  }
}

TEST_CASE("tot is exact on the ideal sequence") {
  fixtures::ShortExact ses = fixtures::two_open_ideal_sequence();
  for (int m = 0; m <= 2; ++m) {
    INFO("degree " << m);
    TotSlice a(ses.A, m, 3), b(ses.B, m, 3), cq(ses.C, m, 3);
    CHECK(a.dim() + cq.dim() == b.dim());
    std::vector<Vec> inc_img, proj_img;
    for (const auto& v : a.basis()) {
      TotElem x = tot_map(ses.inc, a.element(v));
      CHECK(tot_check(ses.B, x));
      inc_img.push_back(b.coords(x));
      CHECK(is_zero_tot(tot_map(ses.proj, x)));
    }
    for (const auto& v : b.basis()) proj_img.push_back(cq.coords(tot_map(ses.proj, b.element(v))));
    CHECK(span_rank(b.ambient_dim(), inc_img) == a.dim());
    CHECK(span_rank(cq.ambient_dim(), proj_img) == cq.dim());
  }
}

TEST_CASE("homotopy fibre against the two-level totalization") {
  FinDGLA G = fixtures::toy_g();
  // Sub-DGLA <x, y> and the ideal <y, z>.
  FinDGLA Lxy = fixtures::make_dgla({0, 1}, {{1, 0, 1}}, {{0, 1, Vec{0, 1}}});
  Matrix chi_xy(3, 2);
  chi_xy(0, 0) = 1;
  chi_xy(1, 1) = 1;
  FinDGLA Lyz = FinDGLA::abelian({1, 1}, Matrix(2, 2));
  Matrix chi_yz(3, 2);
  chi_yz(1, 0) = 1;
  chi_yz(2, 1) = 1;

  for (const auto& [L, chi] : {std::pair{Lxy, chi_xy}, std::pair{Lyz, chi_yz}}) {
    HFiber K(L, G, chi);
    ScsDGLA D = chi_diagram(L, G, chi);
    REQUIRE_FALSE(D.failure().has_value());
    for (int bound = 1; bound <= 3; ++bound) {
      FiniteComplex kc = K.complex(bound);
      FiniteComplex tc = tot_complex(D, bound);
      CHECK(kc.lo == tc.lo);
      CHECK(kc.dims == tc.dims);
      CHECK(h_of(kc) == h_of(tc));
    }
    // H^k(K) = H^{k-1}(coker chi).
    FiniteComplex kc = K.complex(3);
    std::vector<int> hk = h_of(kc);
    for (size_t i = 0; i < hk.size(); ++i) {
      const int k = kc.lo + static_cast<int>(i);
      std::vector<int> idx;
      for (int r = 0; r < K.coker_dim(); ++r)
        if (K.coker_degrees()[r] == k - 1) idx.push_back(r);
      std::vector<int> nidx;
      for (int r = 0; r < K.coker_dim(); ++r)
        if (K.coker_degrees()[r] == k) nidx.push_back(r);
      std::vector<int> pidx;
      for (int r = 0; r < K.coker_dim(); ++r)
        if (K.coker_degrees()[r] == k - 2) pidx.push_back(r);
      Matrix dout(static_cast<int>(nidx.size()), static_cast<int>(idx.size()));
      for (size_t a = 0; a < nidx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) dout(static_cast<int>(a), static_cast<int>(b)) = K.coker_d()(nidx[a], idx[b]);
      Matrix din(static_cast<int>(idx.size()), static_cast<int>(pidx.size()));
      for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < pidx.size(); ++b) din(static_cast<int>(a), static_cast<int>(b)) = K.coker_d()(idx[a], pidx[b]);
      CHECK(hk[i] == cohomology(din, dout).h);
    }
  }
  // Recorded values: coker <z> sits in degree 1, so H^2(K) = 1; coker <x> gives H^1(K) = 1.
  HFiber K1(Lxy, G, chi_xy);
  FiniteComplex k1 = K1.complex(3);
  CHECK(k1.lo == 0);
  CHECK(h_of(k1) == std::vector<int>{0, 0, 1});
  HFiber K2(Lyz, G, chi_yz);
  CHECK(h_of(K2.complex(3)) == std::vector<int>{0, 1, 0});
}

TEST_CASE("homotopy fibre elements and integration") {
  FinDGLA G = fixtures::toy_g();
  FinDGLA Lxy = fixtures::make_dgla({0, 1}, {{1, 0, 1}}, {{0, 1, Vec{0, 1}}});
  Matrix chi(3, 2);
  chi(0, 0) = 1;
  chi(1, 1) = 1;
  HFiber K(Lxy, G, chi);
  auto form1 = [](const Poly& f, bool with_dt) { return with_dt ? Form::basis(1, {1}, f) : Form::scalar(f); };
  const Poly tt = Poly::var(1, 1);
  const Poly one = Poly::constant(1, 1);

  HFiberElem zero{Lxy.zero(), std::vector<Form>(3, Form(1))};
  CHECK(K.contains(zero));
  CHECK(K.integrate01(zero) == Vec(K.coker_dim()));

  // (l, t chi(l)) has no dt part.
  HFiberElem lin{Vec{1, 0}, std::vector<Form>(3, Form(1))};
  lin.m[0] = form1(tt, false);
  CHECK(K.contains(lin));
  CHECK(K.integrate01(lin) == Vec(K.coker_dim()));

  // (0, t^a dt z) integrates to z / (a + 1), outside the image.
  HFiberElem mz{Lxy.zero(), std::vector<Form>(3, Form(1))};
  mz.m[2] = form1(tt * tt, true);
  CHECK(K.contains(mz));
  Vec zc = K.coker_class(Vec{0, 0, 1});
  REQUIRE(!is_zero(zc));
  CHECK(K.integrate01(mz) == Rat(1, 3) * zc);

  HFiberElem off{Vec{1, 0}, std::vector<Form>(3, Form(1))};
  off.m[0] = form1(one, false);
  CHECK_FALSE(K.contains(off));

  // Closure under d and bracket, and the chain-map sign on the cokernel.
  for (int m = 0; m <= 2; ++m) {
    for (const auto& z : K.slice_basis(m, 3)) {
      REQUIRE(K.contains(z));
      CHECK(K.contains(K.diff(z)));
      CHECK(K.integrate01(K.diff(z)) == Rat(-1) * (K.coker_d() * K.integrate01(z)));
      for (const auto& w : K.slice_basis(1, 2)) CHECK(K.contains(K.bracket(z, w)));
    }
  }

  // Input hypotheses are enforced.
  Matrix not_morphism(3, 2);
  not_morphism(0, 0) = 1;
  CHECK_THROWS_AS(HFiber(Lxy, G, not_morphism), DomainError);
  FinDGLA Lx = FinDGLA::abelian({0, 0}, Matrix(2, 2));
  Matrix collapse(1, 2);
  collapse(0, 0) = 1;
  collapse(0, 1) = 1;
  FinDGLA P = FinDGLA::abelian({0}, Matrix(1, 1));
  HFiber Kc(Lx, P, collapse);
  CHECK_THROWS_AS(Kc.integrate01(HFiberElem{Vec(2), std::vector<Form>(1, Form(1))}), DomainError);
}
