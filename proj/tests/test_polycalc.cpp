#include <catch_amalgamated.hpp>

#include "coisocalc/polycalc.hpp"
#include "support/pools.hpp"

#include <functional>

using namespace coisocalc;
using coisocalc::testing::gsign;
using coisocalc::testing::Pool;

namespace {

Poly z(int n, int i) { return Poly::var(n, i); }
Poly one(int n) { return Poly::constant(n, 1); }
PVF d(int n, int i) { return coord_field(n, i); }
Form dz(int n, int i) { return coord_form(n, i); }

// Independent oracle: {f,g} = sum_{i<j} pi_ij (d_j f d_i g - d_i f d_j g), which is
// the bracket with {z_i, z_j} = -pi_ij.
Poly oracle_bracket(const PVF& pi, const Poly& f, const Poly& g) {
  Poly r(f.nvars());
  for (const auto& [idx, c] : pi.components()) {
    int i = idx[0], j = idx[1];
    r += c * (f.deriv(j) * g.deriv(i) - f.deriv(i) * g.deriv(j));
  }
  return r;
}

}  // namespace

TEST_CASE("polynomial grammar round trip") {
  Poly p = Poly::parse("3/2*z1^2*z3 - z2 + 1 - 1/3", 3);
  CHECK(p.str() == "3/2*z1^2*z3 - 1*z2 + 2/3");
  CHECK(Poly::parse(p.str(), 3) == p);
  CHECK(Poly::parse("\xE2\x88\x92z2", 3) == -z(3, 2));
  CHECK(Poly::parse("0", 2).is_zero());
  CHECK_THROWS_AS(Poly::parse("z4", 3), PolyParseError);
  CHECK_THROWS_AS(Poly::parse("1 +", 3), PolyParseError);
  CHECK_THROWS_AS(Poly::parse("2/0*z1", 3), PolyParseError);
  Pool pool(7);
  for (int t = 0; t < 50; ++t) {
    Poly q = pool.poly(4, 3, 4);
    CHECK(Poly::parse(q.str(), 4) == q);
  }
}

TEST_CASE("wedge examples") {
  const int n = 3;
  CHECK(wedge(d(n, 1), d(n, 1)).is_zero());
  CHECK(wedge(d(n, 1), d(n, 2)) == -wedge(d(n, 2), d(n, 1)));
  PVF a = PVF::basis(n, {1}, z(n, 1));
  PVF b = PVF::basis(n, {2, 3}, z(n, 2));
  CHECK(wedge(a, b) == PVF::basis(n, {1, 2, 3}, z(n, 1) * z(n, 2)));
  CHECK_THROWS(wedge(d(2, 1), d(3, 2)));
}

TEST_CASE("schouten generator cases") {
  const int n = 3;
  CHECK(schouten(d(n, 1), pvf_function(z(n, 1))) == pvf_function(one(n)));
  CHECK(schouten(wedge(d(n, 1), d(n, 2)), d(n, 3)).is_zero());
  PVF x = PVF::basis(n, {1}, z(n, 2));
  PVF y = PVF::basis(n, {2}, z(n, 1));
  PVF expected = PVF::basis(n, {2}, z(n, 2)) - PVF::basis(n, {1}, z(n, 1));
  CHECK(schouten(x, y) == expected);
}

TEST_CASE("interior and composition convention") {
  const int n = 2;
  CHECK(interior(d(n, 1), dz(n, 1)) == form_function(one(n)));
  CHECK(interior(wedge(d(n, 1), d(n, 2)), form_function(z(n, 1))).is_zero());
  Form top = wedge(dz(n, 1), dz(n, 2));
  Form via_composition = interior(d(n, 1), interior(d(n, 2), top));
  CHECK(interior(wedge(d(n, 1), d(n, 2)), top) == via_composition);
  CHECK(via_composition == form_function(Poly::constant(n, kContractionSign12)));
}

TEST_CASE("holomorphic differential") {
  const int n = 2;
  CHECK(holo_d(form_function(z(n, 1) * z(n, 2))) ==
        Form::basis(n, {1}, z(n, 2)) + Form::basis(n, {2}, z(n, 1)));
  CHECK(holo_d(dz(n, 1)).is_zero());
  CHECK(holo_d(Form::basis(n, {2}, z(n, 1))) == wedge(dz(n, 1), dz(n, 2)));
  Pool pool(11);
  for (int t = 0; t < 40; ++t) {
    int k = pool.uniform(0, 2), l = pool.uniform(0, 2);
    Form a = pool.form(4, k, 2), b = pool.form(4, l, 2);
    CHECK(holo_d(holo_d(a)).is_zero());
    CHECK(holo_d(wedge(a, b)) == wedge(holo_d(a), b) + gsign(k) * wedge(a, holo_d(b)));
  }
}

TEST_CASE("Lie derivative") {
  const int n = 2;
  CHECK(lie_deriv(d(n, 1), form_function(z(n, 1))) == form_function(one(n)));
  CHECK(lie_deriv(d(n, 1), dz(n, 2)).is_zero());
  PVF biv = wedge(d(n, 1), d(n, 2));
  CHECK(lie_deriv(biv, Form::basis(n, {2}, z(n, 1))) ==
        interior(biv, wedge(dz(n, 1), dz(n, 2))));
  // For vector fields the Lie derivative is the usual one: L_X f = X(f).
  Pool pool(3);
  for (int t = 0; t < 20; ++t) {
    PVF x = pool.pvf(3, 1, 2);
    Poly f = pool.poly(3, 2);
    CHECK(lie_deriv(x, form_function(f)) == form_function(schouten(x, pvf_function(f)).coeff({})));
  }
}

TEST_CASE("Lichnerowicz and Poisson bracket") {
  CoisoSetup plane(3, 0, wedge(d(3, 1), d(3, 2)));
  CHECK(lichnerowicz(plane, d(3, 3)).is_zero());
  CoisoSetup so3(3, 1, testing::so3_lie_poisson());
  PVF dz1 = lichnerowicz(so3, pvf_function(z(3, 1)));
  CHECK(dz1.degree() == 1);
  CHECK(dz1 == anchor(so3, dz(3, 1)));
  // Expanded by hand: d_pi z1 = z2 d3 - z3 d2.
  CHECK(dz1 == PVF::basis(3, {3}, z(3, 2)) + PVF::basis(3, {2}, -z(3, 3)));
  CoisoSetup c2(2, 0, wedge(d(2, 1), d(2, 2)));
  CHECK(poisson_bracket(c2, z(2, 1), z(2, 1)).is_zero());
  CHECK(poisson_bracket(c2, z(2, 1), z(2, 2)) == Poly::constant(2, -1));
  CHECK(poisson_bracket(so3, z(3, 1), z(3, 2)) == -z(3, 3));
  Pool pool(5);
  for (const PVF& pi : {testing::so3_lie_poisson(), PVF(wedge(d(3, 1), d(3, 3)))}) {
    CoisoSetup s(3, 0, pi);
    for (int t = 0; t < 20; ++t) {
      Poly f = pool.poly(3, 2), g = pool.poly(3, 2);
      Poly via_schouten = schouten(schouten(pi, pvf_function(f)), pvf_function(g)).coeff({});
      CHECK(poisson_bracket(s, f, g) == via_schouten);
      CHECK(poisson_bracket(s, f, g) == oracle_bracket(pi, f, g));
    }
  }
}

TEST_CASE("is_poisson examples") {
  CHECK(is_poisson(wedge(d(2, 1), d(2, 2))));
  CHECK(is_poisson(testing::so3_lie_poisson()));
  PVF pi = PVF::basis(3, {1, 2}, z(3, 1)) + wedge(d(3, 2), d(3, 3));
  // Jacobiator oracle on coordinates.
  auto jac = [&](const PVF& p) {
    Poly a = z(3, 1), b = z(3, 2), c = z(3, 3);
    return oracle_bracket(p, a, oracle_bracket(p, b, c)) + oracle_bracket(p, b, oracle_bracket(p, c, a)) +
           oracle_bracket(p, c, oracle_bracket(p, a, b));
  };
  CHECK(jac(pi).is_zero());
  CHECK(is_poisson(pi));
  PVF bad = PVF::basis(3, {1, 2}, z(3, 2)) + PVF::basis(3, {2, 3}, z(3, 1));
  CHECK_FALSE(jac(bad).is_zero());
  CHECK_FALSE(is_poisson(bad));
  CHECK_THROWS_AS(is_poisson(d(3, 1)), DomainError);
}

TEST_CASE("Gerstenhaber identities on a random pool") {
  Pool pool(2024);
  for (int t = 0; t < 60; ++t) {
    int n = pool.uniform(2, 4);
    int ka = pool.uniform(0, 3), kb = pool.uniform(0, 3), kc = pool.uniform(0, 3);
    PVF a = pool.pvf(n, ka, 2), b = pool.pvf(n, kb, 2), c = pool.pvf(n, kc, 2);
    int sa = ka - 1, sb = kb - 1, sc = kc - 1;
    CHECK(schouten(a, b) == -gsign(sa * sb) * schouten(b, a));
    PVF jac = schouten(schouten(a, b), c) + gsign(sa * (sb + sc)) * schouten(schouten(b, c), a) +
              gsign(sc * (sa + sb)) * schouten(schouten(c, a), b);
    CHECK(jac.is_zero());
    CHECK(schouten(a, wedge(b, c)) ==
          wedge(schouten(a, b), c) + gsign(sa * kb) * wedge(b, schouten(a, c)));
  }
}

TEST_CASE("Koszul bracket examples and DGLA axioms") {
  CoisoSetup c2(2, 0, wedge(d(2, 1), d(2, 2)));
  CHECK(koszul(c2, form_function(z(2, 1)), form_function(z(2, 2))).is_zero());
  CHECK(koszul(c2, dz(2, 1), form_function(z(2, 2))) == form_function(Poly::constant(2, -1)));
  CoisoSetup so3(3, 0, testing::so3_lie_poisson());
  CHECK(koszul(so3, dz(3, 1), dz(3, 2)) == holo_d(form_function(poisson_bracket(so3, z(3, 1), z(3, 2)))));
  CHECK(koszul(so3, dz(3, 1), dz(3, 2)) == -dz(3, 3));
  Pool pool(99);
  for (const CoisoSetup& s : {so3, CoisoSetup(4, 0, testing::symplectic_c4())}) {
    for (int t = 0; t < 15; ++t) {
      int i = pool.uniform(0, 2), j = pool.uniform(0, 2), k = pool.uniform(0, 2);
      Form a = pool.form(s.n, i, 2), b = pool.form(s.n, j, 2), c = pool.form(s.n, k, 1);
      int sa = i - 1, sb = j - 1, sc = k - 1;
      CHECK(koszul(s, a, b) == -gsign(sa * sb) * koszul(s, b, a));
      Form jac = koszul(s, koszul(s, a, b), c) + gsign(sa * (sb + sc)) * koszul(s, koszul(s, b, c), a) +
                 gsign(sc * (sa + sb)) * koszul(s, koszul(s, c, a), b);
      CHECK(jac.is_zero());
      CHECK(holo_d(koszul(s, a, b)) == koszul(s, holo_d(a), b) + gsign(sa) * koszul(s, a, holo_d(b)));
    }
  }
}

TEST_CASE("anchor examples") {
  CoisoSetup so3(3, 0, testing::so3_lie_poisson());
  Poly f = Poly::parse("z1*z2 - 3", 3);
  CHECK(anchor(so3, form_function(f)) == pvf_function(f));
  CHECK(anchor(so3, dz(3, 1)) == lichnerowicz(so3, pvf_function(z(3, 1))));
  CHECK(anchor(so3, wedge(dz(3, 1), dz(3, 2))) == wedge(anchor(so3, dz(3, 1)), anchor(so3, dz(3, 2))));
  // Defining formula: pi^#(alpha)(g) = i_pi(alpha ^ dg).
  Pool pool(17);
  for (int t = 0; t < 10; ++t) {
    Form a = pool.form(3, 1, 2);
    Poly g = pool.poly(3, 2);
    Poly lhs = schouten(anchor(so3, a), pvf_function(g)).coeff({});
    CHECK(lhs == interior(so3.pi, wedge(a, holo_d(form_function(g)))).coeff({}));
  }
}

TEST_CASE("h operator examples") {
  CoisoSetup so3(3, 0, testing::so3_lie_poisson());
  CHECK(h_op(so3, form_function(z(3, 1)), form_function(z(3, 2))).is_zero());
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      Form h = h_op(so3, dz(3, i), dz(3, j));
      CHECK(h == -interior(so3.pi, wedge(dz(3, i), dz(3, j))));
      Poly pij = i < j ? so3.pi_coeff(i, j) : (i > j ? -so3.pi_coeff(j, i) : Poly(3));
      CHECK(h == form_function(pij));
    }
  }
}

TEST_CASE("coisotropy tests and ideals") {
  CHECK(is_coisotropic(CoisoSetup(3, 1, testing::so3_lie_poisson())));
  CHECK_FALSE(is_coisotropic(CoisoSetup(2, 2, wedge(d(2, 1), d(2, 2)))));
  CHECK(is_coisotropic(CoisoSetup(4, 2, testing::symplectic_c4())));
  PVF bad = PVF::basis(3, {1, 2}, z(3, 2)) + PVF::basis(3, {2, 3}, z(3, 1));
  CHECK_THROWS_AS(is_coisotropic(CoisoSetup(3, 1, bad)), DomainError);

  CoisoSetup s(4, 2, testing::symplectic_c4());
  CHECK(in_LZ(s, d(4, 3)));
  CHECK_FALSE(in_LZ(s, d(4, 1)));
  CHECK(in_IZ(s, Form::basis(4, {3}, z(4, 1) * Poly::parse("z3 + 2*z4^2", 4))));
  CHECK_FALSE(in_IZ(s, dz(4, 3)));
  CHECK(normal_project(s, d(4, 1)).lift() == d(4, 1));
  CHECK(normal_project(s, PVF::basis(4, {1}, z(4, 1))).is_zero());
  CoisoSetup s3(3, 2, PVF(3));
  PVF xi = PVF::basis(3, {1, 2}, z(3, 3)) + wedge(d(3, 2), d(3, 3));
  CHECK(normal_project(s3, xi).lift() == PVF::basis(3, {1, 2}, z(3, 3)));
}

TEST_CASE("normal differential") {
  CoisoSetup s(4, 2, testing::symplectic_c4());
  NormalPVF nu(2, d(4, 1) * Rat(3) + d(4, 2) * Rat(-2));
  CHECK(normal_dpi(s, nu).is_zero());
  CHECK_THROWS_AS(normal_dpi(CoisoSetup(2, 2, wedge(d(2, 1), d(2, 2))), NormalPVF(2, d(2, 1))), DomainError);
  Pool pool(31);
  std::vector<CoisoSetup> setups = {s, CoisoSetup(3, 1, testing::so3_lie_poisson()),
                                    CoisoSetup(3, 3, testing::so3_lie_poisson()),
                                    CoisoSetup(3, 2, PVF::basis(3, {2, 3}, z(3, 1)))};
  for (const auto& st : setups) {
    for (int t = 0; t < 10; ++t) {
      int k = pool.uniform(0, 2);
      PVF x = pool.pvf(st.n, k, 2);
      CHECK(normal_dpi(st, normal_project(st, x)) == normal_project(st, lichnerowicz(st, x)));
      NormalPVF nu2 = normal_project(st, x);
      CHECK(normal_dpi(st, normal_dpi(st, nu2)).is_zero());
    }
  }
}

TEST_CASE("interior by pi does not preserve the conormal ideal") {
  // dz1 ^ dz3 lies in I*_Z but i_pi of it is a nonzero constant for the symplectic pi.
  CoisoSetup s(4, 2, testing::symplectic_c4());
  Form a = wedge(dz(4, 1), dz(4, 3));
  CHECK(in_IZ(s, a));
  CHECK_FALSE(in_IZ(s, interior(s.pi, a)));
}

TEST_CASE("operator formula for the contraction by an anchor image") {
  // i_{pi^#(alpha)} = ad(i_pi)^k / k! (alpha ^ .) for alpha in Omega^k, k <= 2.
  using Op = std::function<Form(const Form&)>;
  Pool pool(41);
  for (const CoisoSetup& s : {CoisoSetup(3, 0, testing::so3_lie_poisson()), CoisoSetup(4, 0, testing::symplectic_c4())}) {
    Op ip = [&](const Form& f) { return interior(s.pi, f); };
    for (int t = 0; t < 8; ++t) {
      int k = pool.uniform(0, 2);
      Form alpha = pool.form(s.n, k, 1);
      Op op = [alpha](const Form& f) { return wedge(alpha, f); };
      for (int step = 0; step < k; ++step) {
        Op prev = op;
        op = [ip, prev](const Form& f) { return ip(prev(f)) - prev(ip(f)); };
      }
      PVF image = anchor(s, alpha);
      for (int trial = 0; trial < 3; ++trial) {
        Form beta = pool.form(s.n, pool.uniform(0, s.n), 1);
        CHECK(interior(image, beta) * factorial(k) == op(beta));
      }
    }
  }
}
