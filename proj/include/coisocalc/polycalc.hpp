#pragma once

#include "coisocalc/errors.hpp"
#include "coisocalc/multivector.hpp"

#include <stdexcept>
#include <string>

namespace coisocalc {

/// Value of i_{d1^d2}(dz1^dz2) under the composition convention i_{a^b} = i_a o i_b
/// with left contraction by a single vector field.
inline constexpr int kContractionSign12 = -1;

/// Chart C^n, bivector pi, and Z = {z_1 = ... = z_p = 0}.
struct CoisoSetup {
  int n = 0;
  int p = 0;
  PVF pi;

  CoisoSetup() = default;
  CoisoSetup(int n_, int p_, PVF pi_);

  /// Coefficient pi_ij for i < j.
  Poly pi_coeff(int i, int j) const;
};

/// Section of the exterior algebra of the normal bundle: only d_1..d_p occur and
/// coefficients depend on z_{p+1}..z_n only.
class NormalPVF {
 public:
  NormalPVF() = default;
  NormalPVF(int n, int p) : p_(p), v_(n) {}
  /// Validates the normal-form conditions.
  NormalPVF(int p, PVF v);

  int p() const { return p_; }
  int nvars() const { return v_.nvars(); }
  const PVF& lift() const { return v_; }
  bool is_zero() const { return v_.is_zero(); }
  int degree() const { return v_.degree(); }
  NormalPVF part(int k) const { return NormalPVF(p_, v_.part(k)); }

  NormalPVF& operator+=(const NormalPVF& o) {
    v_ += o.v_;
    return *this;
  }
  friend NormalPVF operator+(NormalPVF a, const NormalPVF& b) { return a += b; }
  friend NormalPVF operator-(NormalPVF a, const NormalPVF& b) {
    a.v_ -= b.v_;
    return a;
  }
  friend NormalPVF operator*(NormalPVF a, const Rat& r) {
    a.v_ *= r;
    return a;
  }
  friend NormalPVF operator*(const Rat& r, NormalPVF a) { return a * r; }
  bool operator==(const NormalPVF& o) const { return v_ == o.v_; }

 private:
  int p_ = 0;
  PVF v_;
};

// Graded calculus on the chart.
PVF schouten(const PVF& xi, const PVF& eta);
Form interior(const PVF& eta, const Form& alpha);
Form holo_d(const Form& alpha);
Form lie_deriv(const PVF& eta, const Form& alpha);

/// Vector field d_i as a PVF.
PVF coord_field(int n, int i);
/// Function f as a degree-0 PVF or form.
PVF pvf_function(const Poly& f);
Form form_function(const Poly& f);
/// The 1-form dz_i.
Form coord_form(int n, int i);

// Poisson-induced structures.
PVF lichnerowicz(const CoisoSetup& s, const PVF& xi);
Poly poisson_bracket(const CoisoSetup& s, const Poly& f, const Poly& g);
Form koszul(const CoisoSetup& s, const Form& alpha, const Form& beta);
PVF anchor(const CoisoSetup& s, const Form& alpha);
Form h_op(const CoisoSetup& s, const Form& alpha, const Form& beta);

bool is_poisson(const PVF& pi);
bool is_coisotropic(const CoisoSetup& s);
bool in_LZ(const CoisoSetup& s, const PVF& xi);
bool in_IZ(const CoisoSetup& s, const Form& alpha);
/// Restriction of a form to Z (pullback): drops dz_1..dz_p and sets z_1..z_p = 0.
Form restrict_to_Z(const CoisoSetup& s, const Form& alpha);
NormalPVF normal_project(const CoisoSetup& s, const PVF& xi);
NormalPVF normal_dpi(const CoisoSetup& s, const NormalPVF& nu);

/// The four coisotropy characterizations, evaluated independently.
struct CoisotropyWitness {
  bool bivector_test = false;   // pi_ij in I_Z for i < j <= p
  bool koszul_closed = false;   // [S,S]_pi in I*_Z on generators
  bool h_closed = false;        // h(S,S) in I*_Z on generators
  bool anchor_maps_ideal = false;  // pi^#(S) in L*_Z
};
CoisotropyWitness coisotropy_characterizations(const CoisoSetup& s);

/// Generators z_j, dz_i (i, j <= p) of the ideal I*_Z.
std::vector<Form> iz_generators(const CoisoSetup& s);

}  // namespace coisocalc
