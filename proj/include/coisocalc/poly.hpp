#pragma once

#include "coisocalc/rat.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coisocalc {

/// Multivariate polynomial in z_1..z_n with exact rational coefficients.
/// Variables are 1-based in the public API; exponent vectors are 0-based.
class Poly {
 public:
  using Exps = std::vector<int>;
  using Terms = std::map<Exps, Rat>;

  Poly() = default;
  explicit Poly(int nvars);

  static Poly constant(int nvars, const Rat& c);
  static Poly var(int nvars, int i);
  static Poly monomial(int nvars, const Exps& e, const Rat& c);

  int nvars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_term() const;

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int min_degree() const;
  bool is_homogeneous() const;
  Poly homogeneous_part(int d) const;

  void add_term(const Exps& e, const Rat& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rat& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
  friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
  friend Poly operator*(const Poly& a, const Poly& b);
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// Partial derivative with respect to z_i.
  Poly deriv(int i) const;

  /// Sets z_1..z_p to zero.
  Poly restrict_zero(int p) const;

  /// True when no monomial involves z_1..z_p.
  bool free_of_first(int p) const;

  /// Substitutes z_i -> images[i-1]; all images share one variable count.
  Poly substitute(const std::vector<Poly>& images, int target_nvars) const;

  /// Same monomials, reinterpreted with a different variable count.
  /// Variables beyond the new count must not occur.
  Poly with_nvars(int nvars) const;

  std::string str() const;

  /// Parses the text grammar; variables must satisfy 1 <= index <= nvars.
  static Poly parse(const std::string& text, int nvars);

 private:
  void check_same(const Poly& o) const;
  void adopt(const Poly& o);

  int n_ = 0;
  Terms terms_;
};

/// Parse failure with a 1-based column inside the polynomial string.
class PolyParseError : public std::runtime_error {
 public:
  PolyParseError(int column, const std::string& what)
      : std::runtime_error(what), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

/// All exponent vectors of total degree d in nvars variables, ascending lexicographic.
std::vector<Poly::Exps> monomials_of_degree(int nvars, int d);

}  // namespace coisocalc
