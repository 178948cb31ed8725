#pragma once

#include "coisocalc/errors.hpp"
#include "coisocalc/linalg.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace coisocalc {

/// Finite-dimensional DGLA on a graded basis e_0..e_{m-1}.
/// Elements are coordinate vectors; the differential has degree +1.
class FinDGLA {
 public:
  FinDGLA() = default;
  /// bracket[i][j] = [e_i, e_j]. Shapes are checked, axioms are not.
  FinDGLA(std::vector<int> degrees, Matrix d, std::vector<std::vector<Vec>> bracket);

  /// Graded basis with zero bracket.
  static FinDGLA abelian(std::vector<int> degrees, Matrix d);

  int dim() const { return static_cast<int>(deg_.size()); }
  const std::vector<int>& degrees() const { return deg_; }
  const Matrix& d_matrix() const { return d_; }
  const Vec& structure(int i, int j) const { return br_[i][j]; }

  Vec basis(int i) const;
  Vec zero() const { return Vec(dim()); }
  Vec d(const Vec& v) const;
  Vec bracket(const Vec& a, const Vec& b) const;

  /// Degree of a nonzero homogeneous element; nullopt for zero. Throws if mixed.
  std::optional<int> degree(const Vec& v) const;
  /// Component of v in degree k.
  Vec part(const Vec& v, int k) const;
  std::vector<int> indices_of_degree(int k) const;
  /// Restriction of d to degree k -> k+1 in the bases indices_of_degree.
  Matrix d_block(int k) const;
  int min_degree() const;
  int max_degree() const;

  /// First failing axiom as a message, or nullopt when d is a graded derivation
  /// of degree 1 with d^2 = 0 and the bracket is graded antisymmetric and Jacobi.
  std::optional<std::string> axiom_failure() const;
  /// Throws DomainError carrying axiom_failure().
  void validate() const;

  /// {"degrees": [...], "differential": rows of rational strings,
  ///  "bracket": [{"pair": [i, j], "value": [...]}, ...]} with i <= j listed.
  static FinDGLA from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<int> deg_;
  Matrix d_;
  std::vector<std::vector<Vec>> br_;
};

/// Whether f (rows: M basis, columns: L basis) preserves degree, d and bracket.
std::optional<std::string> morphism_failure(const FinDGLA& L, const FinDGLA& M, const Matrix& f);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, int rows, int cols);
nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j, int n);

}  // namespace coisocalc
