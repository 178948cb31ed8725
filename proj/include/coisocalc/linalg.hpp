#pragma once

#include "coisocalc/rat.hpp"

#include <optional>
#include <vector>

namespace coisocalc {

using Vec = std::vector<Rat>;

/// Dense row-major matrix over Q. Columns index the source, rows the target.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int n);
  /// Matrix whose columns are the given vectors, each of length rows.
  static Matrix from_columns(int rows, const std::vector<Vec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Vec column(int j) const;
  bool is_zero() const;
  bool operator==(const Matrix& o) const = default;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vec operator*(const Matrix& a, const Vec& v);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> a_;
};

Vec zero_vec(int n);
bool is_zero(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rat& r, const Vec& v);

/// Reduced row echelon form with pivot columns chosen left to right.
struct Rref {
  Matrix r;
  std::vector<int> pivots;
};
Rref rref(Matrix m);

int rank(const Matrix& m);

/// Kernel basis: one vector per free column, in column order, with that free
/// variable set to 1 and the others to 0.
std::vector<Vec> kernel(const Matrix& m);

/// Particular solution of m x = b with every free variable set to 0.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

/// Rank of the span of the given vectors (all of length n).
int span_rank(int n, const std::vector<Vec>& vs);

/// Cohomology at the middle spot of C_prev --d_in--> C --d_out--> C_next.
struct CohomologySlice {
  int dim = 0;         // dim C
  int kernel_dim = 0;  // dim ker d_out
  int image_rank = 0;  // rank d_in
  int h = 0;           // kernel_dim - image_rank
  /// Kernel vectors completing a basis of im d_in to one of ker d_out.
  std::vector<Vec> representatives;
};

/// Throws std::invalid_argument if d_out * d_in != 0 or shapes disagree.
CohomologySlice cohomology(const Matrix& d_in, const Matrix& d_out);

}  // namespace coisocalc
