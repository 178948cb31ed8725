#include "coisocalc/linalg.hpp"

#include <stdexcept>

namespace coisocalc {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(int rows, const std::vector<Vec>& cols) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) throw std::invalid_argument("column length mismatch");
    for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Matrix::column(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_) {
    if (x != 0) return false;
  }
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
  Matrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Rat& x = a(i, k);
      if (x == 0) continue;
      for (int j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
    }
  }
  return r;
}

Vec operator*(const Matrix& a, const Vec& v) {
  if (a.cols_ != static_cast<int>(v.size())) throw std::invalid_argument("matrix-vector shape mismatch");
  Vec r(a.rows_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      if (v[k] != 0) r[i] += a(i, k) * v[k];
    }
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
  return r;
}

Vec zero_vec(int n) { return Vec(n); }

bool is_zero(const Vec& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec operator*(const Rat& s, const Vec& v) {
  Vec r = v;
  for (auto& x : r) x *= s;
  return r;
}

Rref rref(Matrix m) {
  Rref out;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < m.rows(); ++i) {
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    }
    Rat inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.r = std::move(m);
  return out;
}

int rank(const Matrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<Vec> kernel(const Matrix& m) {
  Rref e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.r(static_cast<int>(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Rref e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.r(static_cast<int>(r), m.cols());
  return x;
}

int span_rank(int n, const std::vector<Vec>& vs) { return rank(Matrix::from_columns(n, vs)); }

CohomologySlice cohomology(const Matrix& d_in, const Matrix& d_out) {
  if (d_in.rows() != d_out.cols()) throw std::invalid_argument("complex shapes do not compose");
  if (!(d_out * d_in).is_zero()) throw std::invalid_argument("differential does not square to zero");
  CohomologySlice s;
  s.dim = d_out.cols();
  std::vector<Vec> ker = kernel(d_out);
  s.kernel_dim = static_cast<int>(ker.size());
  std::vector<Vec> span;
  for (int j = 0; j < d_in.cols(); ++j) span.push_back(d_in.column(j));
  s.image_rank = span_rank(s.dim, span);
  s.h = s.kernel_dim - s.image_rank;
  int r = s.image_rank;
  for (const auto& k : ker) {
    if (static_cast<int>(s.representatives.size()) == s.h) break;
    span.push_back(k);
    int r2 = span_rank(s.dim, span);
    if (r2 > r) {
      s.representatives.push_back(k);
      r = r2;
    } else {
      span.pop_back();
    }
  }
  return s;
}

}  // namespace coisocalc
