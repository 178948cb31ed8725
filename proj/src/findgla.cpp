#include "coisocalc/findgla.hpp"

#include <algorithm>

namespace coisocalc {

namespace {

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

FinDGLA::FinDGLA(std::vector<int> degrees, Matrix d, std::vector<std::vector<Vec>> bracket)
    : deg_(std::move(degrees)), d_(std::move(d)), br_(std::move(bracket)) {
  const int m = dim();
  if (d_.rows() != m || d_.cols() != m) throw DomainError("differential must be square of basis size");
  if (static_cast<int>(br_.size()) != m) throw DomainError("bracket table has wrong row count");
  for (const auto& row : br_) {
    if (static_cast<int>(row.size()) != m) throw DomainError("bracket table has wrong column count");
    for (const auto& v : row) {
      if (static_cast<int>(v.size()) != m) throw DomainError("bracket value has wrong length");
    }
  }
}

FinDGLA FinDGLA::abelian(std::vector<int> degrees, Matrix d) {
  const int m = static_cast<int>(degrees.size());
  std::vector<std::vector<Vec>> br(m, std::vector<Vec>(m, Vec(m)));
  return FinDGLA(std::move(degrees), std::move(d), std::move(br));
}

Vec FinDGLA::basis(int i) const {
  Vec v(dim());
  v.at(i) = 1;
  return v;
}

Vec FinDGLA::d(const Vec& v) const { return d_ * v; }

Vec FinDGLA::bracket(const Vec& a, const Vec& b) const {
  const int m = dim();
  if (static_cast<int>(a.size()) != m || static_cast<int>(b.size()) != m) {
    throw DomainError("element does not belong to this DGLA");
  }
  Vec r(m);
  for (int i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < m; ++j) {
      if (b[j] == 0) continue;
      Rat c = a[i] * b[j];
      const Vec& s = br_[i][j];
      for (int k = 0; k < m; ++k) {
        if (s[k] != 0) r[k] += c * s[k];
      }
    }
  }
  return r;
}

std::optional<int> FinDGLA::degree(const Vec& v) const {
  if (static_cast<int>(v.size()) != dim()) throw DomainError("element does not belong to this DGLA");
  std::optional<int> k;
  for (int i = 0; i < dim(); ++i) {
    if (v[i] == 0) continue;
    if (k && *k != deg_[i]) throw DomainError("element is not homogeneous");
    k = deg_[i];
  }
  return k;
}

Vec FinDGLA::part(const Vec& v, int k) const {
  Vec r(dim());
  for (int i = 0; i < dim(); ++i) {
    if (deg_[i] == k) r[i] = v.at(i);
  }
  return r;
}

std::vector<int> FinDGLA::indices_of_degree(int k) const {
  std::vector<int> idx;
  for (int i = 0; i < dim(); ++i) {
    if (deg_[i] == k) idx.push_back(i);
  }
  return idx;
}

Matrix FinDGLA::d_block(int k) const {
  auto src = indices_of_degree(k);
  auto tgt = indices_of_degree(k + 1);
  Matrix b(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
  for (size_t r = 0; r < tgt.size(); ++r) {
    for (size_t c = 0; c < src.size(); ++c) b(static_cast<int>(r), static_cast<int>(c)) = d_(tgt[r], src[c]);
  }
  return b;
}

int FinDGLA::min_degree() const { return deg_.empty() ? 0 : *std::min_element(deg_.begin(), deg_.end()); }
int FinDGLA::max_degree() const { return deg_.empty() ? 0 : *std::max_element(deg_.begin(), deg_.end()); }

std::optional<std::string> FinDGLA::axiom_failure() const {
  const int m = dim();
  for (int i = 0; i < m; ++i) {
    Vec di = d(basis(i));
    auto k = degree(di);
    if (k && *k != deg_[i] + 1) return "d does not have degree 1 on e" + std::to_string(i);
  }
  if (!(d_ * d_).is_zero()) return "d^2 != 0";
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      auto k = degree(br_[i][j]);
      if (k && *k != deg_[i] + deg_[j]) return "bracket not additive in degree at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      Vec sym = br_[i][j] + Rat(sign_pow(deg_[i] * deg_[j])) * br_[j][i];
      if (!is_zero(sym)) return "graded antisymmetry fails at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      // d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]
      Vec ei = basis(i), ej = basis(j);
      Vec lhs = d(br_[i][j]);
      Vec rhs = bracket(d(ei), ej) + Rat(sign_pow(deg_[i])) * bracket(ei, d(ej));
      if (lhs != rhs) return "Leibniz rule fails at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
        Vec x = basis(i), y = basis(j), z = basis(k);
        Vec lhs = bracket(x, br_[j][k]);
        Vec rhs = bracket(br_[i][j], z) + Rat(sign_pow(deg_[i] * deg_[j])) * bracket(y, br_[i][k]);
        if (lhs != rhs) {
          return "Jacobi fails at (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
        }
      }
    }
  }
  return std::nullopt;
}

void FinDGLA::validate() const {
  if (auto f = axiom_failure()) throw DomainError("not a DGLA: " + *f);
}

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(rat_str(x));
  return a;
}

Vec vec_from_json(const nlohmann::json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw DomainError("vector of length " + std::to_string(n) + " expected");
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_string()) throw DomainError("rational entries must be strings");
    v[i] = parse_rat(j[i].get<std::string>());
  }
  return v;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw DomainError("matrix with " + std::to_string(rows) + " rows expected");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    Vec r = vec_from_json(j[i], cols);
    for (int c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

FinDGLA FinDGLA::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("degrees")) throw DomainError("DGLA document needs \"degrees\"");
  std::vector<int> deg = j.at("degrees").get<std::vector<int>>();
  const int m = static_cast<int>(deg.size());
  Matrix d = j.contains("differential") ? matrix_from_json(j.at("differential"), m, m) : Matrix(m, m);
  std::vector<std::vector<Vec>> br(m, std::vector<Vec>(m, Vec(m)));
  if (j.contains("bracket")) {
    for (const auto& e : j.at("bracket")) {
      auto pr = e.at("pair").get<std::vector<int>>();
      if (pr.size() != 2 || pr[0] < 0 || pr[1] < 0 || pr[0] >= m || pr[1] >= m || pr[0] > pr[1]) {
        throw DomainError("bracket pair must be [i, j] with 0 <= i <= j < dim");
      }
      Vec v = vec_from_json(e.at("value"), m);
      br[pr[0]][pr[1]] = v;
      br[pr[1]][pr[0]] = Rat(-sign_pow(deg[pr[0]] * deg[pr[1]])) * v;
    }
  }
  FinDGLA L(std::move(deg), std::move(d), std::move(br));
  L.validate();
  return L;
}

nlohmann::json FinDGLA::to_json() const {
  nlohmann::json j;
  j["degrees"] = deg_;
  j["differential"] = matrix_to_json(d_);
  nlohmann::json br = nlohmann::json::array();
  for (int i = 0; i < dim(); ++i) {
    for (int k = i; k < dim(); ++k) {
      if (is_zero(br_[i][k])) continue;
      br.push_back({{"pair", {i, k}}, {"value", vec_to_json(br_[i][k])}});
    }
  }
  j["bracket"] = br;
  return j;
}

std::optional<std::string> morphism_failure(const FinDGLA& L, const FinDGLA& M, const Matrix& f) {
  if (f.rows() != M.dim() || f.cols() != L.dim()) return "shape mismatch";
  for (int i = 0; i < L.dim(); ++i) {
    auto k = M.degree(f.column(i));
    if (k && *k != L.degrees()[i]) return "degree not preserved on e" + std::to_string(i);
  }
  if (!(f * L.d_matrix() - M.d_matrix() * f).is_zero()) return "does not commute with d";
  for (int i = 0; i < L.dim(); ++i) {
    for (int j = 0; j < L.dim(); ++j) {
      if (f * L.structure(i, j) != M.bracket(f.column(i), f.column(j))) {
        return "bracket not preserved at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  }
  return std::nullopt;
}

}  // namespace coisocalc
