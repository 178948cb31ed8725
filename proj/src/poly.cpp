#include "coisocalc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace coisocalc {

Rat parse_rat(const std::string& text) {
  Rat r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("bad rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat factorial(int k) {
  mpz_class f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rat(f);
}

Poly::Poly(int nvars) : n_(nvars) {
  if (nvars < 0) throw std::invalid_argument("negative variable count");
}

Poly Poly::constant(int nvars, const Rat& c) {
  Poly p(nvars);
  p.add_term(Exps(nvars, 0), c);
  return p;
}

Poly Poly::var(int nvars, int i) {
  if (i < 1 || i > nvars) throw std::out_of_range("variable index out of range");
  Exps e(nvars, 0);
  e[i - 1] = 1;
  return monomial(nvars, e, 1);
}

Poly Poly::monomial(int nvars, const Exps& e, const Rat& c) {
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree() == 0);
}

Rat Poly::constant_term() const {
  auto it = terms_.find(Exps(n_, 0));
  return it == terms_.end() ? Rat(0) : it->second;
}

static int exps_degree(const Poly::Exps& e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, exps_degree(e));
  return d;
}

int Poly::min_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int k = exps_degree(e);
    if (d < 0 || k < d) d = k;
  }
  return d;
}

bool Poly::is_homogeneous() const { return degree() == min_degree(); }

Poly Poly::homogeneous_part(int d) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    if (exps_degree(e) == d) r.terms_.emplace(e, c);
  }
  return r;
}

void Poly::add_term(const Exps& e, const Rat& c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Poly::check_same(const Poly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial variable count mismatch");
}

// A default-constructed zero adopts the variable count of its partner.
void Poly::adopt(const Poly& o) {
  if (n_ != o.n_ && terms_.empty() && n_ == 0) n_ = o.n_;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  adopt(o);
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  adopt(o);
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(std::max(a.n_, b.n_));
  a.check_same(b);
  Poly r(a.n_);
  Poly::Exps e(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.empty() && o.terms_.empty()) return true;
  return n_ == o.n_ && terms_ == o.terms_;
}

Poly Poly::deriv(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("variable index out of range");
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i - 1] == 0) continue;
    Exps f = e;
    f[i - 1] -= 1;
    r.add_term(f, c * e[i - 1]);
  }
  return r;
}

Poly Poly::restrict_zero(int p) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    bool keep = true;
    for (int i = 0; i < p && i < n_; ++i) keep = keep && e[i] == 0;
    if (keep) r.terms_.emplace(e, c);
  }
  return r;
}

bool Poly::free_of_first(int p) const { return restrict_zero(p) == *this; }

Poly Poly::substitute(const std::vector<Poly>& images, int target_nvars) const {
  if (static_cast<int>(images.size()) != n_) throw std::invalid_argument("substitution arity mismatch");
  Poly r(target_nvars);
  // Cache powers per variable.
  std::vector<std::vector<Poly>> powers(n_);
  for (const auto& [e, c] : terms_) {
    Poly m = Poly::constant(target_nvars, c);
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(Poly::constant(target_nvars, 1));
      while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * images[i]);
      m = m * pw[e[i]];
    }
    r += m;
  }
  return r;
}

Poly Poly::with_nvars(int nvars) const {
  Poly r(nvars);
  for (const auto& [e, c] : terms_) {
    Exps f(nvars, 0);
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (i >= nvars) throw std::invalid_argument("variable z" + std::to_string(i + 1) + " out of range");
      f[i] = e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exps, Rat>> order(terms_.begin(), terms_.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    int da = exps_degree(a.first), db = exps_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : order) {
    Rat mag = c;
    if (first) {
      os << rat_str(c);
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) mag = -c;
      os << rat_str(mag);
    }
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      os << "*z" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
    first = false;
  }
  return os.str();
}

namespace {

// Recursive-descent reader over the polynomial grammar. A leading sign,
// an omitted unit coefficient and U+2212 as a minus sign are accepted.
class PolyReader {
 public:
  PolyReader(const std::string& s, int n) : s_(s), n_(n) {}

  Poly run() {
    Poly result(n_);
    skip_ws();
    int sign = 1;
    if (peek_sign(sign)) skip_ws();
    bool any = false;
    while (true) {
      Poly t = term();
      result += sign > 0 ? t : -t;
      any = true;
      skip_ws();
      if (pos_ >= s_.size()) break;
      if (!peek_sign(sign)) fail("expected '+' or '-'");
      skip_ws();
    }
    if (!any) fail("empty polynomial");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw PolyParseError(static_cast<int>(pos_) + 1,
                         "column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_sign(int& sign) {
    if (pos_ < s_.size() && s_[pos_] == '+') {
      sign = 1;
      ++pos_;
      return true;
    }
    if (pos_ < s_.size() && s_[pos_] == '-') {
      sign = -1;
      ++pos_;
      return true;
    }
    if (s_.compare(pos_, 3, "\xE2\x88\x92") == 0) {
      sign = -1;
      pos_ += 3;
      return true;
    }
    return false;
  }

  std::string digits() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return s_.substr(start, pos_ - start);
  }

  Poly term() {
    Rat coeff = 1;
    Poly::Exps e(n_, 0);
    bool need_var = false;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mpz_class num(digits());
      mpz_class den = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip_ws();
        den = mpz_class(digits());
        if (den == 0) fail("zero denominator");
      }
      coeff = Rat(num, den);
      coeff.canonicalize();
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
        need_var = true;
      } else {
        return Poly::monomial(n_, e, coeff);
      }
    } else {
      need_var = true;
    }
    while (need_var) {
      if (pos_ >= s_.size() || s_[pos_] != 'z') fail("expected variable 'z<index>'");
      ++pos_;
      size_t at = pos_;
      int idx = std::stoi(digits());
      if (idx < 1 || idx > n_) {
        pos_ = at;
        fail("variable index " + std::to_string(idx) + " outside 1.." + std::to_string(n_));
      }
      int exp = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip_ws();
        exp = std::stoi(digits());
      }
      e[idx - 1] += exp;
      skip_ws();
      need_var = false;
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip_ws();
        need_var = true;
      }
    }
    return Poly::monomial(n_, e, coeff);
  }

  const std::string& s_;
  int n_;
  size_t pos_ = 0;
};

}  // namespace

Poly Poly::parse(const std::string& text, int nvars) { return PolyReader(text, nvars).run(); }

std::vector<Poly::Exps> monomials_of_degree(int nvars, int d) {
  std::vector<Poly::Exps> out;
  if (d < 0) return out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Poly::Exps e(nvars, 0);
  // Enumerate compositions of d into nvars parts.
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == nvars - 1) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coisocalc
