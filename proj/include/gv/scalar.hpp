#pragma once
// Exact rational functions num/den over Z[Q_1..Q_4, alpha0, alpha, T].
// Canonical form: gcd(num, den) = 1 over Z (integer content included) and the
// leading coefficient of den is positive, so structural equality is equality.

#include <functional>
#include <map>
#include <ostream>
#include <string>

#include "gv/poly.hpp"

namespace gv {

class Scalar {
 public:
  Scalar() : den_(1) {}
  Scalar(long c) : num_(c), den_(1) {}  // NOLINT
  Scalar(const mpz_class& c) : num_(c), den_(1) {}  // NOLINT
  Scalar(const mpq_class& c);  // NOLINT
  Scalar(const Poly& p) : num_(p), den_(1) {}  // NOLINT
  static Scalar var(int v) { return Scalar(Poly::var(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  mpq_class constant_value() const;  // requires is_constant

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  Scalar inverse() const;
  Scalar pow(int e) const;

  bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const {
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
  }

  // Substitute variable v by a rational or by another Scalar.
  Scalar subs(int v, const mpq_class& x) const;
  Scalar subs(int v, const Scalar& x) const;
  bool depends_on(int v) const { return num_.degree(v) > 0 || den_.degree(v) > 0; }

  // Canonical text form "num/den"; multi-term parts parenthesized.
  std::string str() const;
  static Scalar parse(const std::string& s);

 private:
  Poly num_, den_;
  friend Scalar rf_reduce(const Poly& num, const Poly& den);
  static Scalar raw(Poly n, Poly d);  // assumes already reduced, fixes sign
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

// Reduce num/den to canonical form. Throws std::domain_error on den = 0.
Scalar rf_reduce(const Poly& num, const Poly& den);

// Sums many Scalars, grouping equal denominators before combining.
class ScalarSum {
 public:
  void add(const Scalar& s);
  void add(const Scalar& s, const Scalar& factor) { add(s * factor); }
  Scalar total() const;
  bool empty() const { return parts_.empty(); }

 private:
  std::map<Poly, Poly> parts_;  // den -> accumulated numerator
};

// Lagrange interpolation on a tensor grid: the polynomial in `vars` (degree below
// nodes[v].size() in each) that equals f(point) at every grid point; f's values may
// depend on the other variables.
Scalar interpolate_grid(const std::vector<int>& vars, const std::vector<std::vector<mpq_class>>& nodes,
                        const std::function<Scalar(const std::vector<mpq_class>&)>& f);

}  // namespace gv
