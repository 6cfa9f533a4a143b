#pragma once
// Sparse multivariate polynomials over Z with GMP coefficients.
//
// Monomials are packed into a uint64: bytes 0..6 hold the exponents of
// Q_1..Q_4, alpha0, alpha, T and byte 7 holds the total degree, so plain
// integer comparison is graded-lex with Q_1 < ... < Q_4 < alpha0 < alpha < T.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace gv {

enum Var : int { Q1 = 0, Q2, Q3, Q4, Alpha0, Alpha, TVar, kNumVars };
constexpr int kMaxQ = 4;

using Mono = std::uint64_t;

inline int mono_deg(Mono m) { return static_cast<int>(m >> 56); }
inline int mono_exp(Mono m, int v) { return static_cast<int>((m >> (8 * v)) & 0xFF); }
Mono mono_var(int v, int e = 1);
Mono mono_mul(Mono a, Mono b);
bool mono_divides(Mono a, Mono b);  // a | b
inline Mono mono_div(Mono b, Mono a) { return b - a; }  // requires a | b
Mono mono_gcd(Mono a, Mono b);
std::string var_name(int v);
int var_index(const std::string& name);  // -1 if unknown

struct Term {
  Mono m;
  mpz_class c;
};

class Poly {
 public:
  Poly() = default;
  Poly(long c);  // NOLINT
  Poly(const mpz_class& c);  // NOLINT
  static Poly var(int v, int e = 1);
  static Poly monomial(Mono m, const mpz_class& c);
  static Poly from_terms(std::vector<Term> t);  // sorts and merges

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m == 0); }
  bool is_one() const { return t_.size() == 1 && t_[0].m == 0 && t_[0].c == 1; }
  mpz_class constant_value() const;  // requires is_constant
  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  const Term& lt() const { return t_.front(); }
  int total_degree() const { return t_.empty() ? -1 : mono_deg(t_[0].m); }
  int degree(int v) const;
  Mono var_support() const;  // byte v nonzero iff v occurs
  mpz_class content() const;  // positive gcd of coefficients (0 for zero)
  Mono mono_content() const;
  mpz_class max_norm() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly mul_term(Mono m, const mpz_class& c) const;
  Poly divexact_int(const mpz_class& c) const;
  Poly divexact_mono(Mono m) const;
  Poly pow(unsigned e) const;

  // Exact division; returns false if b does not divide *this.
  bool divides_by(const Poly& b, Poly* quotient) const;
  Poly divexact(const Poly& b) const;  // throws if inexact

  Poly eval(int v, const mpz_class& x) const;
  // f(v = p/q) * q^deg_v(f)
  Poly eval_frac(int v, const mpz_class& p, const mpz_class& q) const;
  // Coefficient of v^e as a polynomial in the remaining variables.
  Poly coeff(int v, int e) const;
  Poly derivative(int v) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }
  // Total order used for containers.
  bool operator<(const Poly& o) const;

  std::string str() const;

 private:
  std::vector<Term> t_;  // strictly decreasing monomials, nonzero coefficients
  void normalize();
  friend class PolyBuilder;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

// Accumulates terms then sorts/merges once.
class PolyBuilder {
 public:
  void add(Mono m, const mpz_class& c) { t_.push_back({m, c}); }
  void add(const Poly& p);
  void add_scaled(const Poly& p, Mono m, const mpz_class& c);
  Poly build();

 private:
  std::vector<Term> t_;
};

// Greatest common divisor over Z, normalized with positive leading coefficient.
Poly gcd(const Poly& a, const Poly& b);
// Reference implementation via primitive remainder sequences (slow, always correct).
Poly gcd_prs(const Poly& a, const Poly& b);

}  // namespace gv
