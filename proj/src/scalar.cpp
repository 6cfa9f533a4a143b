#include "gv/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace gv {

Scalar::Scalar(const mpq_class& c) {
  mpq_class q(c);
  q.canonicalize();
  num_ = Poly(q.get_num());
  den_ = Poly(q.get_den());
}

Scalar Scalar::raw(Poly n, Poly d) {
  Scalar s;
  if (n.is_zero()) return s;
  if (d.lt().c < 0) {
    n = -n;
    d = -d;
  }
  s.num_ = std::move(n);
  s.den_ = std::move(d);
  return s;
}

Scalar rf_reduce(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  if (num.is_zero()) return Scalar();
  if (den.is_one()) return Scalar(num);
  Poly g = gcd(num, den);
  if (g.is_one()) return Scalar::raw(num, den);
  return Scalar::raw(num.divexact(g), den.divexact(g));
}

mpq_class Scalar::constant_value() const {
  if (!is_constant()) throw std::logic_error("scalar is not constant: " + str());
  mpq_class q(num_.constant_value(), den_.constant_value());
  q.canonicalize();
  return q;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

static Scalar add_impl(const Scalar& a, const Scalar& b, bool sub) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return sub ? -b : b;
  const Poly& an = a.num();
  const Poly& ad = a.den();
  Poly bn = sub ? -b.num() : b.num();
  const Poly& bd = b.den();
  if (ad == bd) {
    Poly n = an + bn;
    if (ad.is_one()) return Scalar(n);
    return rf_reduce(n, ad);
  }
  if (ad.is_one()) return rf_reduce(an * bd + bn, bd);  // already coprime
  if (bd.is_one()) return rf_reduce(an + bn * ad, ad);
  Poly g = gcd(ad, bd);
  if (g.is_one()) return rf_reduce(an * bd + bn * ad, ad * bd);
  Poly ad1 = ad.divexact(g), bd1 = bd.divexact(g);
  Poly n = an * bd1 + bn * ad1;
  if (n.is_zero()) return Scalar();
  Poly h = gcd(n, g);
  if (!h.is_one()) {
    n = n.divexact(h);
    g = g.divexact(h);
  }
  return rf_reduce(n, ad1 * bd1 * g);
}

Scalar operator+(const Scalar& a, const Scalar& b) { return add_impl(a, b, false); }
Scalar operator-(const Scalar& a, const Scalar& b) { return add_impl(a, b, true); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return Scalar();
  if (a.den().is_one() && b.den().is_one()) return Scalar(a.num() * b.num());
  Poly g1 = gcd(a.num(), b.den());
  Poly g2 = gcd(b.num(), a.den());
  Poly n1 = g1.is_one() ? a.num() : a.num().divexact(g1);
  Poly d2 = g1.is_one() ? b.den() : b.den().divexact(g1);
  Poly n2 = g2.is_one() ? b.num() : b.num().divexact(g2);
  Poly d1 = g2.is_one() ? a.den() : a.den().divexact(g2);
  return Scalar::raw(n1 * n2, d1 * d2);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Scalar r;
  r.num_ = den_;
  r.den_ = num_;
  if (r.den_.lt().c < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar Scalar::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar r;
  r.num_ = num_.pow(static_cast<unsigned>(e));
  r.den_ = den_.pow(static_cast<unsigned>(e));
  return r;
}

Scalar Scalar::subs(int v, const mpq_class& x) const {
  int dn = num_.degree(v), dd = den_.degree(v);
  if (dn <= 0 && dd <= 0) return *this;
  const mpz_class& p = x.get_num();
  const mpz_class& q = x.get_den();
  Poly n = num_.eval_frac(v, p, q);
  Poly d = den_.eval_frac(v, p, q);
  if (dn < 0) dn = 0;
  if (dd < 0) dd = 0;
  // num/den = (n / q^dn) / (d / q^dd)
  mpz_class qp;
  if (dd > dn) {
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), dd - dn);
    n = n.mul_term(0, qp);
  } else if (dn > dd) {
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), dn - dd);
    d = d.mul_term(0, qp);
  }
  return rf_reduce(n, d);
}

static Scalar poly_subs(const Poly& p, int v, const Scalar& x) {
  int d = p.degree(v);
  if (d <= 0) return Scalar(p);
  Scalar r;
  for (int e = d; e >= 0; --e) r = r * x + Scalar(p.coeff(v, e));
  return r;
}

Scalar Scalar::subs(int v, const Scalar& x) const {
  if (!depends_on(v)) return *this;
  if (x.is_constant()) return subs(v, x.constant_value());
  return poly_subs(num_, v, x) / poly_subs(den_, v, x);
}

static std::string paren(const Poly& p) {
  std::string s = p.str();
  if (p.size() > 1) return "(" + s + ")";
  return s;
}

// A denominator may be left bare only if it is an integer or a single power.
static bool bare_den(const Poly& p) {
  if (p.size() != 1) return false;
  const Term& t = p.lt();
  if (t.m == 0) return true;
  if (t.c != 1) return false;
  int nv = 0;
  for (int v = 0; v < kNumVars; ++v) nv += mono_exp(t.m, v) > 0;
  return nv == 1;
}

std::string Scalar::str() const {
  if (den_.is_one()) return num_.str();
  return paren(num_) + "/" + (bare_den(den_) ? den_.str() : "(" + den_.str() + ")");
}

// ---------------------------------------------------------------------------
// Recursive-descent parser: expr := term (('+'|'-') term)*,
// term := unary (('*'|'/') unary)*, unary := '-' unary | power,
// power := atom ('^' int)?, atom := int | name | '(' expr ')'.

namespace {
struct Parser {
  const std::string& s;
  std::size_t i = 0;
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("scalar parse error at " + std::to_string(i) + ": " + what + " in '" + s + "'");
  }
  Scalar expr() {
    Scalar r = term();
    for (;;) {
      ws();
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        char op = s[i++];
        Scalar t = term();
        r = op == '+' ? r + t : r - t;
      } else {
        return r;
      }
    }
  }
  Scalar term() {
    Scalar r = unary();
    for (;;) {
      ws();
      if (i < s.size() && (s[i] == '*' || s[i] == '/')) {
        char op = s[i++];
        Scalar t = unary();
        if (op == '/' && t.is_zero()) fail("division by zero");
        r = op == '*' ? r * t : r / t;
      } else {
        return r;
      }
    }
  }
  Scalar unary() {
    ws();
    if (i < s.size() && s[i] == '-') {
      ++i;
      return -unary();
    }
    if (i < s.size() && s[i] == '+') {
      ++i;
      return unary();
    }
    return power();
  }
  Scalar power() {
    Scalar a = atom();
    ws();
    if (i < s.size() && s[i] == '^') {
      ++i;
      ws();
      bool neg = false;
      if (i < s.size() && s[i] == '-') {
        neg = true;
        ++i;
      }
      std::size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st == i) fail("expected exponent");
      int e = std::stoi(s.substr(st, i - st));
      a = a.pow(neg ? -e : e);
    }
    return a;
  }
  Scalar atom() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    if (s[i] == '(') {
      ++i;
      Scalar r = expr();
      ws();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      ++i;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      return Scalar(mpz_class(s.substr(st, i - st)));
    }
    if (std::isalpha(static_cast<unsigned char>(s[i]))) {
      std::size_t st = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string name = s.substr(st, i - st);
      int v = var_index(name);
      if (v < 0) fail("unknown variable '" + name + "'");
      return Scalar::var(v);
    }
    fail(std::string("unexpected character '") + s[i] + "'");
  }
};
}  // namespace

Scalar Scalar::parse(const std::string& s) {
  Parser p{s};
  Scalar r = p.expr();
  p.ws();
  if (p.i != s.size()) p.fail("trailing input");
  return r;
}

// ---------------------------------------------------------------------------

void ScalarSum::add(const Scalar& s) {
  if (s.is_zero()) return;
  auto it = parts_.find(s.den());
  if (it == parts_.end())
    parts_.emplace(s.den(), s.num());
  else
    it->second += s.num();
}

Scalar ScalarSum::total() const {
  Scalar r;
  for (const auto& [d, n] : parts_)
    if (!n.is_zero()) r += rf_reduce(n, d);
  return r;
}

Scalar interpolate_grid(const std::vector<int>& vars, const std::vector<std::vector<mpq_class>>& nodes,
                        const std::function<Scalar(const std::vector<mpq_class>&)>& f) {
  if (vars.size() != nodes.size()) throw std::invalid_argument("interpolate_grid: one node set per variable");
  // basis[v][i](x) = prod_{j != i} (x - x_j) / (x_i - x_j)
  std::vector<std::vector<Scalar>> basis(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& xs = nodes[v];
    if (xs.empty()) throw std::invalid_argument("interpolate_grid: empty node set");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Scalar b(1);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        if (xs[i] == xs[j]) throw std::invalid_argument("interpolate_grid: repeated node");
        b *= (Scalar::var(vars[v]) - Scalar(xs[j])) / Scalar(mpq_class(xs[i] - xs[j]));
      }
      basis[v].push_back(b);
    }
  }
  ScalarSum sum;
  std::vector<std::size_t> idx(vars.size(), 0);
  std::vector<mpq_class> pt(vars.size());
  for (;;) {
    Scalar term(1);
    for (std::size_t v = 0; v < vars.size(); ++v) {
      pt[v] = nodes[v][idx[v]];
      term *= basis[v][idx[v]];
    }
    Scalar val = f(pt);
    if (!val.is_zero()) sum.add(val * term);
    std::size_t v = 0;
    while (v < vars.size() && ++idx[v] == nodes[v].size()) idx[v++] = 0;
    if (v == vars.size()) break;
  }
  return sum.total();
}

}  // namespace gv
