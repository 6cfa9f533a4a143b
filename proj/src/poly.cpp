#include "gv/poly.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace gv {

Mono mono_var(int v, int e) {
  return (static_cast<Mono>(e) << (8 * v)) | (static_cast<Mono>(e) << 56);
}

Mono mono_mul(Mono a, Mono b) {
  if (mono_deg(a) + mono_deg(b) > 255) throw std::overflow_error("monomial degree overflow");
  return a + b;
}

bool mono_divides(Mono a, Mono b) {
  for (int v = 0; v < kNumVars; ++v)
    if (mono_exp(a, v) > mono_exp(b, v)) return false;
  return true;
}

Mono mono_gcd(Mono a, Mono b) {
  Mono r = 0;
  for (int v = 0; v < kNumVars; ++v) {
    int e = std::min(mono_exp(a, v), mono_exp(b, v));
    if (e) r += mono_var(v, e);
  }
  return r;
}

std::string var_name(int v) {
  switch (v) {
    case Alpha0: return "alpha0";
    case Alpha: return "alpha";
    case TVar: return "T";
    default: return "Q_" + std::to_string(v + 1);
  }
}

int var_index(const std::string& name) {
  if (name == "alpha0") return Alpha0;
  if (name == "alpha") return Alpha;
  if (name == "T") return TVar;
  if (name.size() == 3 && name[0] == 'Q' && name[1] == '_' && name[2] >= '1' && name[2] < '1' + kMaxQ)
    return name[2] - '1';
  return -1;
}

// ---------------------------------------------------------------------------

Poly::Poly(long c) {
  if (c != 0) t_.push_back({0, mpz_class(c)});
}

Poly::Poly(const mpz_class& c) {
  if (c != 0) t_.push_back({0, c});
}

Poly Poly::var(int v, int e) { return monomial(mono_var(v, e), 1); }

Poly Poly::monomial(Mono m, const mpz_class& c) {
  Poly p;
  if (c != 0) p.t_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> t) {
  Poly p;
  p.t_ = std::move(t);
  p.normalize();
  return p;
}

void Poly::normalize() {
  std::sort(t_.begin(), t_.end(), [](const Term& a, const Term& b) { return a.m > b.m; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < t_.size();) {
    Mono m = t_[i].m;
    mpz_class c = std::move(t_[i].c);
    std::size_t j = i + 1;
    for (; j < t_.size() && t_[j].m == m; ++j) c += t_[j].c;
    if (c != 0) {
      t_[w].m = m;
      t_[w].c = std::move(c);
      ++w;
    }
    i = j;
  }
  t_.resize(w);
}

mpz_class Poly::constant_value() const {
  if (t_.empty()) return 0;
  if (t_[0].m != 0) throw std::logic_error("not a constant polynomial");
  return t_[0].c;
}

int Poly::degree(int v) const {
  int d = t_.empty() ? -1 : 0;
  for (const auto& x : t_) d = std::max(d, mono_exp(x.m, v));
  return d;
}

Mono Poly::var_support() const {
  Mono s = 0;
  for (const auto& x : t_) s |= (x.m & 0x00FFFFFFFFFFFFFFULL);
  return s;
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (const auto& x : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Mono Poly::mono_content() const {
  if (t_.empty()) return 0;
  Mono g = t_[0].m;
  for (const auto& x : t_) {
    g = mono_gcd(g, x.m);
    if (g == 0) break;
  }
  return g;
}

mpz_class Poly::max_norm() const {
  mpz_class n = 0;
  for (const auto& x : t_)
    if (abs(x.c) > n) n = abs(x.c);
  return n;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.t_) x.c = -x.c;
  return r;
}

static std::vector<Term> merge_add(const std::vector<Term>& a, const std::vector<Term>& b, bool sub) {
  std::vector<Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].m > b[j].m)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].m > a[i].m) {
      r.push_back({b[j].m, sub ? mpz_class(-b[j].c) : b[j].c});
      ++j;
    } else {
      mpz_class c = sub ? mpz_class(a[i].c - b[j].c) : mpz_class(a[i].c + b[j].c);
      if (c != 0) r.push_back({a[i].m, std::move(c)});
      ++i;
      ++j;
    }
  }
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return *this = o;
  t_ = merge_add(t_, o.t_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge_add(t_, o.t_, true);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.t_.size() == 1) return b.mul_term(a.t_[0].m, a.t_[0].c);
  if (b.t_.size() == 1) return a.mul_term(b.t_[0].m, b.t_[0].c);
  if (mono_deg(a.t_[0].m) + mono_deg(b.t_[0].m) > 255) throw std::overflow_error("monomial degree overflow");
  Poly r;
  r.t_.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) r.t_.push_back({x.m + y.m, x.c * y.c});
  r.normalize();
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::mul_term(Mono m, const mpz_class& c) const {
  Poly r;
  if (c == 0 || t_.empty()) return r;
  if (mono_deg(t_[0].m) + mono_deg(m) > 255) throw std::overflow_error("monomial degree overflow");
  r.t_.reserve(t_.size());
  for (const auto& x : t_) r.t_.push_back({x.m + m, x.c * c});
  return r;
}

Poly Poly::divexact_int(const mpz_class& c) const {
  Poly r = *this;
  for (auto& x : r.t_) mpz_divexact(x.c.get_mpz_t(), x.c.get_mpz_t(), c.get_mpz_t());
  return r;
}

Poly Poly::divexact_mono(Mono m) const {
  Poly r = *this;
  for (auto& x : r.t_) x.m -= m;
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r(1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool Poly::divides_by(const Poly& b, Poly* quotient) const {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (is_zero()) {
    if (quotient) *quotient = Poly();
    return true;
  }
  if (b.is_constant()) {
    const mpz_class& c = b.t_[0].c;
    for (const auto& x : t_)
      if (!mpz_divisible_p(x.c.get_mpz_t(), c.get_mpz_t())) return false;
    if (quotient) *quotient = divexact_int(c);
    return true;
  }
  for (int v = 0; v < kNumVars; ++v)
    if (b.degree(v) > degree(v)) return false;
  if (b.t_.size() == 1) {
    const Term& bt = b.t_[0];
    for (const auto& x : t_)
      if (!mono_divides(bt.m, x.m) || !mpz_divisible_p(x.c.get_mpz_t(), bt.c.get_mpz_t())) return false;
    if (quotient) {
      Poly q = divexact_mono(bt.m);
      *quotient = q.divexact_int(bt.c);
    }
    return true;
  }
  std::vector<Term> q;
  Poly rem = *this;
  const Term& blt = b.t_[0];
  mpz_class c;
  while (!rem.is_zero()) {
    const Term& r = rem.t_[0];
    if (!mono_divides(blt.m, r.m) || !mpz_divisible_p(r.c.get_mpz_t(), blt.c.get_mpz_t())) return false;
    Mono m = r.m - blt.m;
    mpz_divexact(c.get_mpz_t(), r.c.get_mpz_t(), blt.c.get_mpz_t());
    q.push_back({m, c});
    rem -= b.mul_term(m, c);
  }
  if (quotient) {
    Poly qq;
    qq.t_ = std::move(q);  // produced in decreasing order
    *quotient = std::move(qq);
  }
  return true;
}

Poly Poly::divexact(const Poly& b) const {
  Poly q;
  if (!divides_by(b, &q)) throw std::logic_error("inexact polynomial division");
  return q;
}

Poly Poly::eval(int v, const mpz_class& x) const {
  Poly r;
  int d = degree(v);
  if (d <= 0) return *this;
  std::vector<mpz_class> pw(d + 1);
  pw[0] = 1;
  for (int i = 1; i <= d; ++i) pw[i] = pw[i - 1] * x;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) {
    int e = mono_exp(t.m, v);
    r.t_.push_back({e ? t.m - mono_var(v, e) : t.m, t.c * pw[e]});
  }
  r.normalize();
  return r;
}

Poly Poly::eval_frac(int v, const mpz_class& p, const mpz_class& q) const {
  int d = degree(v);
  if (d <= 0) return *this;
  std::vector<mpz_class> pp(d + 1), qq(d + 1);
  pp[0] = qq[0] = 1;
  for (int i = 1; i <= d; ++i) {
    pp[i] = pp[i - 1] * p;
    qq[i] = qq[i - 1] * q;
  }
  Poly r;
  for (const auto& t : t_) {
    int e = mono_exp(t.m, v);
    r.t_.push_back({e ? t.m - mono_var(v, e) : t.m, t.c * pp[e] * qq[d - e]});
  }
  r.normalize();
  return r;
}

Poly Poly::coeff(int v, int e) const {
  Poly r;
  Mono sub = e ? mono_var(v, e) : 0;
  for (const auto& t : t_)
    if (mono_exp(t.m, v) == e) r.t_.push_back({t.m - sub, t.c});
  return r;
}

Poly Poly::derivative(int v) const {
  Poly r;
  Mono sub = mono_var(v, 1);
  for (const auto& t : t_) {
    int e = mono_exp(t.m, v);
    if (e) r.t_.push_back({t.m - sub, t.c * e});
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
  return true;
}

bool Poly::operator<(const Poly& o) const {
  if (t_.size() != o.t_.size()) return t_.size() < o.t_.size();
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (t_[i].m != o.t_[i].m) return t_[i].m < o.t_[i].m;
    int c = cmp(t_[i].c, o.t_[i].c);
    if (c) return c < 0;
  }
  return false;
}

static std::string mono_str(Mono m) {
  std::string s;
  for (int v = 0; v < kNumVars; ++v) {
    int e = mono_exp(m, v);
    if (!e) continue;
    if (!s.empty()) s += '*';
    s += var_name(v);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : t_) {
    mpz_class a = abs(t.c);
    bool neg = t.c < 0;
    if (first) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.m == 0) {
      s += a.get_str();
    } else {
      if (a != 1) s += a.get_str() + '*';
      s += mono_str(t.m);
    }
  }
  return s;
}

void PolyBuilder::add(const Poly& p) {
  for (const auto& t : p.terms()) t_.push_back(t);
}

void PolyBuilder::add_scaled(const Poly& p, Mono m, const mpz_class& c) {
  if (c == 0) return;
  for (const auto& t : p.terms()) t_.push_back({mono_mul(t.m, m), t.c * c});
}

Poly PolyBuilder::build() {
  Poly p;
  p.t_ = std::move(t_);
  t_.clear();
  p.normalize();
  return p;
}

// ---------------------------------------------------------------------------
// gcd

static Poly normalize_sign(Poly p) {
  if (!p.is_zero() && p.lt().c < 0) return -p;
  return p;
}

static Poly primitive(const Poly& p) {
  if (p.is_zero()) return p;
  mpz_class c = p.content();
  if (p.lt().c < 0) c = -c;
  return c == 1 ? p : p.divexact_int(c);
}

static int main_var(Mono support) {
  for (int v = kNumVars - 1; v >= 0; --v)
    if ((support >> (8 * v)) & 0xFF) return v;
  return -1;
}

static mpz_class int_gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

static mpz_class symmod(const mpz_class& c, const mpz_class& x, const mpz_class& half) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
  if (r > half) r -= x;
  return r;
}

// Recover sum_i g_i v^i from h = sum_i g_i x^i using symmetric remainders.
static Poly interpolate(const Poly& h, const mpz_class& x, int v) {
  PolyBuilder out;
  std::vector<Term> cur(h.terms().begin(), h.terms().end());
  mpz_class half = x / 2;
  for (int i = 0; !cur.empty(); ++i) {
    if (i > 255) throw std::overflow_error("interpolation degree overflow");
    std::vector<Term> next;
    Mono vm = i ? mono_var(v, i) : 0;
    for (auto& t : cur) {
      mpz_class s = symmod(t.c, x, half);
      if (s != 0) out.add(mono_mul(t.m, vm), s);
      mpz_class rest = t.c - s;
      if (rest != 0) {
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), x.get_mpz_t());
        next.push_back({t.m, std::move(rest)});
      }
    }
    cur = std::move(next);
  }
  return out.build();
}

static std::optional<Poly> heu_gcd(const Poly& f0, const Poly& g0) {
  if (f0.is_zero()) return normalize_sign(g0);
  if (g0.is_zero()) return normalize_sign(f0);
  if (f0.is_constant() || g0.is_constant()) return Poly(int_gcd(f0.content(), g0.content()));
  mpz_class cf = f0.content(), cg = g0.content();
  mpz_class c = int_gcd(cf, cg);
  Poly f = cf == 1 ? f0 : f0.divexact_int(cf);
  Poly g = cg == 1 ? g0 : g0.divexact_int(cg);
  int v = main_var(f.var_support() | g.var_support());
  mpz_class fn = f.max_norm(), gn = g.max_norm();
  mpz_class B = 2 * std::min(fn, gn) + 29;
  mpz_class sq = sqrt(B);
  mpz_class x = std::min(B, mpz_class(99 * sq));
  mpz_class alt = 2 * std::min(mpz_class(fn / abs(f.lt().c)), mpz_class(gn / abs(g.lt().c))) + 2;
  if (alt > x) x = alt;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Poly ff = f.eval(v, x), gg = g.eval(v, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto h0 = heu_gcd(ff, gg);
      if (!h0) return std::nullopt;
      Poly h = primitive(interpolate(*h0, x, v));
      if (!h.is_zero() && f.divides_by(h, nullptr) && g.divides_by(h, nullptr))
        return c == 1 ? h : h.mul_term(0, c);
    }
    mpz_class s = sqrt(sqrt(x));
    x = 73794 * x * s / 27011;
  }
  return std::nullopt;
}

static Poly content_in(const Poly& p, int v);

Poly gcd_prs(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_sign(b);
  if (b.is_zero()) return normalize_sign(a);
  if (a.is_constant() || b.is_constant()) return Poly(int_gcd(a.content(), b.content()));
  int v = main_var(a.var_support() | b.var_support());
  Poly ca = content_in(a, v), cb = content_in(b, v);
  Poly c = gcd_prs(ca, cb);
  Poly pa = a.divexact(ca), pb = b.divexact(cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  while (!pb.is_zero() && pb.degree(v) > 0) {
    // pseudo-remainder of pa by pb in v
    int db = pb.degree(v);
    Poly lb = pb.coeff(v, db);
    Poly r = pa;
    int dr = r.degree(v);
    int steps = dr - db + 1;
    while (!r.is_zero() && (dr = r.degree(v)) >= db) {
      Poly lr = r.coeff(v, dr);
      r = lb * r - (lr * pb).mul_term(mono_var(v, dr - db), 1);
      --steps;
    }
    if (steps > 0) r *= lb.pow(steps);
    pa = pb;
    pb = r.is_zero() ? r : r.divexact(content_in(r, v));
  }
  if (!pb.is_zero()) return normalize_sign(c);  // coprime in v
  Poly g = pa.divexact(content_in(pa, v));
  return normalize_sign(c * g);
}

static Poly content_in(const Poly& p, int v) {
  int d = p.degree(v);
  if (d <= 0) return normalize_sign(p);
  Poly g;
  for (int e = d; e >= 0; --e) {
    Poly ce = p.coeff(v, e);
    if (ce.is_zero()) continue;
    g = gcd_prs(g, ce);
    if (g.is_one()) break;
  }
  // keep sign so that p / content has the same leading sign convention
  return g;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_sign(b);
  if (b.is_zero()) return normalize_sign(a);
  if (a.is_constant() || b.is_constant()) return Poly(int_gcd(a.content(), b.content()));
  if (a == b || a == -b) return normalize_sign(a);
  Mono ma = a.mono_content(), mb = b.mono_content();
  Mono mg = mono_gcd(ma, mb);
  Poly pa = ma ? a.divexact_mono(ma) : a;
  Poly pb = mb ? b.divexact_mono(mb) : b;
  Poly g;
  if (pa.is_constant() || pb.is_constant()) {
    g = Poly(int_gcd(pa.content(), pb.content()));
  } else if (pa.size() <= pb.size() && pb.divides_by(pa, nullptr)) {
    g = normalize_sign(pa);
  } else if (pb.size() < pa.size() && pa.divides_by(pb, nullptr)) {
    g = normalize_sign(pb);
  } else {
    auto h = heu_gcd(pa, pb);
    g = h ? *h : gcd_prs(pa, pb);
  }
  if (mg) g = g.mul_term(mg, 1);
  return normalize_sign(g);
}

}  // namespace gv
