#include "gv/wgen.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "gv/errors.hpp"

namespace gv {

std::string family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  throw std::invalid_argument("unknown family '" + s + "'");
}

AlgebraSpec AlgebraSpec::symbolic(Family f, int r, bool generic) {
  if (r < 1 || r > kMaxQ) throw std::invalid_argument("symbolic rank must be in [1, 4]");
  std::vector<Scalar> q;
  for (int a = 0; a < r; ++a) q.push_back(Scalar::var(a));
  return with_q(f, r, q, generic);
}

AlgebraSpec AlgebraSpec::with_q(Family f, int r, std::vector<Scalar> q, bool generic) {
  AlgebraSpec s;
  s.family = f;
  s.rank = r;
  s.generic_level = generic;
  s.Q = std::move(q);
  if (generic) s.alpha0 = Scalar::var(Alpha0);
  s.validate();
  return s;
}

void AlgebraSpec::validate() const {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  if (static_cast<int>(Q.size()) != rank) throw std::invalid_argument("need exactly rank Q parameters");
  if (generic_level && family != Family::A)
    throw std::invalid_argument("generic level is only implemented for type A");
  if (family == Family::D && rank < 2) throw std::invalid_argument("type D needs rank >= 2");
  for (int a = 0; a < rank; ++a) {
    for (int b = a + 1; b < rank; ++b) {
      if (Q[a] == Q[b])
        throw DegenerateParameters("Q_" + std::to_string(a + 1) + " = Q_" + std::to_string(b + 1) +
                                   " violates pairwise distinctness");
      if (family != Family::A && Q[a] == -Q[b])
        throw DegenerateParameters("Q_" + std::to_string(a + 1) + " = -Q_" + std::to_string(b + 1) +
                                   " violates Q_a != +-Q_b");
    }
    if (family != Family::A && Q[a].is_zero())
      throw DegenerateParameters("Q_" + std::to_string(a + 1) + " = 0 violates Q_a != 0");
  }
}

FockModule make_module(const AlgebraSpec& spec) {
  std::vector<ColorSector> cs;
  for (int a = 0; a < spec.rank; ++a) cs.push_back({false, true, spec.Q[a]});
  if (spec.family == Family::C) cs.push_back({true, false, Scalar()});
  return FockModule(cs, spec.alpha0);
}

std::string gen_str(const GenId& g) {
  return (g.tilde ? "Wt^" : "W^") + std::to_string(g.weight);
}

std::vector<GenId> generators(const AlgebraSpec& spec) {
  std::vector<GenId> g;
  int r = spec.rank;
  switch (spec.family) {
    case Family::A:
      for (int i = 1; i <= r; ++i) g.push_back({i, false});
      break;
    case Family::B:
      for (int i = 1; i <= 2 * r; ++i) g.push_back({i, false});
      break;
    case Family::D:
      for (int d = 2; d <= 2 * r - 2; d += 2) g.push_back({d, false});
      g.push_back({r, true});
      break;
    case Family::C:
      for (int d = 2; d <= 2 * r; d += 2) g.push_back({d, false});
      g.push_back({r + 1, true});
      break;
  }
  return g;
}

bool half_integer_modes(const AlgebraSpec& spec, const GenId& g) {
  switch (spec.family) {
    case Family::B: return g.weight % 2 == 1;
    case Family::C: return g.tilde;
    default: return false;
  }
}

static mpz_class binom_nonneg(long top, long k) {
  if (top < 0 || k < 0 || k > top) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), top, k);
  return r;
}

mpz_class n_coeff(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("n_coeff: |a| != |b|");
  mpz_class r = 1;
  long bs = 0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    r *= binom_nonneg(a[u] - bs - static_cast<long>(u + 1), b[u]);
    if (r == 0) return 0;
    bs += b[u];
  }
  return r;
}

Field miura_field(const AlgebraSpec& spec, int i) {
  int r = spec.rank;
  if (i < 1 || i > r) throw std::invalid_argument("Miura generator index out of range");
  Field f;
  for (int j = 1; j <= i; ++j) {
    if (j < i && spec.alpha0.is_zero()) continue;
    Scalar pre = spec.alpha0.pow(i - j);
    std::vector<int> a(j), b(j);
    // colour subsets a_1 < ... < a_j
    std::function<void(int, int)> pick_a, pick_b;
    pick_b = [&](int u, int left) {
      if (u == j - 1) {
        b[u] = left;
        mpz_class n = n_coeff(a, b);
        if (n == 0) return;
        FieldTerm t{pre * Scalar(n), i - j, {}};
        for (int l = 0; l < j; ++l) t.factors.push_back({a[l], b[l]});
        f.push_back(t);
        return;
      }
      for (int x = 0; x <= left; ++x) {
        b[u] = x;
        pick_b(u + 1, left - x);
      }
    };
    pick_a = [&](int u, int from) {
      if (u == j) {
        pick_b(0, i - j);
        return;
      }
      for (int c = from; c <= r; ++c) {
        a[u] = c;
        pick_a(u + 1, c + 1);
      }
    };
    pick_a(0, 1);
  }
  return f;
}

static mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Partitions of d as multiplicity vectors; calls back with the list of parts.
static void for_partitions(int d, const std::function<void(const std::vector<int>&)>& cb) {
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int left, int maxp) {
    if (left == 0) {
      cb(parts);
      return;
    }
    for (int p = std::min(left, maxp); p >= 1; --p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(d, d);
}

static mpq_class partition_weight(const std::vector<int>& parts) {
  // prod_k (1/k!)^{m_k} / m_k!
  mpq_class w = 1;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    mpz_class kf = factorial(parts[i]);
    mpz_class den;
    mpz_pow_ui(den.get_mpz_t(), kf.get_mpz_t(), j - i);
    den *= factorial(static_cast<int>(j - i));
    w /= den;
    i = j;
  }
  return w;
}

Field lattice_bilinear_field(int color, int sign, int d) {
  if (d < 1) throw std::invalid_argument("lattice_bilinear_field: d must be positive");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  Field f;
  for_partitions(d, [&](const std::vector<int>& parts) {
    mpq_class w = partition_weight(parts);
    if (sign < 0 && parts.size() % 2) w = -w;
    FieldTerm t{Scalar(w), d - static_cast<int>(parts.size()), {}};
    for (int k : parts) t.factors.push_back({color, k - 1});
    std::sort(t.factors.begin(), t.factors.end());
    f.push_back(t);
  });
  return f;
}

Field dc_w_field(int ncolors, int d) {
  if (d < 2 || d % 2) throw std::invalid_argument("W^d needs even d >= 2");
  Field f;
  mpq_class norm(factorial(d), 2);
  for (int c = 1; c <= ncolors; ++c)
    for (int s : {1, -1})
      for (auto t : lattice_bilinear_field(c, s, d)) {
        t.coef *= Scalar(norm);
        f.push_back(t);
      }
  // merge identical factor lists
  std::map<std::pair<int, std::vector<FieldFactor>>, Scalar> acc;
  for (const auto& t : f) acc[{t.hbar2, t.factors}] += t.coef;
  Field out;
  for (const auto& [k, c] : acc)
    if (!c.is_zero()) out.push_back({c, k.first, k.second});
  return out;
}

// ---------------------------------------------------------------------------
// Bivariate truncated power series for the twisted contraction kernel.

namespace {
struct BiSeries {
  int D;
  std::vector<std::vector<mpq_class>> c;  // c[i][j], i + j <= D
  explicit BiSeries(int d) : D(d), c(d + 1, std::vector<mpq_class>(d + 1, 0)) {}
  BiSeries operator*(const BiSeries& o) const {
    BiSeries r(D);
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j)
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l) r.c[i][j] += c[k][l] * o.c[i - k][j - l];
    return r;
  }
  BiSeries operator+(const BiSeries& o) const {
    BiSeries r(D);
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    return r;
  }
  BiSeries inverse() const {
    BiSeries r(D);
    mpq_class c0 = c[0][0];
    r.c[0][0] = 1 / c0;
    for (int n = 1; n <= D; ++n)
      for (int i = 0; i <= n; ++i) {
        int j = n - i;
        mpq_class s = 0;
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l)
            if (k || l) s += c[k][l] * r.c[i - k][j - l];
        r.c[i][j] = -s / c0;
      }
    return r;
  }
};

// (1 + x)^e as a series in a (var = 0) or b (var = 1).
BiSeries power_series(int D, int var, const mpq_class& e) {
  BiSeries r(D);
  mpq_class coef = 1;
  for (int n = 0; n <= D; ++n) {
    (var == 0 ? r.c[n][0] : r.c[0][n]) = coef;
    coef = coef * (e - n) / (n + 1);
  }
  return r;
}
}  // namespace

mpq_class twist_contraction(int b1, int b2) {
  int D = b1 + b2;
  BiSeries sa = power_series(D, 0, mpq_class(1, 2)), sb = power_series(D, 1, mpq_class(1, 2));
  BiSeries ia = power_series(D, 0, mpq_class(-1, 2)), ib = power_series(D, 1, mpq_class(-1, 2));
  BiSeries s = sa + sb;
  BiSeries r = ia * ib * (s * s).inverse();
  return r.c[b1][b2] * factorial(b1) * factorial(b2) / 2;
}

Field twisted_expand(const Field& f, int twisted) {
  Field out;
  for (const auto& t : f) {
    std::vector<FieldFactor> tw, other;
    for (const auto& x : t.factors) (x.color == twisted ? tw : other).push_back(x);
    // all partial matchings of tw; used = decided unpaired, paired = matched
    std::vector<bool> used(tw.size(), false);
    std::vector<bool> paired(tw.size(), false);
    std::function<void(std::size_t, Scalar, int)> rec2 = [&](std::size_t i, Scalar c, int h2) {
      while (i < tw.size() && (paired[i] || used[i])) ++i;
      if (i == tw.size()) {
        FieldTerm n{c, h2, other};
        for (std::size_t k = 0; k < tw.size(); ++k)
          if (!paired[k]) n.factors.push_back(tw[k]);
        std::sort(n.factors.begin(), n.factors.end());
        out.push_back(n);
        return;
      }
      used[i] = true;  // decide i unpaired
      rec2(i + 1, c, h2);
      used[i] = false;
      paired[i] = true;
      for (std::size_t j = i + 1; j < tw.size(); ++j) {
        if (paired[j] || used[j]) continue;
        paired[j] = true;
        rec2(i + 1, c * Scalar(twist_contraction(tw[i].deriv, tw[j].deriv)), h2 + 2);
        paired[j] = false;
      }
      paired[i] = false;
    };
    rec2(0, t.coef, t.hbar2);
  }
  return out;
}

// ---------------------------------------------------------------------------

NOPoly field_mode(const FockModule& mod, const Field& f, int m2, int ann_max2) {
  NOPoly out;
  for (const auto& t : f) {
    const int j = static_cast<int>(t.factors.size());
    if (j == 0) {
      if (m2 == 0) out.add(NOKey{t.hbar2, {}, {}}, t.coef);
      continue;
    }
    const int lo = m2 - (j - 1) * ann_max2;
    std::vector<int> n2(j);
    NOKey key;
    std::function<void(int, int, Scalar, int)> rec = [&](int l, int sum, Scalar c, int h2) {
      const FieldFactor& fac = t.factors[l];
      const ColorSector& sec = mod.sector(fac.color);
      auto visit = [&](int n) {
        // (-1)^b (n+1)...(n+b) with n = n2/2
        mpq_class w = 1;
        for (int q = 1; q <= fac.deriv; ++q) w *= -(mpq_class(n, 2) + q);
        if (w == 0) return;
        Scalar cw = c * Scalar(w);
        auto next = [&](const Scalar& cc, int hh) {
          if (l + 1 == j) {
            NOKey k = key;
            std::sort(k.cre.begin(), k.cre.end());
            std::sort(k.ann.begin(), k.ann.end());
            k.hbar2 = hh;
            out.add(k, cc);
          } else {
            rec(l + 1, sum + n, cc, hh);
          }
        };
        if (n == 0) {
          if (!sec.has_zero_mode) return;
          for (const auto& [dh, v] : mod.zero_mode(fac.color)) next(cw * v, h2 + dh);
        } else if (n < 0) {
          key.cre.push_back({fac.color, n});
          next(cw, h2);
          key.cre.pop_back();
        } else {
          key.ann.push_back({fac.color, n});
          next(cw, h2);
          key.ann.pop_back();
        }
      };
      auto parity_ok = [&](int n) { return ((n % 2) != 0) == sec.half_integer; };
      if (l + 1 == j) {
        int n = m2 - sum;
        if (n <= ann_max2 && parity_ok(n)) visit(n);
        return;
      }
      for (int n = lo; n <= ann_max2; ++n)
        if (parity_ok(n)) visit(n);
    };
    rec(0, 0, t.coef, t.hbar2);
  }
  return out;
}

// Type B: W(u) = prod_b (u^2 + u (A_b + B_b) + :A_b B_b: + hbar/(4 zeta^2)),
// A = sum_k J_k zeta^{-k-1}, B = sum_k (-1)^{k+1} J_k zeta^{-k-1};
// W^i_{m} = 2^{-i} [u^{2r-i} zeta^{-2m-i}] W(u).
static NOPoly btype_mode(const AlgebraSpec& spec, const FockModule& mod, int i, int m2, int ann_max2) {
  const int r = spec.rank;
  const int K = ann_max2 / 2;  // max natural annihilator index
  auto J = [&](int color, int k, const Scalar& c, NOPoly& out, int h2) {
    if (k == 0) {
      for (const auto& [dh, v] : mod.zero_mode(color)) out.add(NOKey{h2 + dh, {}, {}}, c * v);
    } else if (k < 0) {
      out.add(NOKey{h2, {{color, 2 * k}}, {}}, c);
    } else {
      out.add(NOKey{h2, {}, {{color, 2 * k}}}, c);
    }
  };
  // factor series: p = u-power, N = zeta exponent (coefficient of zeta^{-N})
  auto factor = [&](int color, int p, int N) {
    NOPoly out;
    if (p == 2) {
      if (N == 0) out.add(NOKey{}, 1);
    } else if (p == 1) {
      int k = N - 1;
      if ((k % 2 + 2) % 2 == 1 && k <= K) J(color, k, Scalar(2), out, 0);
    } else {
      // -sum_{k1 + k2 = N - 2} (-1)^{k2} :J_{k1} J_{k2}:
      int s = N - 2;
      for (int k1 = s - K; k1 <= K; ++k1) {
        int k2 = s - k1;
        if (k2 > K) continue;
        NOPoly a, b;
        J(color, k1, Scalar(1), a, 0);
        J(color, k2, Scalar((k2 % 2 == 0) ? -1 : 1), b, 0);
        out.add(a.commuting_product(b));
      }
      if (N == 2) out.add(NOKey{2, {}, {}}, Scalar(mpq_class(1, 4)));
    }
    return out;
  };
  auto max_n = [&](int p) { return p == 2 ? 0 : (p == 1 ? K + 1 : 2 * K + 2); };
  const int total = m2 + i;  // zeta^{-2m-i}
  NOPoly out;
  std::vector<int> ps(r);
  std::function<void(int, int)> pick_p = [&](int b, int left) {
    if (b == r) {
      if (left != 0) return;
      // convolve over colours with exponents summing to total
      std::vector<int> suffix_max(r + 1, 0);
      for (int c = r - 1; c >= 0; --c) suffix_max[c] = suffix_max[c + 1] + max_n(ps[c]);
      std::function<void(int, int, const NOPoly&)> conv = [&](int c, int sum, const NOPoly& acc) {
        if (c == r - 1) {
          NOPoly f = factor(c + 1, ps[c], total - sum);
          if (!f.is_zero()) out.add(acc.commuting_product(f));
          return;
        }
        int lo = total - sum - suffix_max[c + 1];
        for (int N = std::min(lo, max_n(ps[c])); N <= max_n(ps[c]); ++N) {
          if (N < lo) continue;
          NOPoly f = factor(c + 1, ps[c], N);
          if (f.is_zero()) continue;
          conv(c + 1, sum + N, acc.commuting_product(f));
        }
      };
      NOPoly one;
      one.add(NOKey{}, 1);
      conv(0, 0, one);
      return;
    }
    for (int p = 0; p <= 2 && p <= left; ++p) {
      ps[b] = p;
      pick_p(b + 1, left - p);
    }
  };
  pick_p(0, 2 * r - i);
  Scalar scale(mpq_class(mpz_class(1), mpz_class(mpz_class(1) << i)));
  return out.scaled(scale);
}

NOPoly w_mode(const AlgebraSpec& spec, const FockModule& mod, const GenId& g, int m2, int ann_max2) {
  bool half = half_integer_modes(spec, g);
  if ((m2 % 2 != 0) != half)
    throw std::invalid_argument("mode " + std::to_string(m2) + "/2 has the wrong parity for " + gen_str(g));
  const int r = spec.rank;
  switch (spec.family) {
    case Family::A:
      if (g.tilde || g.weight < 1 || g.weight > r) throw std::invalid_argument("bad A generator");
      return field_mode(mod, miura_field(spec, g.weight), m2, ann_max2);
    case Family::B:
      if (g.tilde || g.weight < 1 || g.weight > 2 * r) throw std::invalid_argument("bad B generator");
      return btype_mode(spec, mod, g.weight, m2, ann_max2);
    case Family::D: {
      if (g.tilde) {
        if (g.weight != r) throw std::invalid_argument("bad D generator");
        FieldTerm t{Scalar(1), 0, {}};
        for (int c = 1; c <= r; ++c) t.factors.push_back({c, 0});
        return field_mode(mod, Field{t}, m2, ann_max2);
      }
      if (g.weight < 2 || g.weight > 2 * r - 2 || g.weight % 2) throw std::invalid_argument("bad D generator");
      return field_mode(mod, dc_w_field(r, g.weight), m2, ann_max2);
    }
    case Family::C: {
      if (g.tilde) {
        if (g.weight != r + 1) throw std::invalid_argument("bad C generator");
        FieldTerm t{Scalar(1), 0, {}};
        for (int c = 1; c <= r + 1; ++c) t.factors.push_back({c, 0});
        return field_mode(mod, Field{t}, m2, ann_max2);
      }
      if (g.weight < 2 || g.weight > 2 * r || g.weight % 2) throw std::invalid_argument("bad C generator");
      return field_mode(mod, twisted_expand(dc_w_field(r + 1, g.weight), r + 1), m2, ann_max2);
    }
  }
  throw std::logic_error("unreachable");
}

NOPoly project_degree(const NOPoly& p, int deg) {
  NOPoly r;
  for (const auto& [k, c] : p.terms())
    if (k.hbar2 + static_cast<int>(k.cre.size() + k.ann.size()) == deg) r.add(k, c);
  return r;
}

Scalar elementary(const std::vector<Scalar>& xs, int j) {
  if (j < 0 || j > static_cast<int>(xs.size())) return Scalar();
  std::vector<Scalar> e(j + 1);
  e[0] = 1;
  for (const auto& x : xs)
    for (int k = j; k >= 1; --k) e[k] += e[k - 1] * x;
  return e[j];
}

VirasoroReport virasoro_closure(const AlgebraSpec& spec, int max_mode, int max_weight2) {
  if (spec.family != Family::D) throw std::invalid_argument("Virasoro closure is implemented for type D");
  if (max_mode < 2) throw std::invalid_argument("need |m| up to at least 2 to read off the central charge");
  FockModule mod = make_module(spec);
  int ann = max_weight2 + 8 * max_mode + 2;
  std::map<int, NOPoly> L;
  for (int m = -2 * max_mode; m <= 2 * max_mode; ++m)
    L[m] = w_mode(spec, mod, GenId{2, false}, 2 * m, ann).scaled(Scalar(mpq_class(1, 2)));
  auto hbar_pow = [](int hbar2, const Scalar& c) {
    GradedSeries g;
    g.add(hbar2, 0, c);
    return g;
  };
  auto bracket = [&](int m, int n, const FockState& v) {
    return apply(mod, L[m], apply(mod, L[n], v)) - apply(mod, L[n], apply(mod, L[m], v)) -
           apply(mod, L[m + n], v) * hbar_pow(2, Scalar(m - n));
  };

  VirasoroReport rep;
  FockState vac = FockState::vacuum();
  // [L_2, L_{-2}] |0> - 4 hbar L_0 |0> = hbar^2 c/2 |0>
  FockState d = bracket(2, -2, vac);
  rep.central_charge = d.coeff({}).get(4, 0) * Scalar(2);
  if (!(d == vac * hbar_pow(4, rep.central_charge / Scalar(2))))
    rep.violations.push_back("[L_2, L_-2]|0> is not proportional to the vacuum: " + d.str());

  for (int w2 = 0; w2 <= max_weight2; w2 += 2)
    for (const Monomial& mono : monomials_of_weight(mod, w2)) {
      FockState v = FockState::monomial(mono, GradedSeries::constant(1));
      for (int m = -max_mode; m <= max_mode; ++m)
        for (int n = -max_mode; n < m; ++n) {
          FockState expect;
          if (m + n == 0) expect = v * hbar_pow(4, rep.central_charge * Scalar(m * m * m - m) / Scalar(12));
          FockState got = bracket(m, n, v);
          ++rep.checks;
          if (!(got == expect)) {
            std::ostringstream os;
            os << "[L_" << m << ", L_" << n << "] on " << v.str() << ": anomaly " << (got - expect).str();
            rep.violations.push_back(os.str());
          }
        }
    }
  return rep;
}

std::vector<std::string> degree_one_violations(const AlgebraSpec& spec, int max_mode) {
  if (spec.family != Family::C && spec.family != Family::D)
    throw std::invalid_argument("degree-one identities are implemented for types C and D");
  const int r = spec.rank;
  bool C = spec.family == Family::C;
  FockModule mod = make_module(spec);
  Scalar prod(1);
  for (const auto& q : spec.Q) prod *= q;
  std::vector<std::string> bad;
  auto single = [](int color, int k2, const Scalar& c) {
    NOPoly p;
    p.add(NOKey{0, {}, {{color, k2}}}, c);
    return p;
  };
  auto expect_eq = [&](const GenId& g, int m2, const NOPoly& want) {
    NOPoly got = project_degree(w_mode(spec, mod, g, m2, m2 + 6), 1);
    if (!(got == want))
      bad.push_back("pi_1(" + gen_str(g) + "_" + std::to_string(m2) + "/2) = " + got.str() + ", expected " +
                    want.str());
  };
  for (int m = 1; m <= max_mode; ++m) {
    for (int d = 2; d <= (C ? 2 * r : 2 * r - 2); d += 2) {
      NOPoly e;
      for (int a = 1; a <= r; ++a) e.add(single(a, 2 * m, Scalar(d) * spec.Q[a - 1].pow(d - 1)));
      expect_eq(GenId{d, false}, 2 * m, e);
    }
    if (C) {
      expect_eq(GenId{r + 1, true}, 2 * m - 1, single(r + 1, 2 * m - 1, prod));
    } else {
      NOPoly e;
      for (int a = 1; a <= r; ++a) e.add(single(a, 2 * m, prod / spec.Q[a - 1]));
      expect_eq(GenId{r, true}, 2 * m, e);
    }
  }
  return bad;
}

}  // namespace gv
