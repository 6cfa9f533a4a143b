#include "gv/tr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "gv/errors.hpp"
#include "gv/parallel.hpp"

namespace gv {

void laurent_add(LaurentPoly& a, const LaurentPoly& b, const Scalar& factor) {
  for (const auto& [e, v] : b) {
    Scalar s = a[e] + v * factor;
    if (s.is_zero())
      a.erase(e);
    else
      a[e] = s;
  }
}

LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b) {
  std::map<int, ScalarSum> acc;
  for (const auto& [ea, va] : a)
    for (const auto& [eb, vb] : b) acc[ea + eb].add(va * vb);
  LaurentPoly out;
  for (const auto& [e, s] : acc) {
    Scalar v = s.total();
    if (!v.is_zero()) out[e] = v;
  }
  return out;
}

SpectralCurve SpectralCurve::make(const AlgebraSpec& spec, const Scalar& T) {
  SpectralCurve c{spec, T};
  c.validate();
  return c;
}

void SpectralCurve::validate() const {
  spec.validate();
  if (spec.family != Family::A && spec.family != Family::B)
    throw std::invalid_argument("topological recursion is implemented for types A and B only");
  if (spec.generic_level) throw std::invalid_argument("the recursion needs the self-dual level");
  if (spec.family == Family::A && spec.rank < 2) throw std::invalid_argument("type A curve needs rank >= 2");
  if (spec.family == Family::B && spec.rank == 1 && !T.is_zero())
    throw std::invalid_argument("type B with r = 1 requires T = 0");
}

int SpectralCurve::fiber_size() const { return spec.family == Family::B ? 2 * spec.rank : spec.rank; }

std::vector<FiberPoint> SpectralCurve::fiber(int a) const {
  std::vector<FiberPoint> f{{a, 1}};
  bool B = spec.family == Family::B;
  if (B) f.push_back({a, -1});
  for (int b = 1; b <= spec.rank; ++b) {
    if (b == a) continue;
    f.push_back({b, 1});
    if (B) f.push_back({b, -1});
  }
  return f;
}

Scalar SpectralCurve::zero_mode_factor(int a, const FiberPoint& p) const {
  // omega_{0,1}(b, -zeta) pulled back is again Q_b dzeta/zeta; eps_z supplies the sign
  const Scalar& Qb = spec.Q[p.color - 1];
  return (p.sign > 0 ? Qb : -Qb) - spec.Q[a - 1];
}

Scalar SpectralCurve::denominator(int a) const {
  auto f = fiber(a);
  Scalar d(1);
  for (std::size_t j = 1; j < f.size(); ++j) d *= zero_mode_factor(a, f[j]);
  if (d.is_zero()) throw DegenerateParameters("resonant Q: recursion kernel has a vanishing denominator");
  return d;
}

int SpectralCurve::t_genus2() const { return shift_info(spec).hbar2; }

Scalar SpectralCurve::t_term(int a) const {
  if (spec.family == Family::A) return -T;
  // 2^{2r-1} T omega_{0,1}(z) (dzeta)^{2r-1} / zeta^{2r}
  return Scalar(mpz_class(mpz_class(1) << (2 * spec.rank - 1))) * T * spec.Q[a - 1];
}

int SpectralCurve::vanishing_weight(int g2) const { return gv::vanishing_weight(spec, g2); }

namespace {

int sign_pow(int s, int k) { return (s < 0 && k % 2) ? -1 : 1; }

int weight2(const std::vector<Label>& v) {
  int w = 0;
  for (const auto& l : v) w += l.k2;
  return w;
}

}  // namespace

LaurentPoly block_value(const SpectralCurve& c, const CorrelatorLookup& F, int g2,
                        const std::vector<FiberPoint>& L, const std::vector<Label>& N) {
  LaurentPoly out;
  std::size_t size = L.size() + N.size();
  if (L.empty()) throw std::invalid_argument("block without a fibre point");
  if (g2 == 0 && size == 1) throw std::invalid_argument("omega_{0,1} is excluded from Omega'");
  if (g2 == 0 && size == 2) {
    if (L.size() == 2) {
      if (L[0].color == L[1].color && L[0].sign != L[1].sign) out[-2] = Scalar(mpq_class(-1, 4));
      return out;
    }
    // sum_k k dxi^b_k(p) dxi^b_{-k}(w): the dxi_{-k}(w) coefficient at p
    const FiberPoint& p = L[0];
    if (p.color != N[0].color) return out;
    int k = N[0].k2 / 2;
    out[k - 1] = Scalar(static_cast<long>(k * sign_pow(p.sign, k)));
    return out;
  }
  int maxw = c.vanishing_weight(g2) - weight2(N);
  int n = static_cast<int>(L.size());
  if (maxw < 2 * n) return out;
  std::map<int, ScalarSum> acc;
  std::vector<int> k(n, 1);
  std::function<void(int, int)> rec = [&](int j, int used) {
    if (j == n) {
      std::vector<Label> labels = N;
      int e = 0, s = 1;
      for (int l = 0; l < n; ++l) {
        labels.push_back({L[l].color, 2 * k[l]});
        e -= k[l] + 1;
        s *= sign_pow(L[l].sign, k[l]);
      }
      std::sort(labels.begin(), labels.end());
      Scalar v = F({g2, labels});
      if (!v.is_zero()) acc[e].add(s > 0 ? v : -v);
      return;
    }
    for (int kk = 1; used + 2 * kk + 2 * (n - j - 1) <= maxw; ++kk) {
      k[j] = kk;
      rec(j + 1, used + 2 * kk);
    }
  };
  rec(0, 0);
  for (const auto& [e, s] : acc) {
    Scalar v = s.total();
    if (!v.is_zero()) out[e] = v;
  }
  return out;
}

LaurentPoly omega_combine(const SpectralCurve& c, const CorrelatorLookup& F, int g2,
                          const std::vector<FiberPoint>& Z, const std::vector<Label>& spectators) {
  int i = static_cast<int>(Z.size());
  int n = static_cast<int>(spectators.size());
  if (i == 0 || i > 16 || n > 16) throw std::invalid_argument("omega_combine: unsupported sizes");
  LaurentPoly result;
  // Blocks are generated by their lowest remaining fibre point; sum (g2_L - 2) = g2 - 2i.
  // A structure is evaluated only once complete, so no omega_{0,1} factor is ever looked up.
  struct Block {
    std::vector<FiberPoint> L;
    std::vector<Label> N;
    int g2;
  };
  std::vector<Block> blocks;
  std::map<std::tuple<std::vector<FiberPoint>, std::vector<Label>, int>, LaurentPoly> memo;
  auto value = [&](const Block& b) -> const LaurentPoly& {
    auto key = std::make_tuple(b.L, b.N, b.g2);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, block_value(c, F, b.g2, b.L, b.N)).first;
    return it->second;
  };
  std::function<void(unsigned, unsigned, int)> rec = [&](unsigned zm, unsigned sm, int budget) {
    if (zm == 0) {
      if (sm != 0 || budget != 0) return;
      LaurentPoly prod{{0, Scalar(1)}};
      for (const auto& b : blocks) {
        const LaurentPoly& v = value(b);
        if (v.empty()) return;
        prod = laurent_mul(prod, v);
      }
      laurent_add(result, prod);
      return;
    }
    unsigned first = zm & (~zm + 1);
    unsigned rest = zm ^ first;
    for (unsigned sub = rest;; sub = (sub - 1) & rest) {
      unsigned zleft = rest & ~sub;
      int remz = __builtin_popcount(zleft);
      std::vector<FiberPoint> L;
      for (int j = 0; j < i; ++j)
        if ((first | sub) >> j & 1u) L.push_back(Z[j]);
      for (unsigned ss = sm;; ss = (ss - 1) & sm) {
        unsigned sleft = sm & ~ss;
        if (!(zleft == 0 && sleft != 0)) {
          std::vector<Label> N;
          for (int j = 0; j < n; ++j)
            if (ss >> j & 1u) N.push_back(spectators[j]);
          std::sort(N.begin(), N.end());
          int size = static_cast<int>(L.size() + N.size());
          int hi = budget + 2 + 2 * remz;
          int lo = zleft == 0 ? hi : 0;
          for (int gl = std::max(lo, 0); gl <= hi; ++gl) {
            if (gl == 0 && size == 1) continue;
            blocks.push_back({L, N, gl});
            rec(zleft, sleft, budget - (gl - 2));
            blocks.pop_back();
          }
        }
        if (ss == 0) break;
      }
      if (sub == 0) break;
    }
  };
  rec((1u << i) - 1, (1u << n) - 1, g2 - 2 * i);
  return result;
}

LaurentPoly q_apply(const SpectralCurve& c, const CorrelatorLookup& F, int g2, int i, int a,
                    const std::vector<Label>& spectators) {
  auto f = c.fiber(a);
  int N = static_cast<int>(f.size());
  if (i < 1 || i > N) throw std::invalid_argument("q_apply: i out of range");
  LaurentPoly out;
  // subsets of f'(z) of size i - 1
  for (unsigned m = 0; m < (1u << (N - 1)); ++m) {
    if (__builtin_popcount(m) != i - 1) continue;
    std::vector<FiberPoint> Z{f[0]};
    Scalar pref(1);
    int minus = 0;
    for (int j = 1; j < N; ++j) {
      if (m >> (j - 1) & 1u) {
        Z.push_back(f[j]);
        if (f[j].sign < 0) ++minus;
      } else {
        pref *= c.zero_mode_factor(a, f[j]);
      }
    }
    if (pref.is_zero()) continue;
    if (minus % 2) pref = -pref;
    LaurentPoly om = omega_combine(c, F, g2, Z, spectators);
    // each zero-mode factor carries dzeta/zeta
    LaurentPoly shifted;
    for (const auto& [e, v] : om) shifted[e - (N - i)] = v;
    laurent_add(out, shifted, pref);
  }
  return out;
}

LaurentPoly loop_equation(const SpectralCurve& c, const CorrelatorLookup& F, int g2, int a,
                          const std::vector<Label>& spectators) {
  int N = c.fiber_size();
  LaurentPoly out;
  for (int i = 1; i <= N; ++i) laurent_add(out, q_apply(c, F, g2, i, a, spectators));
  if (g2 == c.t_genus2() && spectators.empty()) laurent_add(out, LaurentPoly{{-N - 1, c.t_term(a)}});
  return out;
}

Scalar kernel_residue(const SpectralCurve& c, int a, int k0, int m) {
  // K = -dzeta0 sum_k zeta^k / zeta0^{k+1} * zeta^{N-1} / (denominator (dzeta)^{N-1})
  if (k0 < 1) throw std::invalid_argument("kernel_residue: k0 >= 1");
  if (m != -k0 - c.fiber_size()) return Scalar();
  return -c.denominator(a).inverse();
}

Scalar tr_entry(const SpectralCurve& c, const CorrelatorLookup& F, const FgnKey& target, std::size_t z0_index) {
  const Label& l = target.labels.at(z0_index);
  int a = l.color, k0 = l.k2 / 2;
  if (l.k2 % 2) throw std::invalid_argument("tr_entry: integer modes only");
  std::vector<Label> S = target.labels;
  S.erase(S.begin() + static_cast<long>(z0_index));
  int N = c.fiber_size();
  int m = -k0 - N;
  ScalarSum sum;
  for (int i = 2; i <= N; ++i) {
    LaurentPoly q = q_apply(c, F, target.g2, i, a, S);
    auto it = q.find(m);
    if (it != q.end()) sum.add(it->second);
  }
  if (target.g2 == c.t_genus2() && S.empty() && m == -N - 1) sum.add(c.t_term(a));
  return kernel_residue(c, a, k0, m) * sum.total();
}

TrResult solve_tr(const SpectralCurve& c, const TrOptions& opt) {
  c.validate();
  if (opt.max_euler < 1) throw std::invalid_argument("max Euler bound must be >= 1");
  TrResult res;
  FgnTable& table = res.table;
  table.family = c.spec.family;
  table.rank = c.spec.rank;
  table.max_euler = opt.max_euler;
  table.weight_cap = solve_weight_cap(c.spec, opt.max_euler, opt.weight_margin);
  auto labels = allowed_labels(c.spec, table.weight_cap);
  int workers = worker_count(opt.workers);
  int N = c.fiber_size();

  auto lookup_below = [&](int level) -> CorrelatorLookup {
    return [&table, level](const FgnKey& k) -> Scalar {
      if (k.euler() > level)
        throw InconsistencyError("recursion requested " + key_str(k) + " at Euler level " + std::to_string(level));
      if (k.weight2() > table.weight_cap)
        throw TruncationError("recursion needs " + key_str(k) + " beyond weight cap " +
                              std::to_string(table.weight_cap));
      return table.get(k);
    };
  };

  for (int level = 1; level <= opt.max_euler; ++level) {
    std::vector<FgnKey> targets;
    for (int n = 1; n <= level + 2; ++n) {
      int g2 = level + 2 - n;
      for_multisets(labels, n, table.weight_cap, [&](const std::vector<Label>& M) { targets.push_back({g2, M}); });
    }
    CorrelatorLookup below = lookup_below(level - 1);
    std::vector<Scalar> values(targets.size());
    std::vector<std::string> asym(targets.size());
    std::vector<int> checks(targets.size(), 0);
    parallel_for(static_cast<int>(targets.size()), workers, [&](int ti) {
      const FgnKey& t = targets[ti];
      std::size_t first = 0;
      values[ti] = tr_entry(c, below, t, 0);
      for (std::size_t j = 1; j < t.labels.size(); ++j) {
        if (t.labels[j] == t.labels[j - 1]) continue;
        Scalar v = tr_entry(c, below, t, j);
        ++checks[ti];
        if (v != values[ti] && asym[ti].empty())
          asym[ti] = key_str(t) + ": z0 = " + label_str(t.labels[first]) + " gives " + values[ti].str() +
                     ", z0 = " + label_str(t.labels[j]) + " gives " + v.str();
      }
      if (!values[ti].is_zero() && t.weight2() > c.vanishing_weight(t.g2))
        throw InconsistencyError("vanishing bound violated by " + key_str(t) + " = " + values[ti].str());
    });
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      res.symmetry_checks += checks[ti];
      if (!asym[ti].empty()) {
        if (opt.strict_symmetry) throw InconsistencyError("asymmetric correlator " + asym[ti]);
        res.asymmetries.push_back(asym[ti]);
      }
      if (!values[ti].is_zero()) table.entries[targets[ti]] = values[ti];
    }

    if (!opt.check_loop_equations) continue;
    // every (g, n) with 2g - 1 + n = level, every component
    std::vector<std::pair<int, std::vector<Label>>> eqs;
    for (int n = 0; n <= level + 1; ++n) {
      int g2 = level + 1 - n;
      if (n == 0) {
        eqs.push_back({g2, {}});
        continue;
      }
      for_multisets(labels, n, table.weight_cap - 2, [&](const std::vector<Label>& S) { eqs.push_back({g2, S}); });
    }
    CorrelatorLookup upto = lookup_below(level);
    std::vector<int> counts(eqs.size() * c.spec.rank, 0);
    parallel_for(static_cast<int>(counts.size()), workers, [&](int idx) {
      const auto& [g2, S] = eqs[idx / c.spec.rank];
      int a = idx % c.spec.rank + 1;
      LaurentPoly le = loop_equation(c, upto, g2, a, S);
      for (const auto& [e, v] : le) {
        if (e >= -N) break;
        std::ostringstream os;
        os << "loop equation fails at g = " << g2 << "/2, spectators";
        for (const auto& l : S) os << " " << label_str(l);
        os << ", component " << a << ", zeta^" << e << ": " << v.str();
        throw InconsistencyError(os.str());
      }
      counts[idx] = 1;
    });
    for (int v : counts) res.loop_checks += v;
  }
  return res;
}

}  // namespace gv
