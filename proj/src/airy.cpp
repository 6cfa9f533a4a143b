#include "gv/airy.hpp"

#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "gv/errors.hpp"
#include "gv/parallel.hpp"

namespace gv {

int FgnKey::weight2() const {
  int w = 0;
  for (const auto& l : labels) w += l.k2;
  return w;
}

std::string key_str(const FgnKey& k) {
  std::ostringstream os;
  os << "g=" << k.g2 << "/2 [";
  for (std::size_t i = 0; i < k.labels.size(); ++i) os << (i ? " " : "") << label_str(k.labels[i]);
  os << "]";
  return os.str();
}

Scalar FgnTable::get(const FgnKey& k) const {
  auto it = entries.find(k);
  return it == entries.end() ? Scalar() : it->second;
}

ShiftInfo shift_info(const AlgebraSpec& spec) {
  int r = spec.rank;
  switch (spec.family) {
    case Family::A: return {{r, false}, 2, r, 2};
    case Family::B: return {{2 * r - 1, false}, 1, 2 * r - 1, 2};
    case Family::C: return {{r + 1, true}, 1, r + 1, 1};
    case Family::D: return {{2 * r - 2, false}, 2, 2 * r - 2, 2};
  }
  return {};
}

int label_of_mode(const AlgebraSpec& spec, int m2) { return spec.family == Family::B ? 2 * m2 : m2; }

std::vector<Label> allowed_labels(const AlgebraSpec& spec, int max_k2) {
  std::vector<Label> out;
  for (int a = 1; a <= spec.num_colors(); ++a) {
    bool half = spec.family == Family::C && a == spec.rank + 1;
    for (int k2 = half ? 1 : 2; k2 <= max_k2; k2 += 2) out.push_back({a, k2});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int vanishing_weight(const AlgebraSpec& spec, int g2) {
  ShiftInfo s = shift_info(spec);
  if (s.hbar2 <= 0) throw std::invalid_argument("no vanishing bound for this rank");
  return g2 * s.label_w / s.hbar2;
}

namespace {

NOPoly single(const Label& l) {
  NOPoly p;
  p.add(NOKey{0, {}, {l}}, Scalar(1));
  return p;
}

Scalar prod_others(const AlgebraSpec& spec, int a, const std::function<Scalar(const Scalar&, const Scalar&)>& f) {
  Scalar p(1);
  for (int b = 0; b < spec.rank; ++b)
    if (b != a) p *= f(spec.Q[a], spec.Q[b]);
  return p;
}

std::vector<Scalar> others_squared(const AlgebraSpec& spec, int a) {
  std::vector<Scalar> v;
  for (int b = 0; b < spec.rank; ++b)
    if (b != a) v.push_back(spec.Q[b] * spec.Q[b]);
  return v;
}

Scalar pow2(int e) { return Scalar(mpz_class(mpz_class(1) << e)); }

std::vector<NFComponent> combination(const AlgebraSpec& spec, const Label& l) {
  int r = spec.rank, a = l.color - 1;
  std::vector<NFComponent> c;
  switch (spec.family) {
    case Family::A: {
      Scalar den = prod_others(spec, a, [](const Scalar& qa, const Scalar& qb) { return qb - qa; });
      for (int i = 1; i <= r; ++i) c.push_back({{i, false}, l.k2, (-spec.Q[a]).pow(r - i) / den});
      break;
    }
    case Family::B: {
      Scalar den = prod_others(spec, a, [](const Scalar& qa, const Scalar& qb) { return qa * qa - qb * qb; });
      int m2 = l.k2 / 2;
      for (int i = 1; i <= r; ++i) {
        if (m2 % 2)
          c.push_back({{2 * i - 1, false}, m2, pow2(2 * i - 2) * spec.Q[a].pow(2 * r - 2 * i) / den});
        else
          c.push_back({{2 * i, false}, m2, -pow2(2 * i - 1) * spec.Q[a].pow(2 * r - 2 * i - 1) / den});
      }
      break;
    }
    case Family::C: {
      if (l.color == r + 1) {
        Scalar p(1);
        for (const auto& q : spec.Q) p *= q;
        c.push_back({{r + 1, true}, l.k2, p.inverse()});
        break;
      }
      Scalar den = spec.Q[a] * prod_others(spec, a, [](const Scalar& qa, const Scalar& qb) { return qa * qa - qb * qb; });
      auto sq = others_squared(spec, a);
      for (int d = 2; d <= 2 * r; d += 2) {
        int j = r - d / 2;
        Scalar sign((j % 2) ? -1 : 1);
        c.push_back({{d, false}, l.k2, sign * elementary(sq, j) / (Scalar(d) * den)});
      }
      break;
    }
    case Family::D: {
      Scalar pre = spec.Q[a] / prod_others(spec, a, [](const Scalar& qa, const Scalar& qb) { return qa * qa - qb * qb; });
      auto sq = others_squared(spec, a);
      Scalar p(1);
      for (const auto& q : spec.Q) p *= q;
      // first row of the inverse Vandermonde matrix multiplies the colour product
      Scalar s1((r - 1) % 2 ? -1 : 1);
      c.push_back({{r, true}, l.k2, pre * s1 * elementary(sq, r - 1) / p});
      for (int d = 2; d <= 2 * r - 2; d += 2) {
        int j = r - 1 - d / 2;
        Scalar sign(j % 2 ? -1 : 1);
        c.push_back({{d, false}, l.k2, pre * sign * elementary(sq, j) / Scalar(d)});
      }
      break;
    }
  }
  return c;
}

// Removes `sub` from sorted multiset `from`; false if not contained.
bool multiset_subtract(const std::vector<Label>& from, const std::vector<Label>& sub, std::vector<Label>& out) {
  out.clear();
  std::size_t j = 0;
  for (const auto& l : from) {
    if (j < sub.size() && sub[j] == l)
      ++j;
    else
      out.push_back(l);
  }
  return j == sub.size();
}

// Restricted growth strings: all set partitions of {0..n-1}.
void for_set_partitions(int n, const std::function<void(const std::vector<std::vector<int>>&)>& cb) {
  std::vector<int> rg(n, 0);
  std::function<void(int, int)> rec = [&](int i, int nb) {
    if (i == n) {
      std::vector<std::vector<int>> blocks(nb);
      for (int k = 0; k < n; ++k) blocks[rg[k]].push_back(k);
      cb(blocks);
      return;
    }
    for (int b = 0; b <= nb; ++b) {
      rg[i] = b;
      rec(i + 1, std::max(nb, b + 1));
    }
  };
  if (n == 0) {
    cb({});
    return;
  }
  rec(0, 0);
}

// All compositions of `total` into `parts` nonnegative pieces.
void for_compositions(int total, int parts, const std::function<void(const std::vector<int>&)>& cb) {
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      c[i] = left;
      cb(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  if (parts == 0) {
    if (total == 0) cb(c);
    return;
  }
  rec(0, total);
}

}  // namespace

NormalForm build_normal_form(const AlgebraSpec& spec, const Scalar& T, int max_k2) {
  spec.validate();
  NormalForm nf;
  nf.spec = spec;
  nf.mod = make_module(spec);
  nf.T = T;
  nf.max_k2 = max_k2;
  ShiftInfo si = shift_info(spec);
  if (si.hbar2 < 2)
    throw std::invalid_argument("rank too small: the Whittaker shift hbar^{" + std::to_string(si.hbar2) +
                                "/2} T would have degree < 2");
  nf.shift_hbar2 = si.hbar2;
  std::map<std::pair<GenId, int>, NOPoly> cache;
  for (const auto& l : allowed_labels(spec, max_k2)) {
    auto combo = combination(spec, l);
    NOPoly H;
    for (const auto& c : combo) {
      auto key = std::make_pair(c.gen, c.m2);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, w_mode(spec, nf.mod, c.gen, c.m2, max_k2)).first;
      H.add(it->second, c.coef);
      if (c.gen == si.gen && c.m2 == si.m2) nf.shift[l] = c.coef * T;
    }
    if (!project_degree(H, 0).is_zero() || !(project_degree(H, 1) == single(l)))
      throw InconsistencyError("degree-one part of H" + label_str(l) + " is not J" + label_str(l) + ": " +
                               project_degree(H, 1).str());
    nf.H[l] = std::move(H);
    nf.combo[l] = std::move(combo);
  }
  return nf;
}

Scalar conjugated_coefficient(const NOPoly& op, const FgnLookup& lookup, int g2, const std::vector<Label>& R) {
  Scalar total;
  std::vector<Label> rest;
  std::vector<Label> cre;
  for (const auto& [key, c] : op.terms()) {
    cre.clear();
    for (const auto& l : key.cre) cre.push_back({l.color, -l.k2});
    std::sort(cre.begin(), cre.end());
    if (!multiset_subtract(R, cre, rest)) continue;
    mpq_class cf = 1;
    for (const auto& l : key.cre) cf *= mpq_class(-l.k2, 2);
    if (key.ann.empty()) {
      if (rest.empty() && key.hbar2 == g2) total += c * Scalar(cf);
      continue;
    }
    // group the remaining creation variables
    std::vector<std::pair<Label, int>> groups;
    for (const auto& l : rest) {
      if (!groups.empty() && groups.back().first == l)
        ++groups.back().second;
      else
        groups.push_back({l, 1});
    }
    int nann = static_cast<int>(key.ann.size());
    for_set_partitions(nann, [&](const std::vector<std::vector<int>>& blocks) {
      int p = static_cast<int>(blocks.size());
      int budget = g2 - key.hbar2 - 2 * nann + 2 * p;
      if (budget < 0) return;
      // distribute each group's multiplicity among blocks
      std::vector<std::vector<int>> dist(groups.size());
      std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (gi < groups.size()) {
          for_compositions(groups[gi].second, p, [&](const std::vector<int>& comp) {
            dist[gi] = comp;
            rec(gi + 1);
          });
          return;
        }
        std::vector<std::vector<Label>> keys(p);
        std::vector<mpz_class> auts(p, 1);
        for (int b = 0; b < p; ++b) {
          for (int idx : blocks[b]) keys[b].push_back(key.ann[idx]);
          for (std::size_t gidx = 0; gidx < groups.size(); ++gidx) {
            int m = dist[gidx][b];
            for (int t = 0; t < m; ++t) keys[b].push_back(groups[gidx].first);
            for (int t = 2; t <= m; ++t) auts[b] *= t;
          }
          std::sort(keys[b].begin(), keys[b].end());
        }
        for_compositions(budget, p, [&](const std::vector<int>& gs) {
          for (int b = 0; b < p; ++b)
            if (gs[b] - 2 + static_cast<int>(keys[b].size()) <= 0) return;
          Scalar prod = c * Scalar(cf);
          for (int b = 0; b < p; ++b) {
            Scalar v = lookup(FgnKey{gs[b], keys[b]});
            if (v.is_zero()) return;
            prod *= v;
            if (auts[b] != 1) prod /= Scalar(auts[b]);
          }
          total += prod;
        });
      };
      rec(0);
    });
  }
  return total;
}

int solve_weight_cap(const AlgebraSpec& spec, int max_euler, int weight_margin) {
  ShiftInfo si = shift_info(spec);
  if (weight_margin < 0) weight_margin = si.label_w;
  // the largest genus at Euler level max_euler has n = 1
  return vanishing_weight(spec, max_euler + 1) + weight_margin;
}

FgnTable solve_fgn(const NormalForm& nf, const SolveOptions& opt) {
  if (opt.max_euler < 1) throw std::invalid_argument("max Euler bound must be >= 1");
  const AlgebraSpec& spec = nf.spec;
  FgnTable table;
  table.family = spec.family;
  table.rank = spec.rank;
  table.max_euler = opt.max_euler;
  table.weight_cap = solve_weight_cap(spec, opt.max_euler, opt.weight_margin);
  if (table.weight_cap > nf.max_k2)
    throw TruncationError("normal form built up to k2 = " + std::to_string(nf.max_k2) + ", solver needs " +
                          std::to_string(table.weight_cap));
  auto labels = allowed_labels(spec, table.weight_cap);
  int workers = worker_count(opt.workers);

  for (int level = 1; level <= opt.max_euler; ++level) {
    std::vector<FgnKey> targets;
    for (int n = 1; n <= level + 2; ++n) {
      int g2 = level + 2 - n;
      for_multisets(labels, n, table.weight_cap, [&](const std::vector<Label>& M) { targets.push_back({g2, M}); });
    }
    if (opt.reverse_schedule) std::reverse(targets.begin(), targets.end());

    auto shift_term = [&](const Label& l, const FgnKey& t, const std::vector<Label>& R) {
      if (t.g2 != nf.shift_hbar2 || !R.empty()) return Scalar();
      auto it = nf.shift.find(l);
      return it == nf.shift.end() ? Scalar() : it->second;
    };

    std::vector<Scalar> values(targets.size());
    parallel_for(static_cast<int>(targets.size()), workers, [&](int ti) {
      const FgnKey& t = targets[ti];
      std::size_t pick = opt.reverse_schedule ? t.labels.size() - 1 : 0;
      Label l = t.labels[pick];
      std::vector<Label> R = t.labels;
      R.erase(R.begin() + static_cast<long>(pick));
      FgnLookup lookup = [&](const FgnKey& k) -> Scalar {
        if (k == t) return Scalar();
        if (k.euler() >= level)
          throw InconsistencyError("constraint for " + key_str(t) + " is not triangular: needs " + key_str(k));
        return table.get(k);
      };
      Scalar s = conjugated_coefficient(nf.H.at(l), lookup, t.g2, R);
      Scalar v = (shift_term(l, t, R) - s) * Scalar(aut(R));
      values[ti] = v;
    });
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (!values[i].is_zero()) table.entries[targets[i]] = values[i];

    if (!opt.check_all) continue;
    // every other constraint at this level must now hold identically
    FgnLookup full = [&](const FgnKey& k) -> Scalar {
      if (k.euler() > level) throw InconsistencyError("constraint check reached beyond level: " + key_str(k));
      return table.get(k);
    };
    parallel_for(static_cast<int>(targets.size()), workers, [&](int ti) {
      const FgnKey& t = targets[ti];
      for (std::size_t i = 0; i < t.labels.size(); ++i) {
        if (i > 0 && t.labels[i] == t.labels[i - 1]) continue;
        std::vector<Label> R = t.labels;
        R.erase(R.begin() + static_cast<long>(i));
        Scalar res = conjugated_coefficient(nf.H.at(t.labels[i]), full, t.g2, R) - shift_term(t.labels[i], t, R);
        if (!res.is_zero())
          throw InconsistencyError("constraint H" + label_str(t.labels[i]) + " disagrees at " + key_str(t) +
                                   " (family " + family_name(spec.family) + ", r = " + std::to_string(spec.rank) +
                                   "): residual " + res.str());
      }
    });
  }
  return table;
}

std::vector<ResidualEntry> whittaker_residual(const NormalForm& nf, const FgnTable& table, const GenId& gen, int m2) {
  const AlgebraSpec& spec = nf.spec;
  int lw = label_of_mode(spec, m2);
  if (lw > table.weight_cap)
    throw TruncationError("mode " + gen_str(gen) + "_" + std::to_string(m2) + "/2 lies beyond the table's weight cap " +
                          std::to_string(table.weight_cap));
  NOPoly op = w_mode(spec, nf.mod, gen, m2, table.weight_cap);
  ShiftInfo si = shift_info(spec);
  bool shifted = gen == si.gen && m2 == si.m2;
  FgnLookup lookup = [&](const FgnKey& k) -> Scalar {
    if (k.euler() > table.max_euler || k.weight2() > table.weight_cap)
      throw TruncationError("residual needs " + key_str(k) + " beyond the solved table");
    return table.get(k);
  };
  auto labels = allowed_labels(spec, table.weight_cap);
  std::vector<ResidualEntry> out;
  for (int n = 0; n <= table.max_euler + 1; ++n) {
    for (int g2 = 0; g2 - 1 + n <= table.max_euler; ++g2) {
      for_multisets(labels, n, table.weight_cap - lw, [&](const std::vector<Label>& R) {
        Scalar v = conjugated_coefficient(op, lookup, g2, R);
        if (shifted && R.empty() && g2 == si.hbar2) v -= nf.T;
        if (!v.is_zero()) out.push_back({g2, R, v});
      });
    }
  }
  return out;
}

std::vector<std::string> lemma_checks(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table) {
  std::vector<std::string> bad;
  int r = spec.rank;
  for (const auto& [k, v] : table.entries) {
    int sk = k.weight2() / 2;
    Scalar P = v / T.pow(sk);
    if (P.depends_on(TVar)) bad.push_back(key_str(k) + ": not homogeneous of degree " + std::to_string(sk) + " in T");
    if (P.den().degree(Alpha0) > 0 || P.num().degree(Alpha0) > k.g2)
      bad.push_back(key_str(k) + ": not a polynomial of degree <= 2g in alpha0");
    if (r * sk > k.g2) bad.push_back(key_str(k) + ": nonzero although r*sum(k) > 2g");
  }
  for (int a = 1; a <= r; ++a) {
    Scalar expect = T;
    for (int b = 1; b <= r; ++b)
      if (b != a) expect /= spec.Q[b - 1] - spec.Q[a - 1];
    for (int g2 = 1; g2 <= table.max_euler + 1; ++g2) {
      // away from the self-dual level the single-mode hbar^{1/2} alpha0 J terms of
      // H feed F_{g,1}[a;1] for g > r/2, so only g = r/2 is pinned there
      if (g2 != r && !spec.alpha0.is_zero()) continue;
      Scalar got = table.get({g2, {{a, 2}}});
      Scalar want = g2 == r ? expect : Scalar();
      if (got != want)
        bad.push_back("F_{" + std::to_string(g2) + "/2,1}[" + std::to_string(a) + ";1] = " + got.str() +
                      ", expected " + want.str());
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// brute-force oracle

namespace {

using ZKey = std::pair<int, Monomial>;  // (hbar2, x-monomial)
using ZPoly = std::map<ZKey, Scalar>;

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial m;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  return m;
}

int weight_of(const Monomial& m) {
  int w = 0;
  for (const auto& l : m) w += l.k2;
  return w;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, int max_deg, int max_w2) {
  ZPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      Monomial m = merge(ka.second, kb.second);
      int h = ka.first + kb.first;
      if (h + static_cast<int>(m.size()) > max_deg || weight_of(m) > max_w2) continue;
      Scalar& s = out[{h, m}];
      s += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

std::map<FgnKey, Scalar> brute_force_fgn(const AlgebraSpec& spec, const Scalar& T, int max_deg, int max_weight2) {
  FockModule mod = make_module(spec);
  auto labels = allowed_labels(spec, max_weight2);
  ShiftInfo si = shift_info(spec);

  // unknowns z(h, M): coefficient of hbar^{h/2} x^M in Z, with h + |M| <= max_deg
  std::vector<ZKey> unknowns;
  std::map<ZKey, int> index;
  for (int n = 1; n <= max_deg; ++n)
    for_multisets(labels, n, max_weight2, [&](const std::vector<Label>& M) {
      for (int h = 0; h + n <= max_deg; ++h) {
        index[{h, M}] = static_cast<int>(unknowns.size());
        unknowns.push_back({h, M});
      }
    });
  const int kOne = -1;  // the fixed vacuum coefficient

  struct Row {
    std::map<int, Scalar> c;
    Scalar constant;
  };
  using RowKey = std::tuple<GenId, int, int, Monomial>;
  std::map<RowKey, Row> rows;
  auto add_to = [&](Row& row, int var, const Scalar& v) {
    if (var == kOne)
      row.constant += v;
    else
      row.c[var] += v;
  };

  std::vector<std::pair<GenId, int>> modes;
  for (const auto& g : generators(spec)) {
    bool half = half_integer_modes(spec, g);
    for (int m2 = half ? 1 : 2; label_of_mode(spec, m2) <= max_weight2; m2 += 2) modes.push_back({g, m2});
  }
  for (const auto& [g, m2] : modes) {
    NOPoly op = w_mode(spec, mod, g, m2, max_weight2);
    bool shifted = g == si.gen && m2 == si.m2;
    int lw = label_of_mode(spec, m2);
    auto apply_to = [&](int var, int h, const Monomial& M) {
      FockState in = FockState::monomial(M, [&] {
        GradedSeries s;
        s.add(h, 0, Scalar(1));
        return s;
      }());
      FockState out = apply(mod, op, in);
      for (const auto& [m, series] : out.terms())
        for (const auto& [hk, c] : series.coeffs()) {
          if (hk.first + static_cast<int>(m.size()) > max_deg + 1 || weight_of(m) + lw > max_weight2) continue;
          add_to(rows[{g, m2, hk.first, m}], var, c);
        }
      if (shifted && h + si.hbar2 + static_cast<int>(M.size()) <= max_deg + 1 && weight_of(M) + lw <= max_weight2)
        add_to(rows[{g, m2, h + si.hbar2, M}], var, -T);
    };
    apply_to(kOne, 0, {});
    for (std::size_t u = 0; u < unknowns.size(); ++u) apply_to(static_cast<int>(u), unknowns[u].first, unknowns[u].second);
  }

  // Gaussian elimination
  std::vector<std::pair<int, Row>> pivots;
  std::map<int, std::size_t> pivot_of;
  for (auto& [rk, row0] : rows) {
    Row row = row0;
    for (auto it = row.c.begin(); it != row.c.end();) it = it->second.is_zero() ? row.c.erase(it) : std::next(it);
    for (;;) {
      int hit = -1;
      for (const auto& [v, c] : row.c)
        if (pivot_of.count(v)) {
          hit = v;
          break;
        }
      if (hit < 0) break;
      Scalar f = row.c[hit];
      const Row& pr = pivots[pivot_of[hit]].second;
      for (const auto& [v, c] : pr.c) {
        Scalar& s = row.c[v];
        s -= f * c;
        if (s.is_zero()) row.c.erase(v);
      }
      row.constant -= f * pr.constant;
    }
    if (row.c.empty()) {
      if (!row.constant.is_zero())
        throw InconsistencyError("brute-force system is inconsistent at " + gen_str(std::get<0>(rk)) + "_" +
                                 std::to_string(std::get<1>(rk)) + "/2, hbar2 " + std::to_string(std::get<2>(rk)) +
                                 ", x-degree " + std::to_string(std::get<3>(rk).size()) + ": " + row.constant.str());
      continue;
    }
    int pv = row.c.rbegin()->first;
    Scalar inv = row.c[pv].inverse();
    for (auto& [v, c] : row.c) c *= inv;
    row.constant *= inv;
    pivot_of[pv] = pivots.size();
    pivots.push_back({pv, row});
  }
  if (pivots.size() != unknowns.size())
    throw InconsistencyError("brute-force system is underdetermined (" + std::to_string(pivots.size()) + " of " +
                             std::to_string(unknowns.size()) + ")");
  std::vector<Scalar> val(unknowns.size());
  for (std::size_t i = pivots.size(); i-- > 0;) {
    const auto& [pv, row] = pivots[i];
    Scalar s = -row.constant;
    for (const auto& [v, c] : row.c)
      if (v != pv) s -= c * val[v];
    val[pv] = s;
  }

  ZPoly U;
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    if (!val[u].is_zero()) U[unknowns[u]] = val[u];
  ZPoly F, power = U;
  for (int j = 1; j <= max_deg && !power.empty(); ++j) {
    Scalar f = Scalar(mpq_class((j % 2) ? 1 : -1, j));
    for (const auto& [k, c] : power) {
      Scalar& s = F[k];
      s += f * c;
    }
    power = zmul(power, U, max_deg, max_weight2);
  }
  std::map<FgnKey, Scalar> out;
  for (const auto& [k, c] : F) {
    if (c.is_zero()) continue;
    FgnKey key{k.first + 2, k.second};
    out[key] = c * Scalar(aut(k.second));
  }
  return out;
}

Scalar denominator_ansatz(Family f, int r, int max_euler) {
  Scalar d(1);
  for (int a = 1; a <= r; ++a) {
    Scalar qa = Scalar::var(Q1 + a - 1);
    if (f != Family::A) d *= qa;
    for (int b = a + 1; b <= r; ++b) {
      Scalar qb = Scalar::var(Q1 + b - 1);
      d *= f == Family::A ? qb - qa : qb * qb - qa * qa;
    }
  }
  return d.pow(max_euler);
}

namespace {

int total_degree(const Poly& p, int nvars) {
  int best = 0;
  for (const auto& t : p.terms()) {
    int d = 0;
    for (int v = 0; v < nvars; ++v) d += mono_exp(t.m, v);
    best = std::max(best, d);
  }
  return best;
}

}  // namespace

Resymbolized resymbolize(Family f, int r, bool generic, int max_euler, const std::vector<FgnKey>& keys,
                         int extra_checks) {
  if (r > kMaxQ) throw std::invalid_argument("symbolic Q needs r <= 4");
  const Scalar T = Scalar::var(TVar);
  Scalar D = denominator_ansatz(f, r, max_euler);
  int deg = total_degree(D.num(), r);

  auto solve_at = [&](const std::vector<mpq_class>& q) {
    std::vector<Scalar> qs(q.begin(), q.end());
    AlgebraSpec spec = AlgebraSpec::with_q(f, r, qs, generic);
    NormalForm nf = build_normal_form(spec, T, solve_weight_cap(spec, max_euler, -1));
    SolveOptions o;
    o.max_euler = max_euler;
    o.workers = 1;
    return solve_fgn(nf, o);
  };
  auto subs_q = [&](Scalar s, const std::vector<mpq_class>& q) {
    for (int a = 0; a < r; ++a) s = s.subs(Q1 + a, q[a]);
    return s;
  };

  // distinct positive nodes per colour: never resonant (Q_a != +-Q_b, Q_a != 0)
  std::vector<int> vars;
  std::vector<std::vector<mpq_class>> nodes(r);
  for (int a = 0; a < r; ++a) {
    vars.push_back(Q1 + a);
    for (int i = 0; i <= deg; ++i) nodes[a].push_back(mpq_class(100 * (a + 1) + 3 * i + 1, 2));
  }
  std::vector<std::vector<mpq_class>> points;
  std::vector<std::size_t> idx(r, 0);
  for (;;) {
    std::vector<mpq_class> p(r);
    for (int a = 0; a < r; ++a) p[a] = nodes[a][idx[a]];
    points.push_back(p);
    int a = 0;
    while (a < r && ++idx[a] == nodes[a].size()) idx[a++] = 0;
    if (a == r) break;
  }
  std::vector<FgnTable> tables(points.size());
  parallel_for(static_cast<int>(points.size()), worker_count(0), [&](int i) { tables[i] = solve_at(points[i]); });
  std::map<std::vector<mpq_class>, const FgnTable*> at;
  for (std::size_t i = 0; i < points.size(); ++i) at[points[i]] = &tables[i];

  Resymbolized out;
  out.specializations = static_cast<int>(points.size());
  for (const auto& k : keys) {
    Scalar N = interpolate_grid(vars, nodes, [&](const std::vector<mpq_class>& p) {
      return at.at(p)->get(k) * subs_q(D, p);
    });
    out.entries[k] = N / D;
  }
  for (int c = 0; c < extra_checks; ++c) {
    std::vector<mpq_class> p(r);
    for (int a = 0; a < r; ++a) p[a] = mpq_class(7 * (a + 1) * (c + 2) + 1, 3 * (c + a) + 5);
    FgnTable t = solve_at(p);
    ++out.specializations;
    for (const auto& k : keys) {
      Scalar want = t.get(k), got = subs_q(out.entries[k], p);
      if (want != got) out.check_failures.push_back(key_str(k) + " at check point " + std::to_string(c) + ": solved " +
                                                    want.str() + ", reconstructed " + got.str());
    }
  }
  return out;
}

}  // namespace gv
