#include "gv/nekrasov.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gv/errors.hpp"

namespace gv {

namespace {

int sum_k(const std::vector<Label>& ls) {
  int w = 0;
  for (const auto& l : ls) w += l.k2;
  return w / 2;
}

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

GradedSeries one_slice(int lambda) {
  GradedSeries s;
  if (lambda == 0) s.add(0, 0, Scalar(1));
  return s;
}

}  // namespace

// ---------------------------------------------------------------- Phi

Scalar PhiTable::get(int h2, const std::vector<Label>& labels) const {
  if (h2 > max_h2 || sum_k(labels) > max_d)
    throw TruncationError("Phi_{" + std::to_string(h2) + "/2," + std::to_string(labels.size()) +
                          "} outside the computed window (2h <= " + std::to_string(max_h2) +
                          ", sum k <= " + std::to_string(max_d) + ")");
  if (h2 < 0) return Scalar();
  auto it = entries.find(FgnKey{h2, labels});
  return it == entries.end() ? Scalar() : it->second;
}

int phi_required_euler(int rank, int max_d, int max_h2) {
  // g2 = h2 + r sum k and n <= sum k.
  return max_h2 + (rank + 1) * max_d - 2;
}

PhiTable phi_from_fgn(const FgnTable& table, int max_d, int max_h2) {
  if (table.family != Family::A) throw std::invalid_argument("Phi: A-type tables only");
  int need = phi_required_euler(table.rank, max_d, max_h2);
  if (max_d > 0 && (table.max_euler < need || table.weight_cap < 2 * max_d))
    throw TruncationError("Phi up to sum k = " + std::to_string(max_d) + ", 2h = " + std::to_string(max_h2) +
                          " needs F solved to max_euler >= " + std::to_string(need) + " with weight cap >= " +
                          std::to_string(2 * max_d) + " (have " + std::to_string(table.max_euler) + ", " +
                          std::to_string(table.weight_cap) + ")");
  PhiTable phi;
  phi.rank = table.rank;
  phi.max_d = max_d;
  phi.max_h2 = max_h2;
  for (const auto& [k, v] : table.entries) {
    int d = k.weight2() / 2;
    if (d > max_d) continue;
    int h2 = k.g2 - table.rank * d;
    if (h2 < 0) throw InconsistencyError("nonzero " + key_str(k) + " below the vanishing bound");
    if (h2 > max_h2) continue;
    phi.entries[FgnKey{h2, k.labels}] = v.subs(TVar, mpq_class(1));
  }
  return phi;
}

// ---------------------------------------------------------------- graphs

int TwoLevelGraph::degree() const {
  int d = 0;
  for (const auto& e : edges) d += e.label.k2;
  return d / 2;
}

bool TwoLevelGraph::connected() const {
  int ni = static_cast<int>(in_h2.size()), n = num_vertices();
  if (n == 0) return false;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : edges) parent[find(e.in)] = find(ni + e.out);
  for (int i = 1; i < n; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

bool TwoLevelGraph::simple() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges)
    if (!seen.insert({e.in, e.out}).second) return false;
  return true;
}

int TwoLevelGraph::hbar2() const {
  int h = 2 * (betti() - 1);
  for (int x : in_h2) h += x;
  for (int x : out_h2) h += x;
  return h;
}

void TwoLevelGraph::validate() const {
  if (in_h2.empty() || out_h2.empty()) throw std::invalid_argument("two-level graph needs vertices on both levels");
  if (edges.empty()) throw std::invalid_argument("two-level graph without edges");
  std::vector<int> di(in_h2.size()), dout(out_h2.size());
  for (const auto& e : edges) {
    if (e.in < 0 || e.in >= static_cast<int>(in_h2.size()) || e.out < 0 || e.out >= static_cast<int>(out_h2.size()))
      throw std::invalid_argument("edge endpoint out of range");
    if (e.label.k2 <= 0 || e.label.k2 % 2 != 0 || e.label.color < 1)
      throw std::invalid_argument("edge label must be (a, k) with k a positive integer");
    ++di[e.in];
    ++dout[e.out];
  }
  for (int x : in_h2)
    if (x < 0) throw std::invalid_argument("negative vertex decoration");
  for (int x : out_h2)
    if (x < 0) throw std::invalid_argument("negative vertex decoration");
  for (int x : di)
    if (x == 0) throw std::invalid_argument("isolated in-vertex");
  for (int x : dout)
    if (x == 0) throw std::invalid_argument("isolated out-vertex");
}

std::vector<Label> TwoLevelGraph::in_labels(int v) const {
  std::vector<Label> r;
  for (const auto& e : edges)
    if (e.in == v) r.push_back(e.label);
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<Label> TwoLevelGraph::out_labels(int v) const {
  std::vector<Label> r;
  for (const auto& e : edges)
    if (e.out == v) r.push_back(e.label);
  std::sort(r.begin(), r.end());
  return r;
}

namespace {

// Encoding of the graph after relabelling in-vertex i -> pi[i], out-vertex j -> po[j].
std::vector<int> encode(const TwoLevelGraph& g, const std::vector<int>& pi, const std::vector<int>& po) {
  std::vector<int> hi(g.in_h2.size()), ho(g.out_h2.size());
  for (std::size_t i = 0; i < pi.size(); ++i) hi[pi[i]] = g.in_h2[i];
  for (std::size_t j = 0; j < po.size(); ++j) ho[po[j]] = g.out_h2[j];
  std::vector<std::array<int, 4>> es;
  for (const auto& e : g.edges) es.push_back({pi[e.in], po[e.out], e.label.color, e.label.k2});
  std::sort(es.begin(), es.end());
  std::vector<int> code{static_cast<int>(hi.size()), static_cast<int>(ho.size())};
  code.insert(code.end(), hi.begin(), hi.end());
  code.insert(code.end(), ho.begin(), ho.end());
  for (const auto& e : es) code.insert(code.end(), e.begin(), e.end());
  return code;
}

template <class F>
void for_relabellings(const TwoLevelGraph& g, F&& f) {
  std::vector<int> pi(g.in_h2.size()), po(g.out_h2.size());
  std::iota(pi.begin(), pi.end(), 0);
  do {
    std::iota(po.begin(), po.end(), 0);
    do f(pi, po);
    while (std::next_permutation(po.begin(), po.end()));
  } while (std::next_permutation(pi.begin(), pi.end()));
}

}  // namespace

std::string TwoLevelGraph::canonical() const {
  std::vector<int> best;
  bool first = true;
  for_relabellings(*this, [&](const std::vector<int>& pi, const std::vector<int>& po) {
    auto c = encode(*this, pi, po);
    if (first || c < best) best = std::move(c);
    first = false;
  });
  std::ostringstream os;
  for (std::size_t i = 0; i < best.size(); ++i) os << (i ? "," : "") << best[i];
  return os.str();
}

mpz_class TwoLevelGraph::automorphisms() const {
  std::vector<int> id_i(in_h2.size()), id_o(out_h2.size());
  std::iota(id_i.begin(), id_i.end(), 0);
  std::iota(id_o.begin(), id_o.end(), 0);
  auto self = encode(*this, id_i, id_o);
  mpz_class n = 0;
  for_relabellings(*this, [&](const std::vector<int>& pi, const std::vector<int>& po) {
    if (encode(*this, pi, po) == self) ++n;
  });
  std::map<GraphEdge, int> mult;
  for (const auto& e : edges) ++mult[e];
  for (const auto& [e, m] : mult) n *= factorial(m);
  return n;
}

mpz_class TwoLevelGraph::labelled_symmetry_factor() const {
  mpz_class s = factorial(static_cast<int>(in_h2.size())) * factorial(static_cast<int>(out_h2.size()));
  std::map<std::pair<int, int>, int> mult;
  for (const auto& e : edges) ++mult[{e.in, e.out}];
  for (const auto& [p, m] : mult) s *= factorial(m);
  return s;
}

std::string TwoLevelGraph::str() const {
  std::ostringstream os;
  os << "in[";
  for (std::size_t i = 0; i < in_h2.size(); ++i) os << (i ? " " : "") << "h2=" << in_h2[i];
  os << "] out[";
  for (std::size_t i = 0; i < out_h2.size(); ++i) os << (i ? " " : "") << "h2=" << out_h2[i];
  os << "] edges{";
  for (std::size_t i = 0; i < edges.size(); ++i)
    os << (i ? " " : "") << edges[i].in << "-" << edges[i].out << ":" << label_str(edges[i].label);
  os << "}";
  return os.str();
}

namespace {

// All decorations (2h per vertex) with total <= budget.
template <class F>
void for_decorations(int n, int budget, std::vector<int>& cur, F&& f) {
  if (static_cast<int>(cur.size()) == n) {
    f(cur);
    return;
  }
  for (int h = 0; h <= budget; ++h) {
    cur.push_back(h);
    for_decorations(n, budget - h, cur, f);
    cur.pop_back();
  }
}

std::vector<Label> edge_labels(int num_colors, int max_d) {
  std::vector<Label> ls;
  for (int k = 1; k <= max_d; ++k)
    for (int a = 1; a <= num_colors; ++a) ls.push_back({a, 2 * k});
  return ls;
}

}  // namespace

std::vector<TwoLevelGraph> enumerate_graphs(int num_colors, int max_d, int max_h2) {
  if (num_colors < 1 || max_d < 0 || max_h2 < 0) throw std::invalid_argument("enumerate_graphs: bad bounds");
  const auto labels = edge_labels(num_colors, max_d);
  std::set<std::string> seen;
  std::vector<TwoLevelGraph> out;

  for (int E = 1; E <= max_d; ++E) {
    // nondecreasing label sequences; the endpoint assignment supplies all orders
    std::vector<int> seq;
    std::function<void(int, int)> pick = [&](int start, int left) {
      if (static_cast<int>(seq.size()) == E) {
        for (int ni = 1; ni <= E; ++ni)
          for (int no = 1; no <= E && ni + no <= E + 1; ++no) {
            int b1 = E - ni - no + 1;
            if (2 * b1 > max_h2) continue;
            long pairs = static_cast<long>(ni) * no, total = 1;
            for (int i = 0; i < E; ++i) total *= pairs;
            for (long code = 0; code < total; ++code) {
              TwoLevelGraph g;
              g.in_h2.assign(ni, 0);
              g.out_h2.assign(no, 0);
              long c = code;
              for (int i = 0; i < E; ++i) {
                int p = static_cast<int>(c % pairs);
                c /= pairs;
                g.edges.push_back({p / no, p % no, labels[seq[i]]});
              }
              std::vector<int> di(ni), dout(no);
              for (const auto& e : g.edges) ++di[e.in], ++dout[e.out];
              if (std::count(di.begin(), di.end(), 0) || std::count(dout.begin(), dout.end(), 0)) continue;
              if (!g.connected()) continue;
              std::vector<int> cur;
              for_decorations(ni + no, max_h2 - 2 * b1, cur, [&](const std::vector<int>& h) {
                TwoLevelGraph d = g;
                std::copy(h.begin(), h.begin() + ni, d.in_h2.begin());
                std::copy(h.begin() + ni, h.end(), d.out_h2.begin());
                if (seen.insert(d.canonical()).second) out.push_back(std::move(d));
              });
            }
          }
        return;
      }
      for (int i = start; i < static_cast<int>(labels.size()); ++i) {
        int k = labels[i].k2 / 2;
        if (k > left) continue;
        seq.push_back(i);
        pick(i, left - k);
        seq.pop_back();
      }
    };
    pick(0, max_d);
  }
  for (const auto& g : out)
    if (g.betti() == 0 && !g.simple()) throw std::logic_error("tree with a multiple edge: " + g.str());
  std::stable_sort(out.begin(), out.end(), [](const TwoLevelGraph& a, const TwoLevelGraph& b) {
    return std::make_pair(a.degree(), a.hbar2()) < std::make_pair(b.degree(), b.hbar2());
  });
  return out;
}

GradedSeries bare_graph_weight(const TwoLevelGraph& g, const PhiTable& phi) {
  g.validate();
  Scalar c(1);
  int hbar2 = 2 * static_cast<int>(g.edges.size());
  for (std::size_t v = 0; v < g.in_h2.size() && !c.is_zero(); ++v) {
    c *= phi.get(g.in_h2[v], g.in_labels(static_cast<int>(v)));
    hbar2 += g.in_h2[v] - 2;
  }
  for (std::size_t v = 0; v < g.out_h2.size() && !c.is_zero(); ++v) {
    c *= phi.get(g.out_h2[v], g.out_labels(static_cast<int>(v)));
    hbar2 += g.out_h2[v] - 2;
  }
  GradedSeries w;
  if (c.is_zero()) return w;
  for (const auto& e : g.edges) c *= Scalar(mpq_class(2, e.label.k2));
  w.add(hbar2, 2 * g.degree(), c);
  return w;
}

GradedSeries graph_weight(const TwoLevelGraph& g, const PhiTable& phi) {
  GradedSeries w = bare_graph_weight(g, phi);
  if (auto m = w.min_hbar2(); m && *m != g.hbar2())
    throw std::logic_error("graph weight carries hbar^" + std::to_string(*m) + "/2, expected " +
                           std::to_string(g.hbar2()) + "/2: " + g.str());
  return w * Scalar(mpq_class(1, g.automorphisms()));
}

GradedSeries labelled_graph_sum(const PhiTable& phi, int max_d, int max_h2) {
  const auto labels = edge_labels(phi.rank, max_d);
  GradedSeries total;
  for (int ni = 1; ni <= max_d; ++ni)
    for (int no = 1; ni + no <= max_d + 1; ++no) {
      // multiplicity matrix, row-major
      std::vector<int> m(ni * no, 0);
      std::function<void(int, int)> fill = [&](int cell, int left) {
        if (cell == ni * no) {
          int E = max_d - left;
          if (E == 0) return;
          int b1 = E - ni - no + 1;
          if (b1 < 0 || 2 * b1 > max_h2) return;
          TwoLevelGraph g;
          g.in_h2.assign(ni, 0);
          g.out_h2.assign(no, 0);
          for (int i = 0; i < ni; ++i)
            for (int j = 0; j < no; ++j)
              for (int t = 0; t < m[i * no + j]; ++t) g.edges.push_back({i, j, Label{}});
          std::vector<int> di(ni), dout(no);
          for (const auto& e : g.edges) ++di[e.in], ++dout[e.out];
          if (std::count(di.begin(), di.end(), 0) || std::count(dout.begin(), dout.end(), 0)) return;
          if (!g.connected()) return;
          // ordered labels on the (distinguishable) edges
          std::function<void(int, int)> lab = [&](int e, int kleft) {
            if (e == E) {
              std::vector<int> cur;
              for_decorations(ni + no, max_h2 - 2 * b1, cur, [&](const std::vector<int>& h) {
                TwoLevelGraph d = g;
                std::copy(h.begin(), h.begin() + ni, d.in_h2.begin());
                std::copy(h.begin() + ni, h.end(), d.out_h2.begin());
                total += bare_graph_weight(d, phi) * Scalar(mpq_class(1, d.labelled_symmetry_factor()));
              });
              return;
            }
            for (const auto& l : labels) {
              if (l.k2 / 2 > kleft) continue;
              g.edges[e].label = l;
              lab(e + 1, kleft - l.k2 / 2);
            }
          };
          lab(0, max_d);
          return;
        }
        for (int x = 0; x <= left; ++x) {
          m[cell] = x;
          fill(cell + 1, left - x);
        }
        m[cell] = 0;
      };
      fill(0, max_d);
    }
  return total;
}

// ---------------------------------------------------------------- Lambda slices

LambdaSlices slices_mul(const LambdaSlices& a, const LambdaSlices& b) {
  std::size_t n = std::min(a.size(), b.size());
  LambdaSlices r(n);
  for (std::size_t L = 0; L < n; ++L) {
    bool first = true;
    for (std::size_t i = 0; i <= L; ++i) {
      GradedSeries p = a[i] * b[L - i];
      if (first) r[L] = p;
      else r[L] += p;
      first = false;
    }
  }
  return r;
}

namespace {
void check_no_constant(const LambdaSlices& u) {
  if (!u.empty() && (!u[0].is_zero() || u[0].bound()))
    throw std::invalid_argument("series with a nonzero Lambda^0 slice");
}
LambdaSlices scaled(LambdaSlices s, const Scalar& c) {
  for (auto& x : s) x = x * c;
  return s;
}
void add_into(LambdaSlices& a, const LambdaSlices& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}
}  // namespace

LambdaSlices slices_exp(const LambdaSlices& u) {
  check_no_constant(u);
  LambdaSlices r(u.size()), term(u.size());
  for (std::size_t L = 0; L < u.size(); ++L) r[L] = term[L] = one_slice(static_cast<int>(L));
  for (std::size_t j = 1; j < u.size(); ++j) {
    term = scaled(slices_mul(term, u), Scalar(mpq_class(1, static_cast<long>(j))));
    add_into(r, term);
  }
  return r;
}

LambdaSlices slices_log1p(const LambdaSlices& u) {
  check_no_constant(u);
  LambdaSlices r(u.size()), term = u;
  for (std::size_t j = 1; j < u.size(); ++j) {
    add_into(r, scaled(term, Scalar(mpq_class(j % 2 ? 1 : -1, static_cast<long>(j)))));
    term = slices_mul(term, u);
  }
  return r;
}

// ---------------------------------------------------------------- z

ZSeries instanton_z(const PhiTable& phi, int max_d, int max_h2) {
  if (max_d > phi.max_d || max_h2 > phi.max_h2)
    throw TruncationError("instanton_z: Phi known only for sum k <= " + std::to_string(phi.max_d) +
                          ", 2h <= " + std::to_string(phi.max_h2));
  ZSeries z;
  z.rank = phi.rank;
  z.max_d = max_d;
  z.max_h2 = max_h2;
  int n = 2 * max_d + 1;
  z.log_z.assign(n, GradedSeries(max_h2 - 2));
  z.log_z[0] = GradedSeries();
  auto graphs = enumerate_graphs(phi.rank, max_d, max_h2);
  z.graphs = static_cast<int>(graphs.size());
  for (const auto& g : graphs) {
    GradedSeries w = graph_weight(g, phi);
    z.log_z[2 * g.degree()] += w;
    bool flat = std::all_of(g.in_h2.begin(), g.in_h2.end(), [](int h) { return h == 0; }) &&
                std::all_of(g.out_h2.begin(), g.out_h2.end(), [](int h) { return h == 0; });
    if (g.is_tree() && flat) z.trees += w;
  }
  z.z = slices_exp(z.log_z);
  return z;
}

ZSeries pairing_oracle_z(const FgnTable& table, int max_d, int max_h2) {
  PhiTable phi = phi_from_fgn(table, max_d, max_h2);
  FockModule mod = make_module(AlgebraSpec::symbolic(Family::A, table.rank));
  const int w2max = 2 * max_d;

  // Phi |lambda> as a polynomial: monomial coefficient Phi / aut
  FockState Phi;
  for (const auto& [k, v] : phi.entries) {
    GradedSeries c;
    c.add(k.g2 - 2, k.weight2() / 2, v / Scalar(aut(k.labels)));
    Phi += FockState::monomial(k.labels, c);
  }
  auto mul = [&](const FockState& a, const FockState& b) {
    FockState o;
    for (const auto& [ma, ca] : a.terms())
      for (const auto& [mb, cb] : b.terms()) {
        Monomial m;
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
        int w = 0;
        for (const auto& l : m) w += l.k2;
        if (w <= w2max) o.add(m, ca * cb);
      }
    return o;
  };
  // e^Phi terminates: every term of Phi has sum k >= 1
  FockState w = FockState::vacuum(), term = FockState::vacuum();
  for (int j = 1; j <= max_d; ++j) {
    term = mul(term, Phi) * Scalar(mpq_class(1, j));
    w += term;
  }

  ZSeries z;
  z.rank = table.rank;
  z.max_d = max_d;
  z.max_h2 = max_h2;
  int n = 2 * max_d + 1;
  LambdaSlices full(n);
  for (const auto& [m, c] : w.terms()) {
    FockState one = FockState::monomial(m, c);
    GradedSeries p = pairing(mod, one, one);
    for (const auto& [key, v] : p.coeffs()) full[key.second].add(key.first, key.second, v);
  }
  if (!(full[0] == one_slice(0))) throw std::logic_error("oracle: <lambda|lambda> != 1");
  LambdaSlices u = full;
  u[0] = GradedSeries();
  z.log_z = slices_log1p(u);
  for (auto& s : z.log_z) s = s.truncated(max_h2 - 2);
  z.log_z[0] = GradedSeries();
  // keep only what the truncated Phi determines
  LambdaSlices det = slices_exp(z.log_z);
  z.z.resize(n);
  for (int L = 0; L < n; ++L) z.z[L] = full[L].truncated(det[L].bound());
  // trees: the hbar^{-1} part of log z
  for (int L = 0; L < n; ++L)
    if (auto it = z.log_z[L].coeffs().find({-2, L}); it != z.log_z[L].coeffs().end()) z.trees.add(-2, L, it->second);
  return z;
}

std::string compare_z(const ZSeries& a, const ZSeries& b) {
  auto cmp = [](const char* what, const LambdaSlices& x, const LambdaSlices& y) -> std::string {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t L = 0; L < n; ++L) {
      std::optional<int> bound = x[L].bound();
      if (y[L].bound() && (!bound || *y[L].bound() < *bound)) bound = y[L].bound();
      GradedSeries xs = x[L].truncated(bound), ys = y[L].truncated(bound);
      if (xs == ys) continue;
      std::set<GradedSeries::Key> keys;
      for (const auto& [k, v] : xs.coeffs()) keys.insert(k);
      for (const auto& [k, v] : ys.coeffs()) keys.insert(k);
      for (const auto& k : keys)
        if (!(xs.get(k.first, k.second) == ys.get(k.first, k.second)))
          return std::string(what) + " differs at hbar^(" + std::to_string(k.first) + "/2) Lambda^(r*" +
                 std::to_string(k.second) + "): " + xs.get(k.first, k.second).str() + " vs " +
                 ys.get(k.first, k.second).str();
    }
    return {};
  };
  if (auto s = cmp("log z", a.log_z, b.log_z); !s.empty()) return s;
  return cmp("z", a.z, b.z);
}

}  // namespace gv
