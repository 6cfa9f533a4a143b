#pragma once
// Modified genus expansion Phi, the Gaiotto vector |w> = e^Phi |lambda>, and the
// instanton partition function z = <w|w> as a sum over two-level graphs.
//
//   Phi = sum hbar^{h-1}/n! Lambda^{r sum k} Phi_{h,n}[labels] prod J_{-k}/k,
//   Phi_{h,n}[labels] = F_{h + (r/2) sum k, n}[labels] at T = 1.
//
// GradedSeries keys are (hbar2, lambda) with lambda counted in units of Lambda^r,
// so the d-instanton term of z sits at lambda = 2d.

#include <string>
#include <vector>

#include "gv/airy.hpp"

namespace gv {

struct PhiTable {
  int rank = 0;
  int max_d = 0;   // entries known for sum k <= max_d
  int max_h2 = 0;  // and 2h <= max_h2
  std::map<FgnKey, Scalar> entries;  // FgnKey::g2 holds 2h; nonzero entries only

  // Zero inside the window; TruncationError outside.
  Scalar get(int h2, const std::vector<Label>& labels) const;
};

// Euler bound of an A-type F-table needed for Phi with sum k <= max_d, 2h <= max_h2.
int phi_required_euler(int rank, int max_d, int max_h2);
PhiTable phi_from_fgn(const FgnTable& table, int max_d, int max_h2);

struct GraphEdge {
  int in = 0;
  int out = 0;
  Label label;  // (colour, k2 = 2k)
  auto operator<=>(const GraphEdge&) const = default;
};

struct TwoLevelGraph {
  std::vector<int> in_h2, out_h2;  // vertex decorations 2h(v)
  std::vector<GraphEdge> edges;

  int num_vertices() const { return static_cast<int>(in_h2.size() + out_h2.size()); }
  int betti() const { return static_cast<int>(edges.size()) - num_vertices() + 1; }
  int degree() const;  // sum over edges of k
  bool connected() const;
  bool is_tree() const { return connected() && betti() == 0; }
  bool simple() const;  // at most one edge between any pair of vertices
  int hbar2() const;    // 2(b_1 - 1) + sum 2h(v)
  // Throws std::invalid_argument if an invariant of a two-level graph fails.
  void validate() const;
  std::vector<Label> in_labels(int v) const;   // sorted labels at an in-vertex
  std::vector<Label> out_labels(int v) const;
  // Invariant under relabelling vertices on each side (sides not interchangeable).
  std::string canonical() const;
  // Vertex relabellings preserving the graph, times permutations of parallel
  // edges carrying the same label.
  mpz_class automorphisms() const;
  // |V_in|! |V_out|! prod_{v,v'} |E(v) n E(v')|! — the normalisation for a sum over
  // vertex-labelled graphs with distinguishable edges.
  mpz_class labelled_symmetry_factor() const;
  std::string str() const;
};

// Connected graphs with colours 1..num_colors, sum of edge k <= max_d and
// 2 b_1 + sum 2h(v) <= max_h2 (i.e. contributing to log z up to hbar^{max_h2/2 - 1}),
// one per isomorphism class, in a deterministic order.
std::vector<TwoLevelGraph> enumerate_graphs(int num_colors, int max_d, int max_h2);

// prod_v hbar^{h(v)-1} Lambda^{r sum k} Phi_{h(v),|E(v)|}[gamma(v)] prod_e hbar/k_e,
// without any symmetry factor.
GradedSeries bare_graph_weight(const TwoLevelGraph& g, const PhiTable& phi);
// bare weight / automorphisms; asserts the hbar power -1 + b_1 + sum h(v).
GradedSeries graph_weight(const TwoLevelGraph& g, const PhiTable& phi);

// Independent sum over vertex-labelled graphs with ordered parallel edges,
// each weighted by 1/labelled_symmetry_factor.  Equals sum of graph_weight.
GradedSeries labelled_graph_sum(const PhiTable& phi, int max_d, int max_h2);

// Series in Lambda^r stored slice by slice (index = lambda); each slice keeps its
// own hbar bound, so e.g. the Lambda^0 term of z stays exact.
using LambdaSlices = std::vector<GradedSeries>;
// Product truncated to the shorter length.
LambdaSlices slices_mul(const LambdaSlices& a, const LambdaSlices& b);
// exp(u) and log(1 + u) for u with a vanishing lambda = 0 slice.
LambdaSlices slices_exp(const LambdaSlices& u);
LambdaSlices slices_log1p(const LambdaSlices& u);

struct ZSeries {
  int rank = 0;
  int max_d = 0;
  int max_h2 = 0;
  LambdaSlices z;       // lambda = 0..2 max_d; entries above a slice's bound are not determined
  LambdaSlices log_z;   // exact through hbar2 <= max_h2 - 2
  GradedSeries trees;   // sum of tree weights with all h(v) = 0
  int graphs = 0;       // number of graphs summed (instanton_z only)

  Scalar z_coeff(int hbar2, int lambda) const { return z.at(lambda).get(hbar2, lambda); }
  // F_h coefficient of Lambda^{r lambda} in log z = sum_h hbar^{h-1} F_h.
  Scalar free_energy(int h2, int lambda) const { return log_z.at(lambda).get(h2 - 2, lambda); }
};

ZSeries instanton_z(const PhiTable& phi, int max_d, int max_h2);
// Builds e^Phi |lambda> in the Fock module and evaluates <w|w> with `pairing`.
ZSeries pairing_oracle_z(const FgnTable& table, int max_d, int max_h2);
// Empty if the two agree on every coefficient both determine; else a description
// of the first difference.
std::string compare_z(const ZSeries& a, const ZSeries& b);

}  // namespace gv
