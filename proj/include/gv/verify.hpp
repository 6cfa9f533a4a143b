#pragma once
// Invariant suites shared by `gv verify` and the acceptance runner.  Each returns
// one CheckResult; failures carry the first violated clause.

#include <string>
#include <vector>

#include "gv/nekrasov.hpp"
#include "gv/tr.hpp"

namespace gv {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  bool truncated = false;  // failed because a window was too small
};

// Solves with a weight window wide enough for W-modes up to max_mode and checks
// every Whittaker residual: A all W^i_m, i <= r, 1 <= m <= max_mode; other
// families every generator and positive mode inside the window.
CheckResult check_whittaker(const AlgebraSpec& spec, const Scalar& T, int max_euler, int max_mode = 3);
// Same residuals on a given table; type A modes past its weight cap are a
// truncation failure.
CheckResult check_whittaker_table(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table, int max_mode = 3);
// T-homogeneity, alpha0-degree, vanishing and F_{r/2,1}[a;1] on an A table.
CheckResult check_lemma(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table);
// Recursion table == Airy table, entry by entry, plus symmetry and loop equations.
CheckResult check_tr(const AlgebraSpec& spec, const Scalar& T, int max_euler);
// instanton_z == pairing_oracle_z; trees == hbar^{-1} part of log z; at the
// self-dual level also the closed form of the Lambda^{2r} coefficient.
CheckResult check_graphs(const AlgebraSpec& spec, int max_d, int max_h2);
// D: Virasoro closure of the nu^2 modes; reports the central charge.
CheckResult check_virasoro(const AlgebraSpec& spec);
// C/D degree-one identities.
CheckResult check_degree_one(const AlgebraSpec& spec);
// Reverse schedule, several workers, and an explicit specialisation reproduce the
// symbolic table; sampled entries re-symbolised from explicit solves.
CheckResult check_robustness(const AlgebraSpec& spec, const Scalar& T, int max_euler, std::size_t samples = 6);

// Weight margin making the solver window cover the W-modes up to max_mode.
int whittaker_margin(const AlgebraSpec& spec, int max_euler, int max_mode);

}  // namespace gv
