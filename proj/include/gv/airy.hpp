#pragma once
// Airy structures in normal form built from W-modes, and the recursive solver
// for the coefficients F_{g,n} of Z = exp(F),
//   F = sum hbar^{g-1}/n! F_{g,n}[(a_1,k_1),...,(a_n,k_n)] x^{a_1}_{k_1} ... x^{a_n}_{k_n}.
// Genus is stored doubled (g2 = 2g); labels use doubled modes as in fock.hpp.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gv/wgen.hpp"

namespace gv {

struct FgnKey {
  int g2 = 0;
  std::vector<Label> labels;  // sorted
  int n() const { return static_cast<int>(labels.size()); }
  int euler() const { return g2 - 2 + n(); }  // 2g - 2 + n
  int weight2() const;                          // sum of k2
  auto operator<=>(const FgnKey&) const = default;
};
std::string key_str(const FgnKey& k);

struct FgnTable {
  Family family = Family::A;
  int rank = 0;
  int max_euler = 0;  // bound on 2g - 2 + n
  int weight_cap = 0;  // all entries with sum k2 <= weight_cap were computed
  std::map<FgnKey, Scalar> entries;  // only nonzero entries are stored

  Scalar get(const FgnKey& k) const;
  bool operator==(const FgnTable& o) const { return entries == o.entries; }
};

// Data describing where the Whittaker shift lives.
struct ShiftInfo {
  GenId gen;
  int m2 = 0;       // doubled mode of the shifted generator
  int hbar2 = 0;    // shift is hbar^{hbar2/2} T
  int label_w = 0;  // k2 of the Heisenberg mode paired with that W-mode
};
ShiftInfo shift_info(const AlgebraSpec& spec);
// k2 of J paired with W-mode m2 (B-type modes live on the double cover).
int label_of_mode(const AlgebraSpec& spec, int m2);
// Allowed labels (a, k2) with k2 <= max_k2.
std::vector<Label> allowed_labels(const AlgebraSpec& spec, int max_k2);
// Largest sum of k2 at which F_{g,n} may be nonzero for genus g2 (the Whittaker
// shift carries hbar^{s/2} per unit of T); larger weights vanish.
int vanishing_weight(const AlgebraSpec& spec, int g2);

struct NFComponent {
  GenId gen;
  int m2 = 0;
  Scalar coef;
};

struct NormalForm {
  AlgebraSpec spec;
  FockModule mod;
  Scalar T;
  int max_k2 = 0;  // operators built for labels up to here, annihilators truncated here
  std::map<Label, NOPoly> H;                         // unshifted operators
  std::map<Label, std::vector<NFComponent>> combo;   // H = sum coef * W^gen_{m2}
  std::map<Label, Scalar> shift;  // H - hbar^{s/2} * shift[label] is in normal form
  int shift_hbar2 = 0;
};

// Linear combination of W-modes with pi_1(H^a_k) = J^a_k.  Throws
// DegenerateParameters on bad Q, InconsistencyError if the degree-one check fails.
NormalForm build_normal_form(const AlgebraSpec& spec, const Scalar& T, int max_k2);

// Coefficient of hbar^{g2/2} x^R in Z^{-1} op Z for Z = exp(F), where
// F-coefficients are supplied by `lookup` (R sorted).
using FgnLookup = std::function<Scalar(const FgnKey&)>;
Scalar conjugated_coefficient(const NOPoly& op, const FgnLookup& lookup, int g2, const std::vector<Label>& R);

struct SolveOptions {
  int max_euler = 2;
  int weight_margin = -1;   // extra k2 beyond the vanishing bound; -1 -> one label step
  int workers = 0;          // 0 -> GV_WORKERS env or hardware concurrency
  bool check_all = true;    // assert every redundant constraint
  bool reverse_schedule = false;  // solve from the last label, process targets in reverse
};

FgnTable solve_fgn(const NormalForm& nf, const SolveOptions& opt);
// Weight cap used by solve_fgn.
int solve_weight_cap(const AlgebraSpec& spec, int max_euler, int weight_margin);

struct ResidualEntry {
  int g2 = 0;
  std::vector<Label> R;
  Scalar value;
};
// Nonzero coefficients of Z^{-1}(W^gen_{m2} - shift) Z over all orders determined
// by the table (2g - 1 + |R| <= max_euler, weights within the cap).
std::vector<ResidualEntry> whittaker_residual(const NormalForm& nf, const FgnTable& table, const GenId& gen, int m2);

// Structural checks on an A-type table; returns human-readable violations.
std::vector<std::string> lemma_checks(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table);

// Independent oracle: order-by-order linear solve for Z itself over the truncated
// polynomial module using the original W-modes, then F = log Z.  Returns F entries
// with weight2 <= max_weight2 and degree 2g - 2 + n <= max_deg.
std::map<FgnKey, Scalar> brute_force_fgn(const AlgebraSpec& spec, const Scalar& T, int max_deg, int max_weight2);

// Denominator ansatz for explicit-Q reconstruction of tables with 2g - 2 + n <= E:
// A: prod_{a<b} (Q_b - Q_a)^E; B, C, D: prod_{a<b} (Q_b^2 - Q_a^2)^E prod_a Q_a^E.
Scalar denominator_ansatz(Family f, int r, int max_euler);

struct Resymbolized {
  std::map<FgnKey, Scalar> entries;  // reconstructed, including zeros
  int specializations = 0;           // explicit-Q solves used (grid + checks)
  std::vector<std::string> check_failures;  // off-grid points where the reconstruction is wrong
};
// Re-symbolises the sampled entries from explicit-Q solves: F * ansatz is assumed to
// be a polynomial in Q of degree <= deg(ansatz) (F has non-positive Q-degree), is
// interpolated on a tensor grid of non-resonant rationals, then divided back.
// `extra_checks` further off-grid specialisations validate the result.
Resymbolized resymbolize(Family f, int r, bool generic, int max_euler, const std::vector<FgnKey>& keys,
                         int extra_checks = 2);

}  // namespace gv
