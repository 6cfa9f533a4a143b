#pragma once
// Spectral-curve topological recursion on disjoint unions of formal disks, for
// the self-dual A curve (r unramified disks, omega_{0,1} = Q_b dzeta/zeta) and the
// B curve (r disks in the double-cover coordinate zeta~, fibre {(b, +-zeta~)}).
//
// Correlators are stored like FgnTable entries: omega_{g,n} = sum F[labels]
// prod dxi^{a}_{-k}, label k2 = 2k (k the mode on the disk coordinate).
// Forms at a fibre point are written in units of dzeta (B: pulled back along
// zeta~ -> -zeta~), so an expression of degree i is a Laurent polynomial in zeta.

#include <map>
#include <string>
#include <vector>

#include "gv/airy.hpp"

namespace gv {

// Finite Laurent polynomial in zeta: exponent -> coefficient.
using LaurentPoly = std::map<int, Scalar>;
void laurent_add(LaurentPoly& a, const LaurentPoly& b, const Scalar& factor = Scalar(1));
LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b);

struct FiberPoint {
  int color = 1;
  int sign = 1;  // +1: (b, zeta), -1: (b, -zeta) (B only)
  auto operator<=>(const FiberPoint&) const = default;
};

struct SpectralCurve {
  AlgebraSpec spec;  // family A (self-dual) or B; carries Q
  Scalar T;

  // Throws DegenerateParameters / std::invalid_argument on an unsupported curve
  // (A must be self-dual; B with r = 1 only with T = 0).
  static SpectralCurve make(const AlgebraSpec& spec, const Scalar& T);
  void validate() const;

  int fiber_size() const;                     // r (A) or 2r (B)
  std::vector<FiberPoint> fiber(int a) const;  // f(z) for z = (a, +zeta), z first
  // omega_{0,1}-factor (+-)omega_{0,1}(z') - omega_{0,1}(z), in units dzeta/zeta.
  Scalar zero_mode_factor(int a, const FiberPoint& p) const;
  // prod over f'(z): the kernel denominator in units (dzeta/zeta)^{N-1}.
  Scalar denominator(int a) const;
  // Explicit T-term of the loop equations at z = (a, zeta): coefficient of
  // zeta^{-N-1} (dzeta)^N, present for 2g = t_genus2() and n = 0.
  int t_genus2() const;
  Scalar t_term(int a) const;
  // Largest sum of k2 at which omega_{g,n} may be nonzero.
  int vanishing_weight(int g2) const;
};

// Lookup of lower correlators (labels sorted).
using CorrelatorLookup = std::function<Scalar(const FgnKey&)>;

// omega_{g2/2, |L|+|N|} at the fibre points L (all at one zeta) with spectator
// labels N, as a Laurent polynomial; omega_{0,2} is the exact bidifferential
// (omega_{0,2}(zeta, -zeta) = -(dzeta)^2 / 4 zeta^2).
LaurentPoly block_value(const SpectralCurve& c, const CorrelatorLookup& F, int g2,
                        const std::vector<FiberPoint>& L, const std::vector<Label>& N);
// Omega'_{g,i,n}(Z; w): sum over set partitions of Z, spectator distributions
// and genus splits with i + sum(g_L - 1) = g, omega_{0,1} excluded.
LaurentPoly omega_combine(const SpectralCurve& c, const CorrelatorLookup& F, int g2,
                          const std::vector<FiberPoint>& Z, const std::vector<Label>& spectators);
// [Q^(i) Omega'_{g,i,n}](z) at z = (a, zeta), in units (dzeta)^N.
LaurentPoly q_apply(const SpectralCurve& c, const CorrelatorLookup& F, int g2, int i, int a,
                    const std::vector<Label>& spectators);
// Sum_i Q^(i) Omega' + T-term; must be O(zeta^{-N}).
LaurentPoly loop_equation(const SpectralCurve& c, const CorrelatorLookup& F, int g2, int a,
                          const std::vector<Label>& spectators);

// Recursion kernel coefficient: Res_{zeta=0} K((a,zeta0),(a,zeta)) zeta^m (dzeta)^N
// = coefficient of dxi^a_{-k0}(zeta0); nonzero only for m = -k0 - N.
Scalar kernel_residue(const SpectralCurve& c, int a, int k0, int m);

// One entry by the recursion with z0 carrying labels[z0_index].
Scalar tr_entry(const SpectralCurve& c, const CorrelatorLookup& F, const FgnKey& target, std::size_t z0_index);

struct TrOptions {
  int max_euler = 2;
  int weight_margin = -1;  // as SolveOptions
  int workers = 0;
  bool check_loop_equations = true;
  bool strict_symmetry = true;  // throw InconsistencyError on asymmetry, else record it
};

struct TrResult {
  FgnTable table;
  std::vector<std::string> asymmetries;  // entries whose value depends on the choice of z0
  int symmetry_checks = 0;
  int loop_checks = 0;  // (g, n, component) loop equations verified
};

TrResult solve_tr(const SpectralCurve& c, const TrOptions& opt);

}  // namespace gv
