#pragma once
// W-algebra generator modes as normally ordered operators on Fock modules.
//
// Families: A (Miura transform, self-dual or generic alpha0), B (sigma-twisted
// gl_2r module at self-dual level, written on the double cover zeta^2 = z),
// D and C (lattice bilinears nu^d plus the colour product, self-dual level;
// C has an extra half-integer colour r+1 without zero mode).
//
// Every field term is homogeneous: hbar2 + (number of J factors) = weight.

#include <compare>
#include <string>
#include <vector>

#include "gv/fock.hpp"

namespace gv {

enum class Family { A, B, C, D };
std::string family_name(Family f);
Family parse_family(const std::string& s);

struct AlgebraSpec {
  Family family = Family::A;
  int rank = 2;
  bool generic_level = false;  // alpha0 != 0 (type A only)
  std::vector<Scalar> Q;       // Q_1..Q_r
  Scalar alpha0;

  // Q_a = symbolic variables, alpha0 symbolic iff generic.
  static AlgebraSpec symbolic(Family f, int r, bool generic = false);
  // Q_a given explicitly (alpha0 symbolic iff generic).
  static AlgebraSpec with_q(Family f, int r, std::vector<Scalar> q, bool generic = false);
  // Throws DegenerateParameters naming the violated hypothesis.
  void validate() const;
  int num_colors() const { return family == Family::C ? rank + 1 : rank; }
};

FockModule make_module(const AlgebraSpec& spec);

// Generator identifier: W^weight, or the colour-product generator (tilde)
// of types C/D.
struct GenId {
  int weight = 1;
  bool tilde = false;
  auto operator<=>(const GenId&) const = default;
};
std::string gen_str(const GenId& g);
std::vector<GenId> generators(const AlgebraSpec& spec);
// True when the modes of g are in Z + 1/2.
bool half_integer_modes(const AlgebraSpec& spec, const GenId& g);

// prod_u binom(a_u - sum_{v<u} b_v - u, b_u); negative tops give 0.
mpz_class n_coeff(const std::vector<int>& a, const std::vector<int>& b);

struct FieldFactor {
  int color = 1;
  int deriv = 0;  // number of z-derivatives
  auto operator<=>(const FieldFactor&) const = default;
};
// coef * hbar^{hbar2/2} * :prod_l d^{b_l} J^{a_l}(z): ; for twisted colours the
// product is the normally ordered product of twisted fields.
struct FieldTerm {
  Scalar coef;
  int hbar2 = 0;
  std::vector<FieldFactor> factors;
};
using Field = std::vector<FieldTerm>;

// Quantum Miura transform field W^i for type A.
Field miura_field(const AlgebraSpec& spec, int i);
// [t^d] :exp(s sum_k t^k d^{k-1}J^c / k!): , the field of e^{s chi}_{-d} e^{-s chi}_{-1}|0>.
Field lattice_bilinear_field(int color, int sign, int d);
// Generator field W^d = (d!/2) sum_{colours, signs} nu^d (untwisted form).
Field dc_w_field(int ncolors, int d);
// Derivative-contraction constant of the half-integer sector: b1! b2! [a^b1 b^b2] R(1+a,1+b),
// R(z1,z2) = 1/(2 sqrt(z1 z2) (sqrt z1 + sqrt z2)^2).
mpq_class twist_contraction(int b1, int b2);
// Rewrites a field on colour `twisted` in terms of normally ordered twisted modes
// (all partial Wick pairings with hbar * twist_contraction * z^{-2-b1-b2}).
Field twisted_expand(const Field& f, int twisted);

// Mode m2/2 of a weight-d field, keeping annihilators J_n with 2n <= ann_max2.
NOPoly field_mode(const FockModule& mod, const Field& f, int m2, int ann_max2);

// The generator mode W_{m2/2} of the given family.
NOPoly w_mode(const AlgebraSpec& spec, const FockModule& mod, const GenId& g, int m2, int ann_max2);

// Closure of L_m = W^2_m / 2 on the truncated module (D and C untwisted sector:
// the nu^2 modes): [L_m, L_n] = hbar (m - n) L_{m+n} + hbar^2 c (m^3 - m)/12 delta_{m+n,0},
// checked on every basis state of weight <= max_weight2 for |m|, |n| <= max_mode.
struct VirasoroReport {
  Scalar central_charge;  // read off [L_2, L_{-2}] on the vacuum
  int checks = 0;         // (m, n, state) triples verified
  std::vector<std::string> violations;
};
VirasoroReport virasoro_closure(const AlgebraSpec& spec, int max_mode, int max_weight2);

// Degree-one parts of the D/C generators: pi_1(W^d_m) = sum_a d Q_a^{d-1} J^a_m (no
// J^{r+1} for C) and pi_1(Wt_m) = sum_a (prod_b Q_b / Q_a) J^a_m (D), resp.
// prod_a Q_a J^{r+1}_m (C), for modes up to max_mode; returns the violations.
std::vector<std::string> degree_one_violations(const AlgebraSpec& spec, int max_mode);

// Keep only terms of degree deg = hbar2 + #modes.
NOPoly project_degree(const NOPoly& p, int deg);

// Elementary symmetric polynomial e_j of the given values.
Scalar elementary(const std::vector<Scalar>& xs, int j);

}  // namespace gv
