#pragma once
// Heisenberg Fock modules, mode words, normal ordering and the bilinear pairing.
//
// Mode J^a_m is written Label{a, k2} with k2 = 2m (doubled units).  On the
// module C[x^a_k][hbar^{1/2}]:
//   J^a_m  (m > 0)  ->  hbar * d/dx^a_m
//   J^a_m  (m < 0)  ->  (-m) * x^a_{-m}
//   J^a_0           ->  zero mode of colour a (e.g. Q_a - hbar^{1/2} alpha0)
// so [J^a_m, J^b_n] = hbar m delta_{ab} delta_{m+n,0}.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gv/series.hpp"

namespace gv {

struct Label {
  int color = 0;
  int k2 = 0;
  auto operator<=>(const Label&) const = default;
};

std::string label_str(const Label& l);

// Sorted multiset of creation-variable labels x^a_k (k2 > 0).
using Monomial = std::vector<Label>;

// Automorphism count of a multiset: product of factorials of multiplicities.
mpz_class aut(const Monomial& m);

struct ColorSector {
  bool half_integer = false;  // modes in Z + 1/2 instead of Z
  bool has_zero_mode = true;
  Scalar zero_mode;  // value of J_0 at hbar^0
};

class FockModule {
 public:
  FockModule() = default;
  explicit FockModule(std::vector<ColorSector> colors, Scalar alpha0 = Scalar())
      : colors_(std::move(colors)), alpha0_(std::move(alpha0)) {}

  int num_colors() const { return static_cast<int>(colors_.size()); }
  const ColorSector& sector(int color) const;
  const Scalar& alpha0() const { return alpha0_; }
  // Validates sector membership; throws std::invalid_argument on mismatch.
  void check_label(const Label& l) const;
  // J^a_0 = zero_mode - hbar^{1/2} alpha0, as a map hbar2 -> Scalar.
  std::vector<std::pair<int, Scalar>> zero_mode(int color) const;
  // Same for the dual (bra) representation: -(zero_mode + hbar^{1/2} alpha0).
  std::vector<std::pair<int, Scalar>> dual_zero_mode(int color) const;

  // Truncation: states beyond these are dropped if bounded, else an error.
  std::optional<int> max_xdeg, max_hbar2;
  bool bounded = false;

 private:
  std::vector<ColorSector> colors_;
  Scalar alpha0_;
};

class FockState {
 public:
  FockState() = default;
  static FockState vacuum() { return monomial({}, GradedSeries::constant(1)); }
  static FockState monomial(Monomial m, const GradedSeries& c);

  const std::map<Monomial, GradedSeries>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  void add(const Monomial& m, const GradedSeries& c);
  void add(const Monomial& m, int hbar2, int lambda, const Scalar& c);
  GradedSeries coeff(const Monomial& m) const;

  FockState& operator+=(const FockState& o);
  FockState& operator-=(const FockState& o);
  friend FockState operator+(FockState a, const FockState& b) { return a += b; }
  friend FockState operator-(FockState a, const FockState& b) { return a -= b; }
  FockState operator*(const Scalar& s) const;
  FockState operator*(const GradedSeries& s) const;
  bool operator==(const FockState& o) const { return t_ == o.t_; }
  std::string str() const;

 private:
  std::map<Monomial, GradedSeries> t_;
};

// Ordered product c * hbar^{hbar2/2} * J_{l_1} ... J_{l_n}; the rightmost mode acts first.
struct ModeWord {
  Scalar coef = Scalar(1);
  int hbar2 = 0;
  std::vector<Label> modes;
};

// Normally ordered polynomial in the nonzero modes (zero modes substituted).
struct NOKey {
  int hbar2 = 0;
  std::vector<Label> cre;  // k2 < 0, sorted
  std::vector<Label> ann;  // k2 > 0, sorted
  auto operator<=>(const NOKey&) const = default;
};

class NOPoly {
 public:
  void add(const NOKey& k, const Scalar& c);
  void add(const NOPoly& o, const Scalar& s = Scalar(1), int hbar2_shift = 0);
  const std::map<NOKey, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  NOPoly scaled(const Scalar& s) const;
  bool operator==(const NOPoly& o) const { return t_ == o.t_; }
  std::string str() const;
  // Product of commuting normally ordered polynomials (e.g. distinct colours).
  // Only valid when no annihilator of *this fails to commute with a creator of o.
  NOPoly commuting_product(const NOPoly& o) const;

 private:
  std::map<NOKey, Scalar> t_;
};

inline std::ostream& operator<<(std::ostream& os, const FockState& s) { return os << s.str(); }
inline std::ostream& operator<<(std::ostream& os, const NOPoly& s) { return os << s.str(); }

FockState apply_mode(const FockModule& mod, const Label& l, const FockState& s);
FockState apply_word(const FockModule& mod, const ModeWord& w, const FockState& s);
FockState apply(const FockModule& mod, const NOPoly& p, const FockState& s);
NOPoly normal_order(const FockModule& mod, const ModeWord& w);

// Bilinear form <x^M | x^N> = delta_{MN} aut(M) prod_{(a,k) in M} hbar/k.
GradedSeries pairing(const FockModule& mod, const FockState& bra, const FockState& ket);

// Adjoint: iota(J_m) = -J_{-m} - 2 hbar^{1/2} alpha0 delta_{m,0}, order reversed.
// Returned as a sum of words because of the zero-mode shift.
std::vector<ModeWord> adjoint(const FockModule& mod, const ModeWord& w);
// Action of a word in the dual representation, in which
// <u | X v> = <adjoint(X) u | v>.
FockState apply_word_dual(const FockModule& mod, const ModeWord& w, const FockState& s);

// All monomials with given total weight (sum of k2) and colours in [1, ncolors].
std::vector<Monomial> monomials_of_weight(const FockModule& mod, int weight2);

}  // namespace gv
