#include "gv/fock.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace gv {

static std::string half_str(int k2) {
  if (k2 % 2 == 0) return std::to_string(k2 / 2);
  return std::to_string(k2) + "/2";
}

std::string label_str(const Label& l) { return "(" + std::to_string(l.color) + "," + half_str(l.k2) + ")"; }

mpz_class aut(const Monomial& m) {
  mpz_class a = 1;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), j - i);
    a *= f;
    i = j;
  }
  return a;
}

// ---------------------------------------------------------------------------

const ColorSector& FockModule::sector(int color) const {
  if (color < 1 || color > num_colors()) throw std::invalid_argument("colour " + std::to_string(color) + " out of range");
  return colors_[color - 1];
}

void FockModule::check_label(const Label& l) const {
  const ColorSector& s = sector(l.color);
  bool odd = (l.k2 % 2) != 0;
  if (odd != s.half_integer)
    throw std::invalid_argument("mode " + label_str(l) + " does not belong to the sector of colour " +
                                std::to_string(l.color));
  if (l.k2 == 0 && !s.has_zero_mode)
    throw std::invalid_argument("colour " + std::to_string(l.color) + " has no zero mode");
}

std::vector<std::pair<int, Scalar>> FockModule::zero_mode(int color) const {
  const ColorSector& s = sector(color);
  if (!s.has_zero_mode) throw std::invalid_argument("colour " + std::to_string(color) + " has no zero mode");
  std::vector<std::pair<int, Scalar>> r;
  if (!s.zero_mode.is_zero()) r.emplace_back(0, s.zero_mode);
  if (!alpha0_.is_zero()) r.emplace_back(1, -alpha0_);
  return r;
}

std::vector<std::pair<int, Scalar>> FockModule::dual_zero_mode(int color) const {
  const ColorSector& s = sector(color);
  if (!s.has_zero_mode) throw std::invalid_argument("colour " + std::to_string(color) + " has no zero mode");
  std::vector<std::pair<int, Scalar>> r;
  if (!s.zero_mode.is_zero()) r.emplace_back(0, -s.zero_mode);
  if (!alpha0_.is_zero()) r.emplace_back(1, -alpha0_);
  return r;
}

// ---------------------------------------------------------------------------

FockState FockState::monomial(Monomial m, const GradedSeries& c) {
  FockState s;
  s.add(m, c);
  return s;
}

void FockState::add(const Monomial& m, const GradedSeries& c) {
  if (c.is_zero()) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

void FockState::add(const Monomial& m, int hbar2, int lambda, const Scalar& c) {
  GradedSeries g;
  g.add(hbar2, lambda, c);
  add(m, g);
}

GradedSeries FockState::coeff(const Monomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? GradedSeries() : it->second;
}

FockState& FockState::operator+=(const FockState& o) {
  for (const auto& [m, c] : o.t_) add(m, c);
  return *this;
}

FockState& FockState::operator-=(const FockState& o) {
  for (const auto& [m, c] : o.t_) add(m, c * Scalar(-1));
  return *this;
}

FockState FockState::operator*(const Scalar& s) const {
  FockState r;
  if (s.is_zero()) return r;
  for (const auto& [m, c] : t_) r.add(m, c * s);
  return r;
}

FockState FockState::operator*(const GradedSeries& s) const {
  FockState r;
  for (const auto& [m, c] : t_) r.add(m, c * s);
  return r;
}

std::string FockState::str() const {
  std::string s;
  for (const auto& [m, c] : t_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")";
    for (const auto& l : m) s += "*x" + label_str(l);
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------

void NOPoly::add(const NOKey& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = t_.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

void NOPoly::add(const NOPoly& o, const Scalar& s, int hbar2_shift) {
  if (s.is_zero()) return;
  for (const auto& [k, c] : o.t_) {
    NOKey kk = k;
    kk.hbar2 += hbar2_shift;
    add(kk, s.is_one() ? c : c * s);
  }
}

NOPoly NOPoly::scaled(const Scalar& s) const {
  NOPoly r;
  r.add(*this, s);
  return r;
}

NOPoly NOPoly::commuting_product(const NOPoly& o) const {
  NOPoly r;
  for (const auto& [ka, ca] : t_)
    for (const auto& [kb, cb] : o.t_) {
      NOKey k;
      k.hbar2 = ka.hbar2 + kb.hbar2;
      k.cre = ka.cre;
      k.cre.insert(k.cre.end(), kb.cre.begin(), kb.cre.end());
      std::sort(k.cre.begin(), k.cre.end());
      k.ann = ka.ann;
      k.ann.insert(k.ann.end(), kb.ann.begin(), kb.ann.end());
      std::sort(k.ann.begin(), k.ann.end());
      r.add(k, ca * cb);
    }
  return r;
}

std::string NOPoly::str() const {
  std::string s;
  for (const auto& [k, c] : t_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")";
    if (k.hbar2) s += "*hbar^(" + std::to_string(k.hbar2) + "/2)";
    for (const auto& l : k.cre) s += "*J" + label_str(l);
    for (const auto& l : k.ann) s += "*J" + label_str(l);
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------

static GradedSeries shift_hbar(const GradedSeries& g, int d2) {
  GradedSeries r(g.bound() ? std::optional<int>(*g.bound() + d2) : std::nullopt);
  for (const auto& [k, c] : g.coeffs()) r.add(k.first + d2, k.second, c);
  return r;
}

static void enforce_bounds(const FockModule& mod, FockState& s) {
  if (!mod.max_xdeg && !mod.max_hbar2) return;
  FockState r;
  for (const auto& [m, c] : s.terms()) {
    if (mod.max_xdeg && static_cast<int>(m.size()) > *mod.max_xdeg) {
      if (!mod.bounded) throw TruncationError("state exceeds the module's x-degree bound");
      continue;
    }
    if (mod.max_hbar2) {
      auto top = c.coeffs().empty() ? 0 : c.coeffs().rbegin()->first.first;
      int mx = top;
      for (const auto& [k, v] : c.coeffs()) mx = std::max(mx, k.first);
      if (mx > *mod.max_hbar2) {
        if (!mod.bounded) throw TruncationError("state exceeds the module's hbar bound");
        r.add(m, c.truncated(*mod.max_hbar2));
        continue;
      }
    }
    r.add(m, c);
  }
  s = std::move(r);
}

static FockState apply_mode_impl(const FockModule& mod, const Label& l, const FockState& s, bool dual) {
  mod.check_label(l);
  FockState r;
  if (l.k2 > 0) {
    Scalar sign(dual ? -1 : 1);
    for (const auto& [m, c] : s.terms()) {
      auto lo = std::lower_bound(m.begin(), m.end(), l);
      auto hi = std::upper_bound(m.begin(), m.end(), l);
      long cnt = hi - lo;
      if (!cnt) continue;
      Monomial m2(m.begin(), lo);
      m2.insert(m2.end(), lo + 1, m.end());
      r.add(m2, shift_hbar(c, 2) * (sign * Scalar(cnt)));
    }
  } else if (l.k2 < 0) {
    Label x{l.color, -l.k2};
    Scalar f(mpq_class(-l.k2, 2));
    if (dual) f = -f;
    for (const auto& [m, c] : s.terms()) {
      Monomial m2 = m;
      m2.insert(std::upper_bound(m2.begin(), m2.end(), x), x);
      r.add(m2, c * f);
    }
  } else {
    GradedSeries zm;
    for (const auto& [h, v] : dual ? mod.dual_zero_mode(l.color) : mod.zero_mode(l.color)) zm.add(h, 0, v);
    r = s * zm;
  }
  enforce_bounds(mod, r);
  return r;
}

FockState apply_mode(const FockModule& mod, const Label& l, const FockState& s) {
  return apply_mode_impl(mod, l, s, false);
}

static FockState apply_word_impl(const FockModule& mod, const ModeWord& w, const FockState& s, bool dual) {
  FockState r = s;
  for (auto it = w.modes.rbegin(); it != w.modes.rend() && !r.is_zero(); ++it) r = apply_mode_impl(mod, *it, r, dual);
  GradedSeries c;
  c.add(w.hbar2, 0, w.coef);
  r = r * c;
  enforce_bounds(mod, r);
  return r;
}

FockState apply_word(const FockModule& mod, const ModeWord& w, const FockState& s) {
  return apply_word_impl(mod, w, s, false);
}

FockState apply_word_dual(const FockModule& mod, const ModeWord& w, const FockState& s) {
  return apply_word_impl(mod, w, s, true);
}

FockState apply(const FockModule& mod, const NOPoly& p, const FockState& s) {
  FockState r;
  for (const auto& [k, c] : p.terms()) {
    ModeWord w{c, k.hbar2, k.cre};
    w.modes.insert(w.modes.end(), k.ann.begin(), k.ann.end());
    r += apply_word(mod, w, s);
  }
  return r;
}

NOPoly normal_order(const FockModule& mod, const ModeWord& w) {
  NOPoly out;
  std::function<void(Scalar, int, std::vector<Label>)> rec = [&](Scalar c, int h2, std::vector<Label> ms) {
    // zero modes are scalars: pull them out
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (ms[i].k2 != 0) continue;
      mod.check_label(ms[i]);
      auto zm = mod.zero_mode(ms[i].color);
      std::vector<Label> rest(ms.begin(), ms.begin() + i);
      rest.insert(rest.end(), ms.begin() + i + 1, ms.end());
      for (const auto& [dh, v] : zm) rec(c * v, h2 + dh, rest);
      return;
    }
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
      if (ms[i].k2 > 0 && ms[i + 1].k2 < 0) {
        const Label a = ms[i], b = ms[i + 1];
        if (a.color == b.color && a.k2 + b.k2 == 0) {
          std::vector<Label> rest(ms.begin(), ms.begin() + i);
          rest.insert(rest.end(), ms.begin() + i + 2, ms.end());
          rec(c * Scalar(mpq_class(a.k2, 2)), h2 + 2, rest);
        }
        std::swap(ms[i], ms[i + 1]);
        rec(c, h2, std::move(ms));
        return;
      }
    }
    NOKey k;
    k.hbar2 = h2;
    for (const auto& l : ms) {
      mod.check_label(l);
      (l.k2 < 0 ? k.cre : k.ann).push_back(l);
    }
    std::sort(k.cre.begin(), k.cre.end());
    std::sort(k.ann.begin(), k.ann.end());
    out.add(k, c);
  };
  rec(w.coef, w.hbar2, w.modes);
  return out;
}

GradedSeries pairing(const FockModule& mod, const FockState& bra, const FockState& ket) {
  GradedSeries r;
  for (const auto& [m, c] : bra.terms()) {
    for (const auto& l : m) mod.check_label(l);
    auto it = ket.terms().find(m);
    if (it == ket.terms().end()) continue;
    Scalar w(aut(m));
    for (const auto& l : m) w *= Scalar(mpq_class(2, l.k2));
    GradedSeries hw;
    hw.add(2 * static_cast<int>(m.size()), 0, w);
    r += c * it->second * hw;
  }
  for (const auto& [m, c] : ket.terms())
    for (const auto& l : m) mod.check_label(l);
  return r;
}

std::vector<ModeWord> adjoint(const FockModule& mod, const ModeWord& w) {
  std::vector<ModeWord> out{ModeWord{w.coef, w.hbar2, {}}};
  for (auto it = w.modes.rbegin(); it != w.modes.rend(); ++it) {
    std::vector<ModeWord> next;
    for (auto& x : out) {
      ModeWord y = x;
      y.coef = -y.coef;
      y.modes.push_back({it->color, -it->k2});
      next.push_back(y);
      if (it->k2 == 0 && !mod.alpha0().is_zero()) {
        ModeWord z = x;
        z.coef = z.coef * Scalar(-2) * mod.alpha0();
        z.hbar2 += 1;
        next.push_back(z);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Monomial> monomials_of_weight(const FockModule& mod, int weight2) {
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(int, Label)> rec = [&](int left, Label minl) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int a = minl.color; a <= mod.num_colors(); ++a) {
      const ColorSector& s = mod.sector(a);
      int start = (a == minl.color) ? minl.k2 : 1;
      for (int k2 = std::max(start, 1); k2 <= left; ++k2) {
        if ((k2 % 2 != 0) != s.half_integer) continue;
        cur.push_back({a, k2});
        rec(left - k2, {a, k2});
        cur.pop_back();
      }
    }
  };
  rec(weight2, {1, 1});
  return out;
}

}  // namespace gv
