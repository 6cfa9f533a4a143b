#include "gv/series.hpp"

namespace gv {

GradedSeries GradedSeries::constant(const Scalar& c, std::optional<int> bound) {
  GradedSeries s(bound);
  s.add(0, 0, c);
  return s;
}

void GradedSeries::add(int hbar2, int lambda, const Scalar& c) {
  if (c.is_zero() || (bound_ && hbar2 > *bound_)) return;
  auto [it, fresh] = c_.try_emplace({hbar2, lambda}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

Scalar GradedSeries::get(int hbar2, int lambda) const {
  if (bound_ && hbar2 > *bound_)
    throw TruncationError("graded series: hbar order " + std::to_string(hbar2) + "/2 beyond bound");
  auto it = c_.find({hbar2, lambda});
  return it == c_.end() ? Scalar() : it->second;
}

std::optional<int> GradedSeries::min_hbar2() const {
  std::optional<int> m;
  for (const auto& [k, c] : c_)
    if (!m || k.first < *m) m = k.first;
  return m;
}

GradedSeries GradedSeries::truncated(std::optional<int> bound) const {
  GradedSeries r(bound);
  if (bound_ && (!bound || *bound > *bound_)) r.bound_ = bound_;
  for (const auto& [k, c] : c_) r.add(k.first, k.second, c);
  return r;
}

static std::optional<int> min_opt(std::optional<int> a, std::optional<int> b) {
  if (a && b) return std::min(*a, *b);
  return a ? a : b;
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o) {
  bound_ = min_opt(bound_, o.bound_);
  for (auto it = c_.begin(); it != c_.end();)
    it = (bound_ && it->first.first > *bound_) ? c_.erase(it) : std::next(it);
  for (const auto& [k, c] : o.c_) add(k.first, k.second, c);
  return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o) { return *this += o * Scalar(-1); }

GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
  // a known up to Ba, b known up to Bb: product known up to min(Ba + low(b), Bb + low(a)),
  // low = lowest order that can be nonzero (Bx + 1 for an empty bounded series).
  auto low = [](const GradedSeries& s) -> std::optional<int> {
    if (auto m = s.min_hbar2()) return m;
    if (s.bound_) return *s.bound_ + 1;
    return std::nullopt;
  };
  auto la = low(a), lb = low(b);
  if (!la || !lb) return GradedSeries();  // an exact zero factor
  std::optional<int> bound;
  if (a.bound_) bound = *a.bound_ + *lb;
  if (b.bound_) bound = min_opt(bound, *b.bound_ + *la);
  GradedSeries r(bound);
  for (const auto& [ka, ca] : a.c_)
    for (const auto& [kb, cb] : b.c_) r.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

GradedSeries GradedSeries::operator*(const Scalar& s) const {
  GradedSeries r(bound_);
  for (const auto& [k, c] : c_) r.add(k.first, k.second, c * s);
  return r;
}

std::string GradedSeries::str() const {
  std::string s;
  for (const auto& [k, c] : c_) {
    if (!s.empty()) s += " + ";
    s += "[" + c.str() + "]*hbar^(" + std::to_string(k.first) + "/2)*Lambda^" + std::to_string(k.second);
  }
  return s.empty() ? "0" : s;
}

}  // namespace gv
