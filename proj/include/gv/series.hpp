#pragma once
// hbar/Lambda-graded series and formal Laurent series with explicit windows.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "gv/errors.hpp"
#include "gv/scalar.hpp"

namespace gv {

// Sum of c * hbar^(hbar2/2) * Lambda^lambda. Entries above the bound (in hbar2
// units) are unknown; `bound == nullopt` means the series is exact.
class GradedSeries {
 public:
  using Key = std::pair<int, int>;  // (hbar2, lambda)
  GradedSeries() = default;
  explicit GradedSeries(std::optional<int> bound) : bound_(bound) {}
  static GradedSeries constant(const Scalar& c, std::optional<int> bound = std::nullopt);

  void add(int hbar2, int lambda, const Scalar& c);
  Scalar get(int hbar2, int lambda) const;
  const std::map<Key, Scalar>& coeffs() const { return c_; }
  std::optional<int> bound() const { return bound_; }
  bool is_zero() const { return c_.empty(); }
  std::optional<int> min_hbar2() const;
  GradedSeries truncated(std::optional<int> bound) const;

  GradedSeries& operator+=(const GradedSeries& o);
  GradedSeries& operator-=(const GradedSeries& o);
  friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
  friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
  friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
  GradedSeries operator*(const Scalar& s) const;
  bool operator==(const GradedSeries& o) const { return c_ == o.c_; }
  std::string str() const;

 private:
  std::map<Key, Scalar> c_;
  std::optional<int> bound_;
};

inline std::ostream& operator<<(std::ostream& os, const GradedSeries& s) { return os << s.str(); }

inline Scalar scale_by(const Scalar& c, const mpq_class& q) { return c * Scalar(q); }

// Formal Laurent series sum c_e * z^(e2/2). Coefficients below `lo` are zero,
// coefficients above `hi` are unknown (hi == nullopt: exact, finitely supported).
template <class C>
class Laurent {
 public:
  Laurent() = default;
  Laurent(std::string tag, int lo, std::optional<int> hi) : tag_(std::move(tag)), lo_(lo), hi_(hi) {}

  static Laurent monomial(std::string tag, int e2, const C& c) {
    Laurent r(std::move(tag), e2, std::nullopt);
    r.set(e2, c);
    return r;
  }

  const std::string& tag() const { return tag_; }
  int lo() const { return lo_; }
  std::optional<int> hi() const { return hi_; }
  const std::map<int, C>& coeffs() const { return c_; }
  bool known(int e2) const { return !hi_ || e2 <= *hi_; }

  void set(int e2, const C& c) {
    if (e2 < lo_) throw std::logic_error("Laurent: exponent below window");
    if (!known(e2)) throw TruncationError("Laurent: exponent above window");
    if (is_zero_value(c))
      c_.erase(e2);
    else
      c_[e2] = c;
  }
  void add(int e2, const C& c) {
    if (is_zero_value(c)) return;
    if (e2 < lo_) throw std::logic_error("Laurent: exponent below window");
    if (!known(e2)) return;  // silently outside the known window: caller bounded it
    auto it = c_.find(e2);
    if (it == c_.end()) {
      c_.emplace(e2, c);
    } else {
      it->second = it->second + c;
      if (is_zero_value(it->second)) c_.erase(it);
    }
  }
  C at(int e2) const {
    if (!known(e2))
      throw TruncationError("Laurent series '" + tag_ + "': coefficient of exponent " + std::to_string(e2) +
                            "/2 requested beyond window edge " + std::to_string(*hi_) + "/2");
    auto it = c_.find(e2);
    return it == c_.end() ? C() : it->second;
  }

  Laurent operator+(const Laurent& o) const {
    if (o.tag_.empty() && o.c_.empty()) return *this;
    if (tag_.empty() && c_.empty()) return o;
    check_tag(o);
    Laurent r(tag_, std::min(lo_, o.lo_), min_hi(hi_, o.hi_));
    for (const auto& [e, c] : c_)
      if (r.known(e)) r.add(e, c);
    for (const auto& [e, c] : o.c_)
      if (r.known(e)) r.add(e, c);
    return r;
  }
  Laurent operator-() const {
    Laurent r = *this;
    for (auto& [e, c] : r.c_) c = -c;
    return r;
  }
  Laurent operator-(const Laurent& o) const { return *this + (-o); }
  Laurent operator*(const Laurent& o) const {
    check_tag(o);
    std::optional<int> hi;
    if (hi_ && o.hi_)
      hi = std::min(lo_ + *o.hi_, o.lo_ + *hi_);
    else if (hi_)
      hi = o.lo_ + *hi_;
    else if (o.hi_)
      hi = lo_ + *o.hi_;
    Laurent r(tag_, lo_ + o.lo_, hi);
    for (const auto& [ea, ca] : c_)
      for (const auto& [eb, cb] : o.c_)
        if (r.known(ea + eb)) r.add(ea + eb, ca * cb);
    return r;
  }
  Laurent scaled(const C& s) const {
    Laurent r = *this;
    r.c_.clear();
    for (const auto& [e, c] : c_) r.add(e, c * s);
    return r;
  }
  // Multiply by z^(d2/2).
  Laurent shifted(int d2) const {
    Laurent r(tag_, lo_ + d2, hi_ ? std::optional<int>(*hi_ + d2) : std::nullopt);
    for (const auto& [e, c] : c_) r.c_.emplace(e + d2, c);
    return r;
  }
  Laurent derivative() const {
    Laurent r(tag_, lo_ - 2, hi_ ? std::optional<int>(*hi_ - 2) : std::nullopt);
    for (const auto& [e, c] : c_)
      if (e != 0) r.add(e - 2, scale_by(c, mpq_class(e, 2)));
    return r;
  }
  // Compares coefficients only, so an untagged default value acts as zero.
  bool operator==(const Laurent& o) const { return c_ == o.c_; }

 private:
  std::string tag_;
  int lo_ = 0;
  std::optional<int> hi_;
  std::map<int, C> c_;

  static bool is_zero_value(const C& c) { return c == C(); }
  static std::optional<int> min_hi(std::optional<int> a, std::optional<int> b) {
    if (a && b) return std::min(*a, *b);
    return a ? a : b;
  }
  void check_tag(const Laurent& o) const {
    if (tag_ != o.tag_) throw std::invalid_argument("Laurent: mismatched variable tags '" + tag_ + "' vs '" + o.tag_ + "'");
  }
};

template <class C>
Laurent<C> series_mul(const Laurent<C>& a, const Laurent<C>& b) {
  return a * b;
}

template <class C>
C laurent_residue(const Laurent<C>& a) {
  if (!a.known(-2))
    throw TruncationError("residue: window of '" + a.tag() + "' ends before exponent -1");
  return a.at(-2);
}

template <class C>
Laurent<C> scale_by(const Laurent<C>& s, const mpq_class& q) {
  Laurent<C> r(s.tag(), s.lo(), s.hi());
  for (const auto& [e, c] : s.coeffs()) r.add(e, scale_by(c, q));
  return r;
}

using LaurentSeries = Laurent<Scalar>;

}  // namespace gv
