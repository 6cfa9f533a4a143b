#include <catch_amalgamated.hpp>

#include <random>

#include "gv/fock.hpp"

using namespace gv;

namespace {
Scalar S(const char* s) { return Scalar::parse(s); }

FockModule a_module(int r, bool generic) {
  std::vector<ColorSector> cs;
  for (int a = 1; a <= r; ++a) cs.push_back({false, true, Scalar::var(a - 1)});
  return FockModule(cs, generic ? Scalar::var(Alpha0) : Scalar());
}

// Two integer colours plus one half-integer colour without zero mode.
FockModule mixed_module() {
  return FockModule({{false, true, S("Q_1")}, {false, true, S("Q_2")}, {true, false, Scalar()}}, S("alpha0"));
}

GradedSeries hb(int h2, const Scalar& c) {
  GradedSeries g;
  g.add(h2, 0, c);
  return g;
}

FockState random_state(const FockModule& mod, std::mt19937& rng, int max_weight2) {
  std::uniform_int_distribution<int> coef(-3, 3), h(0, 2);
  FockState s;
  for (int w = 0; w <= max_weight2; ++w)
    for (const auto& m : monomials_of_weight(mod, w))
      if (coef(rng) > 0) s.add(m, h(rng), 0, Scalar(coef(rng)) + Scalar::var(TVar));
  return s;
}

ModeWord word(std::initializer_list<Label> ls) { return ModeWord{Scalar(1), 0, ls}; }
}  // namespace

TEST_CASE("apply_mode follows the free-field representation") {
  FockModule mod = a_module(2, false);
  FockState one = FockState::vacuum();
  CHECK(apply_mode(mod, {1, -4}, one) == FockState::monomial({{1, 4}}, GradedSeries::constant(2)));
  CHECK(apply_mode(mod, {1, 0}, one) == one * S("Q_1"));
  FockState ab = apply_mode(mod, {1, 2}, apply_mode(mod, {1, -2}, one));
  FockState ba = apply_mode(mod, {1, -2}, apply_mode(mod, {1, 2}, one));
  CHECK(ab - ba == FockState::monomial({}, hb(2, 1)));
  CHECK_THROWS_AS(apply_mode(mod, {1, 1}, one), std::invalid_argument);
  FockModule mix = mixed_module();
  CHECK_THROWS_AS(apply_mode(mix, {3, 0}, one), std::invalid_argument);
  CHECK_NOTHROW(apply_mode(mix, {3, -1}, one));
  // generic level zero mode Q_1 - hbar^{1/2} alpha0
  FockState z = apply_mode(a_module(2, true), {1, 0}, one);
  CHECK(z.coeff({}).get(0, 0) == S("Q_1"));
  CHECK(z.coeff({}).get(1, 0) == S("-alpha0"));
}

TEST_CASE("bounded modules drop, unbounded modules refuse") {
  FockModule mod = a_module(1, false);
  mod.max_xdeg = 1;
  FockState x = apply_mode(mod, {1, -2}, FockState::vacuum());
  CHECK_THROWS_AS(apply_mode(mod, {1, -2}, x), TruncationError);
  mod.bounded = true;
  CHECK(apply_mode(mod, {1, -2}, x).is_zero());
}

TEST_CASE("apply_word composes right to left") {
  FockModule mod = a_module(2, false);
  FockState one = FockState::vacuum();
  CHECK(apply_word(mod, word({}), one) == one);
  CHECK(apply_word(mod, word({{1, 2}, {1, -2}}), one) == FockState::monomial({}, hb(2, 1)));
  CHECK(apply_word(mod, word({{1, -2}, {1, 2}}), one).is_zero());
}

TEST_CASE("normal_order examples") {
  FockModule mod = a_module(2, false);
  NOPoly p = normal_order(mod, word({{1, 2}, {1, -2}}));
  NOPoly expect;
  expect.add({0, {{1, -2}}, {{1, 2}}}, 1);
  expect.add({2, {}, {}}, 1);
  CHECK(p == expect);
  NOPoly q = normal_order(mod, word({{1, 2}, {2, -2}}));
  NOPoly e2;
  e2.add({0, {{2, -2}}, {{1, 2}}}, 1);
  CHECK(q == e2);
  // J_2 J_1 J_{-1} J_{-2}: four contraction terms besides the fully normal one
  NOPoly r = normal_order(mod, word({{1, 4}, {1, 2}, {1, -2}, {1, -4}}));
  CHECK(r.size() == 4);
  std::mt19937 rng(1);
  for (int i = 0; i < 5; ++i) {
    FockState s = random_state(mod, rng, 8);
    CHECK(apply(mod, r, s) == apply_word(mod, word({{1, 4}, {1, 2}, {1, -2}, {1, -4}}), s));
  }
}

TEST_CASE("normal ordering preserves the action on random words") {
  FockModule mod = mixed_module();
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> col(1, 3), k(-3, 3);
  for (int i = 0; i < 30; ++i) {
    ModeWord w;
    w.coef = S("T + 1");
    int len = 1 + i % 4;
    for (int j = 0; j < len; ++j) {
      int c = col(rng), kk = k(rng);
      int k2 = (c == 3) ? 2 * kk + (kk >= 0 ? 1 : -1) : 2 * kk;
      w.modes.push_back({c, k2});
    }
    NOPoly p = normal_order(mod, w);
    FockState s = random_state(mod, rng, 6);
    CHECK(apply(mod, p, s) == apply_word(mod, w, s));
  }
}

TEST_CASE("Heisenberg commutation relations on a basis") {
  FockModule mod = mixed_module();
  std::vector<Label> labels;
  for (int k2 = -6; k2 <= 6; k2 += 2)
    for (int c = 1; c <= 2; ++c) labels.push_back({c, k2});
  for (int k2 = -5; k2 <= 5; k2 += 2) labels.push_back({3, k2});
  for (int w = 0; w <= 6; ++w)
    for (const auto& m : monomials_of_weight(mod, w)) {
      FockState s = FockState::monomial(m, GradedSeries::constant(1));
      for (const auto& a : labels)
        for (const auto& b : labels) {
          FockState comm = apply_mode(mod, a, apply_mode(mod, b, s)) - apply_mode(mod, b, apply_mode(mod, a, s));
          FockState expect;
          if (a.color == b.color && a.k2 + b.k2 == 0) expect = s * hb(2, Scalar(mpq_class(a.k2, 2)));
          CHECK(comm == expect);
        }
    }
}

TEST_CASE("pairing values") {
  FockModule mod = a_module(2, false);
  FockState one = FockState::vacuum();
  CHECK(pairing(mod, one, one) == GradedSeries::constant(1));
  FockState x2 = FockState::monomial({{1, 4}}, GradedSeries::constant(1));
  CHECK(pairing(mod, x2, x2) == hb(2, S("1/2")));
  FockState x11 = FockState::monomial({{1, 2}, {1, 2}}, GradedSeries::constant(1));
  CHECK(pairing(mod, x11, x11) == hb(4, 2));
}

TEST_CASE("pairing is symmetric on states built from creation modes") {
  FockModule mod = a_module(2, true);
  std::vector<FockState> basis;
  // J_{-k_1} ... J_{-k_n} |0> for all words of weight <= 3
  for (int w = 1; w <= 3; ++w)
    for (const auto& m : monomials_of_weight(mod, 2 * w)) {
      ModeWord wd;
      for (const auto& l : m) wd.modes.push_back({l.color, -l.k2});
      basis.push_back(apply_word(mod, wd, FockState::vacuum()));
    }
  for (const auto& u : basis)
    for (const auto& v : basis) CHECK(pairing(mod, u, v) == pairing(mod, v, u));
}

TEST_CASE("adjoint property and involution") {
  FockModule mod = a_module(2, true);
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> col(1, 2), k(-2, 2);
  for (int i = 0; i < 25; ++i) {
    ModeWord w;
    w.coef = S("Q_1 + 2");
    int len = 1 + i % 3;
    for (int j = 0; j < len; ++j) w.modes.push_back({col(rng), 2 * k(rng)});
    FockState u = random_state(mod, rng, 6), v = random_state(mod, rng, 6);
    GradedSeries lhs = pairing(mod, u, apply_word(mod, w, v));
    GradedSeries rhs;
    FockState adj_u;
    for (const auto& aw : adjoint(mod, w)) adj_u += apply_word_dual(mod, aw, u);
    rhs = pairing(mod, adj_u, v);
    CHECK(lhs == rhs);
    // iota(iota(X)) acts as X
    FockState twice;
    for (const auto& aw : adjoint(mod, w))
      for (const auto& bw : adjoint(mod, aw)) twice += apply_word(mod, bw, v);
    CHECK(twice == apply_word(mod, w, v));
  }
}
