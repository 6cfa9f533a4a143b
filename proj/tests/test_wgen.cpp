#include <catch_amalgamated.hpp>

#include <functional>

#include "gv/wgen.hpp"

using namespace gv;

namespace {
Scalar S(const char* s) { return Scalar::parse(s); }

NOPoly single(int color, int k2, const Scalar& c = Scalar(1)) {
  NOPoly p;
  if (k2 < 0)
    p.add(NOKey{0, {{color, k2}}, {}}, c);
  else
    p.add(NOKey{0, {}, {{color, k2}}}, c);
  return p;
}

// Coefficient of prod x_v^{b_v} in prod_u (1 + sum_{v>=u} x_v)^{a_u - a_{u-1} - 1}, by brute force.
mpz_class n_coeff_generating(const std::vector<int>& a, const std::vector<int>& b) {
  int j = static_cast<int>(a.size());
  // polynomial in j variables as map exps -> coeff
  std::map<std::vector<int>, mpz_class> poly{{std::vector<int>(j, 0), 1}};
  for (int u = 0; u < j; ++u) {
    int e = a[u] - (u ? a[u - 1] : 0) - 1;
    for (int rep = 0; rep < e; ++rep) {
      std::map<std::vector<int>, mpz_class> np;
      for (const auto& [ex, c] : poly) {
        np[ex] += c;
        for (int v = u; v < j; ++v) {
          auto e2 = ex;
          ++e2[v];
          np[e2] += c;
        }
      }
      poly = np;
    }
  }
  auto it = poly.find(b);
  return it == poly.end() ? mpz_class(0) : it->second;
}
}  // namespace

TEST_CASE("n_coeff values and generating series") {
  CHECK(n_coeff({1, 2}, {0, 0}) == 1);
  CHECK(n_coeff({2}, {1}) == 1);
  CHECK(n_coeff({3}, {2}) == 1);
  for (int a1 = 1; a1 <= 4; ++a1)
    for (int a2 = a1 + 1; a2 <= 6; ++a2)
      for (int b1 = 0; b1 <= 3; ++b1)
        for (int b2 = 0; b2 <= 3; ++b2) CHECK(n_coeff({a1, a2}, {b1, b2}) == n_coeff_generating({a1, a2}, {b1, b2}));
  for (int b1 = 0; b1 <= 2; ++b1)
    for (int b2 = 0; b2 <= 2; ++b2)
      for (int b3 = 0; b3 <= 2; ++b3)
        CHECK(n_coeff({2, 4, 7}, {b1, b2, b3}) == n_coeff_generating({2, 4, 7}, {b1, b2, b3}));
}

TEST_CASE("derivative mode rule matches differentiating the generating series") {
  // J(z) = sum_n c_n z^{-n-1} with arbitrary c_n; mode m of d^b J is (-1)^b (m+1)...(m+b) c_m.
  LaurentSeries J("z", -40, std::nullopt);
  auto c = [](int n) { return Scalar(n * n + 3 * n + 7); };
  for (int n = -8; n <= 8; ++n) J.set(2 * (-n - 1), c(n));
  for (int b = 0; b <= 3; ++b) {
    LaurentSeries d = J;
    for (int q = 0; q < b; ++q) d = d.derivative();
    for (int m : {-3, 2, 5}) {
      mpq_class w = 1;
      for (int q = 1; q <= b; ++q) w *= -(m + q);
      CHECK(d.at(2 * (-m - 1 - b)) == c(m) * Scalar(w));
    }
  }
  // and the implemented field_mode applies it
  FockModule mod({{false, true, S("Q_1")}});
  NOPoly p = field_mode(mod, Field{{Scalar(1), 0, {{1, 2}}}}, 6, 10);
  CHECK(p == single(1, 6, Scalar(4 * 5)));
}

TEST_CASE("A-type self-dual generators are elementary symmetric in the currents") {
  AlgebraSpec spec = AlgebraSpec::symbolic(Family::A, 2);
  FockModule mod = make_module(spec);
  for (int m = 1; m <= 3; ++m) {
    NOPoly w1 = w_mode(spec, mod, {1}, 2 * m, 8);
    NOPoly e1 = single(1, 2 * m);
    e1.add(single(2, 2 * m));
    CHECK(w1 == e1);
    NOPoly w2 = w_mode(spec, mod, {2}, 2 * m, 8);
    NOPoly e2;
    for (int n = 2 * m - 8; n <= 8; n += 2) {
      NOPoly a, b;
      if (n == 0) a.add(NOKey{}, S("Q_1")); else a = single(1, n);
      if (2 * m - n == 0) b.add(NOKey{}, S("Q_2")); else b = single(2, 2 * m - n);
      if (2 * m - n <= 8) e2.add(a.commuting_product(b));
    }
    CHECK(w2 == e2);
  }
}

TEST_CASE("A-type degree-one generating identity") {
  for (int r : {2, 3})
    for (bool generic : {false, true}) {
      AlgebraSpec spec = AlgebraSpec::symbolic(Family::A, r, generic);
      FockModule mod = make_module(spec);
      for (int m = 1; m <= 3; ++m)
        for (int i = 1; i <= r; ++i) {
          NOPoly p1 = project_degree(w_mode(spec, mod, {i}, 2 * m, 2 * m + 4), 1);
          NOPoly expect;
          for (int a = 1; a <= r; ++a) {
            std::vector<Scalar> others;
            for (int b = 1; b <= r; ++b)
              if (b != a) others.push_back(spec.Q[b - 1]);
            expect.add(single(a, 2 * m, elementary(others, i - 1)));
          }
          CHECK(p1 == expect);
          CHECK(project_degree(w_mode(spec, mod, {i}, 2 * m, 2 * m + 4), 0).is_zero());
        }
    }
  // r = 2 generic: degree-1 part of W^2_m is Q_2 J^1_m + Q_1 J^2_m
  AlgebraSpec spec = AlgebraSpec::symbolic(Family::A, 2, true);
  NOPoly p = project_degree(w_mode(spec, make_module(spec), {2}, 2, 6), 1);
  NOPoly e = single(1, 2, S("Q_2"));
  e.add(single(2, 2, S("Q_1")));
  CHECK(p == e);
}

TEST_CASE("generic-level W^2 for r = 2 has the derivative term") {
  // W^2 = J^1 J^2 + hbar^{1/2} alpha0 d J^2 (N_{(2),(1)} = 1, N_{(1),(1)} = 0)
  AlgebraSpec spec = AlgebraSpec::symbolic(Family::A, 2, true);
  Field f = miura_field(spec, 2);
  REQUIRE(f.size() == 2);
  bool found = false;
  for (const auto& t : f)
    if (t.factors.size() == 1) {
      CHECK(t.factors[0] == FieldFactor{2, 1});
      CHECK(t.coef == S("alpha0"));
      CHECK(t.hbar2 == 1);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("lattice bilinear nu^2 summed over signs is J^2") {
  for (int c = 1; c <= 3; ++c) {
    Field plus = lattice_bilinear_field(c, 1, 2), minus = lattice_bilinear_field(c, -1, 2);
    REQUIRE(plus.size() == 2);  // J^2/2 and dJ/2 (hbar^{1/2})
    std::map<std::vector<FieldFactor>, Scalar> sum;
    for (const auto& t : plus) sum[t.factors] += t.coef;
    for (const auto& t : minus) sum[t.factors] += t.coef;
    CHECK(sum[{{c, 0}, {c, 0}}] == Scalar(1));
    CHECK(sum[{{c, 1}}].is_zero());
  }
  Field w2 = dc_w_field(2, 2);
  REQUIRE(w2.size() == 2);
  for (const auto& t : w2) {
    CHECK(t.coef == Scalar(1));
    CHECK(t.factors.size() == 2);
    CHECK(t.factors[0].color == t.factors[1].color);
  }
  // weight bookkeeping: the nu^2 mode on the vacuum creates weight-2 states
  FockModule mod({{false, true, Scalar()}});
  FockState s = apply(mod, field_mode(mod, dc_w_field(1, 2), -4, 4), FockState::vacuum());
  for (const auto& [m, c] : s.terms()) {
    int w = 0;
    for (const auto& l : m) w += l.k2;
    CHECK(w == 4);
  }
}

TEST_CASE("L_0 = W^2_0 / 2 on x^1_1") {
  AlgebraSpec spec = AlgebraSpec::symbolic(Family::D, 2);
  FockModule mod = make_module(spec);
  NOPoly L0 = w_mode(spec, mod, {2}, 0, 4).scaled(S("1/2"));
  FockState x = FockState::monomial({{1, 2}}, GradedSeries::constant(1));
  FockState y = apply(mod, L0, x);
  GradedSeries e;
  e.add(2, 0, 1);
  e.add(0, 0, S("(Q_1^2 + Q_2^2)/2"));
  CHECK(y == FockState::monomial({{1, 2}}, e));
}

TEST_CASE("D and C degree-one identities") {
  for (int r : {2, 3}) {
    AlgebraSpec spec = AlgebraSpec::symbolic(Family::D, r);
    FockModule mod = make_module(spec);
    Scalar prod(1);
    for (const auto& q : spec.Q) prod *= q;
    for (int m = 1; m <= 3; ++m) {
      for (int d = 2; d <= 2 * r - 2; d += 2) {
        NOPoly e;
        for (int a = 1; a <= r; ++a) e.add(single(a, 2 * m, Scalar(d) * spec.Q[a - 1].pow(d - 1)));
        CHECK(project_degree(w_mode(spec, mod, {d}, 2 * m, 2 * m + 6), 1) == e);
      }
      NOPoly et;
      for (int a = 1; a <= r; ++a) et.add(single(a, 2 * m, prod / spec.Q[a - 1]));
      CHECK(project_degree(w_mode(spec, mod, {r, true}, 2 * m, 2 * m + 6), 1) == et);
    }
  }
  for (int r : {1, 2}) {
    AlgebraSpec spec = AlgebraSpec::symbolic(Family::C, r);
    FockModule mod = make_module(spec);
    Scalar prod(1);
    for (const auto& q : spec.Q) prod *= q;
    for (int m2 : {1, 3, 5}) CHECK(project_degree(w_mode(spec, mod, {r + 1, true}, m2, m2 + 6), 1) == single(r + 1, m2, prod));
    for (int m = 1; m <= 3; ++m)
      for (int d = 2; d <= 2 * r; d += 2) {
        NOPoly e;
        for (int a = 1; a <= r; ++a) e.add(single(a, 2 * m, Scalar(d) * spec.Q[a - 1].pow(d - 1)));
        CHECK(project_degree(w_mode(spec, mod, {d}, 2 * m, 2 * m + 6), 1) == e);
      }
  }
}

TEST_CASE("twisted contraction constants") {
  // R(z1,z2) = 1/(2 w v (w+v)^2) with z1 = w^2, z2 = v^2 equals the half-integer
  // propagator (w^2+v^2)/(2 w v (w^2-v^2)^2) minus 1/(w^2-v^2)^2.
  Scalar w = Scalar::var(Q1), v = Scalar::var(Q2);
  Scalar R = Scalar(1) / (Scalar(2) * w * v * (w + v).pow(2));
  Scalar tw = (w * w + v * v) / (Scalar(2) * w * v * (w * w - v * v).pow(2));
  CHECK(tw - Scalar(1) / (w * w - v * v).pow(2) == R);
  // the closed form of the half-integer propagator: sum_{n in N+1/2} n z1^{-n-1} z2^{n-1}
  // = sum_j (j+1/2) w^{-2j-3} v^{2j-1}; check against the expansion in v at w = 1.
  LaurentSeries series("v", -2, 30);
  for (int j = 0; 2 * j - 1 <= 15; ++j) series.set(2 * (2 * j - 1), Scalar(mpq_class(2 * j + 1, 2)));
  // (1+v^2)/(2 v (1-v^2)^2) = (1/2)(v^{-1} + v) sum_k (k+1) v^{2k}
  LaurentSeries closed("v", -2, 30);
  for (int k = 0; 2 * k - 1 <= 15; ++k) {
    closed.add(2 * (2 * k - 1), Scalar(mpq_class(k + 1, 2)));
    closed.add(2 * (2 * k + 1), Scalar(mpq_class(k + 1, 2)));
  }
  CHECK(series == closed);
  // c_{b1,b2} = d^{b1}_{z1} d^{b2}_{z2} R at z1 = z2 = 1, with d_z = (1/2w) d_w
  auto dz = [](const Scalar& f, int var) {
    Scalar x = Scalar::var(var);
    Poly n = f.num(), d = f.den();
    Scalar df = (Scalar(n.derivative(var)) * Scalar(d) - Scalar(n) * Scalar(d.derivative(var))) / Scalar(d * d);
    return df / (Scalar(2) * x);
  };
  for (int b1 = 0; b1 <= 3; ++b1)
    for (int b2 = 0; b2 <= 3; ++b2) {
      Scalar f = R;
      for (int q = 0; q < b1; ++q) f = dz(f, Q1);
      for (int q = 0; q < b2; ++q) f = dz(f, Q2);
      Scalar at1 = f.subs(Q1, mpq_class(1)).subs(Q2, mpq_class(1));
      CHECK(at1 == Scalar(twist_contraction(b1, b2)));
    }
  CHECK(twist_contraction(0, 0) == mpq_class(1, 8));
}

TEST_CASE("half-integer sector conformal weight") {
  // L_0 = W^2_0/2 of one twisted boson on the vacuum is hbar/16
  FockModule mod({{true, false, Scalar()}});
  NOPoly L0 = field_mode(mod, twisted_expand(dc_w_field(1, 2), 1), 0, 6).scaled(S("1/2"));
  FockState y = apply(mod, L0, FockState::vacuum());
  GradedSeries e;
  e.add(2, 0, S("1/16"));
  CHECK(y == FockState::monomial({}, e));
}

TEST_CASE("twisted product agrees with point-split ordered modes") {
  // :J J:_VOA(z) for the half-integer sector equals lim [J(z1) J(z2) - hbar/(z1-z2)^2].
  // On the vacuum, the z^{-2} (mode 0) coefficient of the ordered product minus the
  // untwisted singular part is the regular value hbar R(z,z) = hbar/(8 z^2), i.e. the
  // constant in twisted_expand.
  Field f = twisted_expand(Field{{Scalar(1), 0, {{1, 0}, {1, 0}}}}, 1);
  Scalar constant;
  for (const auto& t : f)
    if (t.factors.empty()) {
      constant = t.coef;
      CHECK(t.hbar2 == 2);
    }
  CHECK(constant == S("1/8"));
  // compare the nonconstant part against ordered apply_word on random states
  FockModule mod({{true, false, Scalar()}});
  for (int m2 : {-4, -2, 0, 2, 4}) {
    NOPoly p = field_mode(mod, f, m2, 12);
    for (const auto& mono : std::vector<Monomial>{{}, {{1, 1}}, {{1, 3}, {1, 1}}}) {
      FockState s = FockState::monomial(mono, GradedSeries::constant(1));
      FockState direct;
      for (int n = -13; n <= 13; n += 2) {
        int k = m2 - n;
        if (k > 12 || n > 12 || k < -13) continue;
        std::vector<Label> word = n < 0 ? std::vector<Label>{{1, n}, {1, k}} : std::vector<Label>{{1, k}, {1, n}};
        direct += apply_word(mod, ModeWord{Scalar(1), 0, word}, s);
      }
      if (m2 == 0) {
        GradedSeries g;
        g.add(2, 0, S("1/8"));
        direct += FockState::monomial(mono, g);
      }
      CHECK(apply(mod, p, s) == direct);
    }
  }
}

TEST_CASE("B-type generator structure") {
  // same-colour contraction: <A(z1) B(z2)> = hbar/(z1+z2)^2, so the zero-mode vacuum
  // coefficient of J_k B-partner J_{-k} is hbar k (-1)^{k+1}
  FockModule mod({{false, true, S("Q_1")}});
  for (int k = 1; k <= 4; ++k) {
    ModeWord w{Scalar(1), 0, {{1, 2 * k}, {1, -2 * k}}};
    // B_{-k} coefficient is (-1)^{-k+1} = (-1)^{k+1}
    w.coef = Scalar((k % 2) ? 1 : -1);
    FockState v = apply_word(mod, w, FockState::vacuum());
    GradedSeries e;
    e.add(2, 0, Scalar(k) * Scalar((k % 2) ? 1 : -1));
    CHECK(v == FockState::monomial({}, e));
  }
  // r = 1: W^2 zero mode contains the contraction constant hbar/4 * 2^{-2}
  AlgebraSpec s1 = AlgebraSpec::symbolic(Family::B, 1);
  NOPoly w2 = w_mode(s1, make_module(s1), {2}, 0, 4);
  CHECK(w2.terms().at(NOKey{2, {}, {}}) == S("1/16"));
  // degree-one part of odd generators
  for (int r : {1, 2, 3}) {
    AlgebraSpec spec = AlgebraSpec::symbolic(Family::B, r);
    FockModule md = make_module(spec);
    std::vector<Scalar> Q2r;
    for (int b = 0; b < r; ++b) Q2r.push_back(spec.Q[b]);
    for (int b = r - 1; b >= 0; --b) Q2r.push_back(-spec.Q[b]);
    for (int i = 1; i <= r; ++i)
      for (int m2 : {1, 3}) {
        NOPoly e;
        for (int b = 1; b <= r; ++b) {
          auto drop = [&](int idx) {
            std::vector<Scalar> v;
            for (int c = 0; c < 2 * r; ++c)
              if (c != idx) v.push_back(Q2r[c]);
            return v;
          };
          Scalar c = (elementary(drop(b - 1), 2 * i - 2) + elementary(drop(2 * r - b), 2 * i - 2)) /
                     Scalar(mpz_class(mpz_class(1) << (2 * i - 1)));
          e.add(single(b, 2 * m2, c));
        }
        CHECK(project_degree(w_mode(spec, md, {2 * i - 1}, m2, 2 * m2 + 4), 1) == e);
      }
    for (int i = 1; i <= r; ++i)
      for (int m2 : {2, 4}) {
        NOPoly e;
        for (int b = 1; b <= r; ++b) {
          auto drop = [&](int idx) {
            std::vector<Scalar> v;
            for (int c = 0; c < 2 * r; ++c)
              if (c != idx) v.push_back(Q2r[c]);
            return v;
          };
          Scalar c = (elementary(drop(b - 1), 2 * i - 1) - elementary(drop(2 * r - b), 2 * i - 1)) /
                     Scalar(mpz_class(mpz_class(1) << (2 * i)));
          e.add(single(b, 2 * m2, c));
        }
        CHECK(project_degree(w_mode(spec, md, {2 * i}, m2, 2 * m2 + 4), 1) == e);
      }
  }
  CHECK_THROWS_AS(w_mode(s1, make_module(s1), {1}, 2, 4), std::invalid_argument);
}

TEST_CASE("parameter hypotheses are enforced") {
  CHECK_THROWS_AS(AlgebraSpec::with_q(Family::A, 2, {Scalar(1), Scalar(1)}), DegenerateParameters);
  CHECK_THROWS_AS(AlgebraSpec::with_q(Family::D, 2, {Scalar(1), Scalar(-1)}), DegenerateParameters);
  CHECK_THROWS_AS(AlgebraSpec::with_q(Family::B, 2, {Scalar(0), Scalar(2)}), DegenerateParameters);
  CHECK_NOTHROW(AlgebraSpec::with_q(Family::A, 2, {Scalar(1), Scalar(-1)}));
}

TEST_CASE("type D nu^2 modes close into Virasoro") {
  // central charge frozen from the first run: c = r (r free bosons)
  for (int r = 2; r <= 3; ++r) {
    VirasoroReport rep = virasoro_closure(AlgebraSpec::symbolic(Family::D, r), 3, 4);
    INFO("r = " << r);
    CHECK(rep.central_charge == Scalar(r));
    CHECK(rep.violations.empty());
    CHECK(rep.checks > 100);
  }
  // explicit Q: the zero modes drop out of the central term
  VirasoroReport rep = virasoro_closure(AlgebraSpec::with_q(Family::D, 2, {Scalar(5), Scalar(mpq_class(2, 7))}), 2, 6);
  CHECK(rep.central_charge == Scalar(2));
  CHECK(rep.violations.empty());
  CHECK_THROWS_AS(virasoro_closure(AlgebraSpec::symbolic(Family::A, 2), 3, 4), std::invalid_argument);
}

TEST_CASE("degree-one identity report") {
  for (int r : {2, 3}) CHECK(degree_one_violations(AlgebraSpec::symbolic(Family::D, r), 3).empty());
  for (int r : {1, 2}) CHECK(degree_one_violations(AlgebraSpec::symbolic(Family::C, r), 3).empty());
  CHECK_THROWS_AS(degree_one_violations(AlgebraSpec::symbolic(Family::B, 2), 2), std::invalid_argument);
}
