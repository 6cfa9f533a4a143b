#include <catch_amalgamated.hpp>

#include "gv/errors.hpp"
#include "gv/io.hpp"
#include "gv/verify.hpp"

using namespace gv;
using nlohmann::json;

namespace {
const Scalar T = Scalar::var(TVar);

FgnTable solve(const AlgebraSpec& spec, int E, int workers = 1) {
  NormalForm nf = build_normal_form(spec, T, solve_weight_cap(spec, E, -1));
  SolveOptions o;
  o.max_euler = E;
  o.workers = workers;
  return solve_fgn(nf, o);
}
}  // namespace

TEST_CASE("run config validation", "[io]") {
  RunConfig c;
  CHECK(c.spec().rank == 2);
  CHECK(c.t_value() == T);
  c.t = "3/6";
  CHECK(c.t_value() == Scalar(mpq_class(1, 2)));
  c.t = "x";
  CHECK_THROWS_AS(c.t_value(), std::invalid_argument);

  c.q = {"1", "2", "3"};
  CHECK_THROWS_AS(c.spec(), std::invalid_argument);
  c.q = {"1", "1"};
  CHECK_THROWS_AS(c.spec(), DegenerateParameters);
  c.q = {"1/2", "-3"};
  CHECK(c.spec().Q[1] == Scalar(-3));

  c.q.clear();
  c.family = Family::B;
  c.generic = true;
  CHECK_THROWS_AS(c.spec(), std::invalid_argument);
}

TEST_CASE("F-table JSON round trip", "[io]") {
  RunConfig cfg;
  cfg.generic = true;
  cfg.max_euler = 4;
  FgnTable t = solve(cfg.spec(), 4);
  REQUIRE(t.entries.size() > 5);

  json j = table_json(t, cfg, "airy");
  CHECK(j["schema"] == "gv-fgn-table");
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["config"]["level"] == "generic");
  CHECK(j["entries"].size() == t.entries.size());
  CHECK_FALSE(j["entries"][0].contains("labels_pretty"));

  FgnTable back = table_from_json(json::parse(j.dump()));
  CHECK(back == t);
  CHECK(back.weight_cap == t.weight_cap);
  CHECK(back.max_euler == t.max_euler);

  // Pretty output adds fields but carries the same doubled integers.
  cfg.pretty = true;
  json p = table_json(t, cfg, "airy");
  CHECK(p["entries"][0]["g2"] == j["entries"][0]["g2"]);
  CHECK(p["entries"][0].contains("labels_pretty"));
  CHECK(table_from_json(p) == t);

  j["schema"] = "something-else";
  CHECK_THROWS_AS(table_from_json(j), std::invalid_argument);
}

TEST_CASE("output is deterministic across worker counts", "[io]") {
  RunConfig cfg;
  cfg.rank = 3;
  cfg.max_euler = 3;
  std::string a = table_json(solve(cfg.spec(), 3, 1), cfg, "airy").dump();
  std::string b = table_json(solve(cfg.spec(), 3, 4), cfg, "airy").dump();
  CHECK(a == b);
}

TEST_CASE("free energy CSV and instanton JSON", "[io]") {
  RunConfig cfg;
  cfg.d_max = 1;
  cfg.h_max = 2;
  AlgebraSpec spec = cfg.spec();
  int E = phi_required_euler(2, 1, 2);
  NormalForm nf = build_normal_form(spec, T, solve_weight_cap(spec, E, 2));
  SolveOptions o;
  o.max_euler = E;
  o.weight_margin = 2;
  ZSeries z = instanton_z(phi_from_fgn(solve_fgn(nf, o), 1, 2), 1, 2);

  // Lambda^{2r}: log z = hbar^{-1} * 2/(Q_2 - Q_1)^2 and nothing else at r = 2.
  Scalar want = Scalar(2) * (Scalar::var(Q2) - Scalar::var(Q1)).pow(2).inverse();
  std::string csv = free_energy_csv(z, false);
  CHECK(csv == "h2,lambda,value\n0,2," + want.str() + "\n");
  CHECK(free_energy_csv(z, true) == csv);

  json j = z_json(z, cfg, false);
  CHECK(j["schema"] == "gv-instanton");
  REQUIRE(j["free_energy"].size() == 1);
  CHECK(j["free_energy"][0]["value"] == want.str());
  CHECK(j["z"][0]["terms"][0]["value"] == "1");
  CHECK(z_json(z, cfg, true).contains("prepotential"));
}

TEST_CASE("verification suites", "[verify]") {
  AlgebraSpec a2 = AlgebraSpec::symbolic(Family::A, 2, false);
  CHECK(check_whittaker(a2, T, 3).pass);
  CHECK(check_tr(a2, T, 3).pass);
  CHECK(check_graphs(a2, 1, 2).pass);
  CHECK(check_degree_one(AlgebraSpec::symbolic(Family::C, 1, false)).pass);
  CheckResult v = check_virasoro(AlgebraSpec::symbolic(Family::D, 2, false));
  CHECK(v.pass);
  CHECK(v.detail.find("central charge 2") != std::string::npos);

  FgnTable t = solve(a2, 3);
  CHECK(check_lemma(a2, T, t).pass);

  SECTION("a corrupted table fails the lemma") {
    auto it = t.entries.begin();
    it->second = it->second * Scalar(2);
    CheckResult r = check_lemma(a2, T, t);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.detail.empty());
  }
  SECTION("a mismatched spec is a failure, not a crash") {
    CheckResult r = check_lemma(AlgebraSpec::symbolic(Family::A, 3, false), T, t);
    CHECK_FALSE(r.pass);
    CHECK(r.detail.find("mismatch") != std::string::npos);
  }
  SECTION("unsupported recursion levels are reported") {
    CheckResult r = check_tr(AlgebraSpec::symbolic(Family::A, 2, true), T, 2);
    CHECK_FALSE(r.pass);
  }
}
