#include "gv/verify.hpp"

#include <chrono>
#include <sstream>

#include "gv/errors.hpp"

namespace gv {

namespace {

// Runs body, timing it and turning exceptions into failures.
CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = true;
    body(r);
  } catch (const TruncationError& e) {
    r.pass = false;
    r.truncated = true;
    r.detail = std::string("truncation: ") + e.what();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void fail(CheckResult& r, const std::string& why) {
  if (r.pass) r.detail = why;
  r.pass = false;
}

FgnTable solve(const AlgebraSpec& spec, const Scalar& T, int E, int margin, bool reverse = false, int workers = 0) {
  NormalForm nf = build_normal_form(spec, T, solve_weight_cap(spec, E, margin));
  SolveOptions o;
  o.max_euler = E;
  o.weight_margin = margin;
  o.reverse_schedule = reverse;
  o.workers = workers;
  return solve_fgn(nf, o);
}

std::string spec_str(const AlgebraSpec& spec) {
  return family_name(spec.family) + std::to_string(spec.rank) + (spec.generic_level ? " generic" : " self-dual");
}

}  // namespace

int whittaker_margin(const AlgebraSpec& spec, int max_euler, int max_mode) {
  if (spec.family != Family::A) return 4;
  return std::max(2 * max_mode - vanishing_weight(spec, max_euler + 1), 2);
}

namespace {

void whittaker_on(const AlgebraSpec& spec, const Scalar& T, const FgnTable& tab, int max_mode, CheckResult& r) {
  if (tab.family != spec.family || tab.rank != spec.rank) throw std::invalid_argument("table/spec mismatch");
  NormalForm nf = build_normal_form(spec, T, tab.weight_cap);
  if (tab.entries.empty()) fail(r, "empty table");
  int checked = 0;
  for (const auto& g : generators(spec)) {
    bool half = half_integer_modes(spec, g);
    // A: every mode up to max_mode, even past the cap (that is a truncation error).
    for (int m2 = half ? 1 : 2;
         spec.family == Family::A ? m2 <= 2 * max_mode : label_of_mode(spec, m2) <= tab.weight_cap; m2 += 2) {
      auto res = whittaker_residual(nf, tab, g, m2);
      ++checked;
      if (!res.empty())
        fail(r, gen_str(g) + "_" + std::to_string(m2) + "/2: residual at g=" + std::to_string(res[0].g2) +
                    "/2 = " + res[0].value.str());
    }
  }
  if (r.pass)
    r.detail = std::to_string(checked) + " W-modes, " + std::to_string(tab.entries.size()) + " entries, weight cap " +
               std::to_string(tab.weight_cap);
}

}  // namespace

CheckResult check_whittaker(const AlgebraSpec& spec, const Scalar& T, int max_euler, int max_mode) {
  return timed("whittaker " + spec_str(spec) + " E<=" + std::to_string(max_euler), [&](CheckResult& r) {
    whittaker_on(spec, T, solve(spec, T, max_euler, whittaker_margin(spec, max_euler, max_mode)), max_mode, r);
  });
}

CheckResult check_whittaker_table(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table, int max_mode) {
  return timed("whittaker " + spec_str(spec) + " (given table, E<=" + std::to_string(table.max_euler) + ")",
               [&](CheckResult& r) { whittaker_on(spec, T, table, max_mode, r); });
}

CheckResult check_lemma(const AlgebraSpec& spec, const Scalar& T, const FgnTable& table) {
  return timed("lemma " + spec_str(spec), [&](CheckResult& r) {
    if (spec.family != Family::A) throw std::invalid_argument("the structural lemma concerns type A");
    if (table.family != spec.family || table.rank != spec.rank) throw std::invalid_argument("table/spec mismatch");
    auto bad = lemma_checks(spec, T, table);
    if (!bad.empty()) fail(r, bad.front() + (bad.size() > 1 ? " (+" + std::to_string(bad.size() - 1) + " more)" : ""));
    else r.detail = std::to_string(table.entries.size()) + " entries";
  });
}

CheckResult check_tr(const AlgebraSpec& spec, const Scalar& T, int max_euler) {
  return timed("tr==airy " + spec_str(spec) + " E<=" + std::to_string(max_euler), [&](CheckResult& r) {
    TrOptions o;
    o.max_euler = max_euler;
    TrResult tr = solve_tr(SpectralCurve::make(spec, T), o);
    FgnTable airy = solve(spec, T, max_euler, -1);
    for (const auto& [k, v] : airy.entries)
      if (tr.table.get(k) != v) fail(r, key_str(k) + ": airy " + v.str() + ", recursion " + tr.table.get(k).str());
    for (const auto& [k, v] : tr.table.entries)
      if (airy.get(k) != v) fail(r, key_str(k) + ": airy 0, recursion " + v.str());
    if (r.pass)
      r.detail = std::to_string(airy.entries.size()) + " entries equal; " + std::to_string(tr.symmetry_checks) +
                 " symmetry checks, " + std::to_string(tr.loop_checks) + " loop equations";
  });
}

CheckResult check_graphs(const AlgebraSpec& spec, int max_d, int max_h2) {
  return timed("graphs==oracle " + spec_str(spec) + " d<=" + std::to_string(max_d) + " h2<=" + std::to_string(max_h2),
               [&](CheckResult& r) {
                 const Scalar T = Scalar::var(TVar);
                 int E = phi_required_euler(spec.rank, max_d, max_h2);
                 int margin = std::max(2 * max_d - vanishing_weight(spec, E + 1), 2);
                 FgnTable table = solve(spec, T, E, margin);
                 PhiTable phi = phi_from_fgn(table, max_d, max_h2);
                 ZSeries z = instanton_z(phi, max_d, max_h2);
                 ZSeries o = pairing_oracle_z(table, max_d, max_h2);
                 std::string diff = compare_z(z, o);
                 if (!diff.empty()) fail(r, "graph sum vs oracle: " + diff);
                 for (int l = 0; l <= 2 * max_d; ++l)
                   if (z.log_z[l].get(-2, l) != z.trees.get(-2, l))
                     fail(r, "hbar^-1 part of log z differs from the tree sum at Lambda^(r*" + std::to_string(l) + ")");
                 std::ostringstream os;
                 os << z.graphs << " graphs";
                 if (max_d >= 1) {
                   Scalar want;
                   for (int a = 1; a <= spec.rank; ++a) {
                     Scalar p(1);
                     for (int b = 1; b <= spec.rank; ++b)
                       if (b != a) p *= (spec.Q[b - 1] - spec.Q[a - 1]).pow(2);
                     want += p.inverse();
                   }
                   Scalar got = z.z_coeff(-2, 2);
                   if (got != want) fail(r, "Lambda^2r hbar^-1 coefficient " + got.str() + ", expected " + want.str());
                   if (!spec.generic_level) {
                     for (const auto& [k, v] : z.z[2].coeffs())
                       if (k.first != -2) fail(r, "Lambda^2r coefficient has an hbar^" + std::to_string(k.first) + "/2 term");
                     os << "; Lambda^2r = hbar^-1 (" << want.str() << ")";
                   } else {
                     os << "; Lambda^2r hbar^-1 term matches (alpha0 corrections above it)";
                   }
                 }
                 if (r.pass) r.detail = os.str();
               });
}

CheckResult check_virasoro(const AlgebraSpec& spec) {
  return timed("virasoro " + spec_str(spec), [&](CheckResult& r) {
    VirasoroReport rep = virasoro_closure(spec, 3, 4);
    if (!rep.violations.empty()) fail(r, rep.violations.front());
    else r.detail = "central charge " + rep.central_charge.str() + ", " + std::to_string(rep.checks) + " brackets";
  });
}

CheckResult check_degree_one(const AlgebraSpec& spec) {
  return timed("degree-one " + spec_str(spec), [&](CheckResult& r) {
    auto bad = degree_one_violations(spec, 3);
    if (!bad.empty()) fail(r, bad.front());
    else r.detail = "pi_1 identities hold for modes <= 3";
  });
}

CheckResult check_robustness(const AlgebraSpec& spec, const Scalar& T, int max_euler, std::size_t samples) {
  return timed("robustness " + spec_str(spec) + " E<=" + std::to_string(max_euler), [&](CheckResult& r) {
    FgnTable a = solve(spec, T, max_euler, -1, false, 1);
    if (!(a == solve(spec, T, max_euler, -1, true, 1))) fail(r, "reverse schedule changed the table");
    if (!(a == solve(spec, T, max_euler, -1, false, 3))) fail(r, "three workers changed the table");

    const std::vector<mpq_class> qv{mpq_class(3, 2), mpq_class(-5), mpq_class(7), mpq_class(11, 3)};
    std::vector<Scalar> q;
    for (int i = 0; i < spec.rank; ++i) q.push_back(Scalar(qv[i]));
    FgnTable b = solve(AlgebraSpec::with_q(spec.family, spec.rank, q, spec.generic_level), T, max_euler, -1);
    std::map<FgnKey, Scalar> subs;
    for (const auto& [k, v] : a.entries) {
      Scalar s = v;
      for (int i = 0; i < spec.rank; ++i) s = s.subs(Q1 + i, qv[i]);
      if (!s.is_zero()) subs[k] = s;
    }
    if (subs != b.entries) fail(r, "explicit specialisation differs from the substituted symbolic table");

    std::vector<FgnKey> keys;
    std::size_t n = a.entries.size(), step = std::max<std::size_t>(1, n / std::max<std::size_t>(samples, 1)), i = 0;
    for (const auto& [k, v] : a.entries)
      if (i++ % step == 0 && keys.size() < samples) keys.push_back(k);
    Resymbolized res = resymbolize(spec.family, spec.rank, spec.generic_level, max_euler, keys);
    if (!res.check_failures.empty()) fail(r, res.check_failures.front());
    for (const auto& k : keys)
      if (res.entries.at(k) != a.get(k)) fail(r, "re-symbolised " + key_str(k) + " = " + res.entries.at(k).str());
    if (r.pass)
      r.detail = std::to_string(a.entries.size()) + " entries; " + std::to_string(keys.size()) +
                 " re-symbolised from " + std::to_string(res.specializations) + " specialisations";
  });
}

}  // namespace gv
