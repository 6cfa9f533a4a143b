// End-to-end acceptance runner: one PASS/FAIL line per criterion, exit status 1
// if any fails.  Sub-check lines are indented beneath each criterion.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gv/verify.hpp"

using namespace gv;

namespace {

const Scalar T = Scalar::var(TVar);

struct Criterion {
  int id;
  std::string title;
  std::vector<CheckResult> parts;
};

bool report(const Criterion& c) {
  bool ok = !c.parts.empty();
  double secs = 0;
  for (const auto& p : c.parts) ok = ok && p.pass, secs += p.seconds;
  std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
  for (const auto& p : c.parts) std::printf("    %s %s: %s\n", p.pass ? "ok  " : "FAIL", p.name.c_str(), p.detail.c_str());
  std::fflush(stdout);
  return ok;
}

AlgebraSpec sym(Family f, int r, bool generic = false) { return AlgebraSpec::symbolic(f, r, generic); }

FgnTable table(const AlgebraSpec& spec, int E, int margin) {
  NormalForm nf = build_normal_form(spec, T, solve_weight_cap(spec, E, margin));
  SolveOptions o;
  o.max_euler = E;
  o.weight_margin = margin;
  return solve_fgn(nf, o);
}

// Log z's hbar^{-1} part against the tree subsum, order by order in Lambda^r.
CheckResult trees(const AlgebraSpec& spec, int max_d) {
  CheckResult r{"trees " + family_name(spec.family) + std::to_string(spec.rank) +
                    (spec.generic_level ? " generic" : " self-dual"),
                true, "", 0};
  try {
    int E = phi_required_euler(spec.rank, max_d, 0);
    FgnTable t = table(spec, E, std::max(2 * max_d - vanishing_weight(spec, E + 1), 2));
    ZSeries z = instanton_z(phi_from_fgn(t, max_d, 0), max_d, 0);
    int nonzero = 0;
    for (int l = 0; l <= 2 * max_d; ++l) {
      if (z.log_z[l].get(-2, l) != z.trees.get(-2, l)) {
        r.pass = false;
        r.detail = "Lambda^(r*" + std::to_string(l) + "): " + z.log_z[l].get(-2, l).str() + " vs trees " +
                   z.trees.get(-2, l).str();
        return r;
      }
      nonzero += !z.trees.get(-2, l).is_zero();
    }
    r.detail = std::to_string(nonzero) + " nonzero orders through Lambda^4r agree";
    if (nonzero < max_d) r.pass = false, r.detail = "tree sum unexpectedly vanishes";
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

// The computed central charge, frozen at its first computed value (c = r).
CheckResult frozen_central_charge(int r) {
  CheckResult c{"central charge D" + std::to_string(r), false, "", 0};
  try {
    VirasoroReport rep = virasoro_closure(sym(Family::D, r), 3, 4);
    c.pass = rep.violations.empty() && rep.central_charge == Scalar(r);
    c.detail = "c = " + rep.central_charge.str() + " (frozen " + std::to_string(r) + ")";
  } catch (const std::exception& e) {
    c.detail = std::string("exception: ") + e.what();
  }
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> cs;
  const std::vector<int> ranks{2, 3};

  {
    Criterion c{1, "Whittaker property, type A, r = 2, 3, self-dual and generic, E <= 4, m <= 3", {}};
    for (int r : ranks)
      for (bool g : {false, true}) c.parts.push_back(check_whittaker(sym(Family::A, r, g), T, 4, 3));
    cs.push_back(c);
  }
  {
    Criterion c{2, "structural lemma on every computed type-A table", {}};
    for (int r : ranks)
      for (bool g : {false, true}) {
        AlgebraSpec s = sym(Family::A, r, g);
        c.parts.push_back(check_lemma(s, T, table(s, 4, whittaker_margin(s, 4, 3))));
        c.parts.push_back(check_lemma(s, T, table(s, 4, -1)));
      }
    cs.push_back(c);
  }
  {
    Criterion c{3, "recursion table == Airy table, type A self-dual, r = 2, 3, E <= 3", {}};
    for (int r : ranks) c.parts.push_back(check_tr(sym(Family::A, r), T, 3));
    cs.push_back(c);
  }
  {
    Criterion c{4, "graph sum == pairing oracle through Lambda^4r; Lambda^2r closed form", {}};
    for (int r : ranks)
      for (bool g : {false, true}) c.parts.push_back(check_graphs(sym(Family::A, r, g), 2, 2));
    cs.push_back(c);
  }
  {
    Criterion c{5, "hbar^-1 part of log z == tree-graph subsum through Lambda^4r", {}};
    for (int r : ranks)
      for (bool g : {false, true}) c.parts.push_back(trees(sym(Family::A, r, g), 2));
    cs.push_back(c);
  }
  {
    Criterion c{6, "type B r = 2: shifted Whittaker property E <= 3; recursion == Airy E <= 2", {}};
    c.parts.push_back(check_whittaker(sym(Family::B, 2), T, 3));
    c.parts.push_back(check_tr(sym(Family::B, 2), T, 2));
    cs.push_back(c);
  }
  {
    Criterion c{7, "type D r = 2, 3: Virasoro closure, degree-one identities, Whittaker E <= 3", {}};
    for (int r : ranks) {
      c.parts.push_back(check_virasoro(sym(Family::D, r)));
      c.parts.push_back(frozen_central_charge(r));
      c.parts.push_back(check_degree_one(sym(Family::D, r)));
      c.parts.push_back(check_whittaker(sym(Family::D, r), T, 3));
    }
    cs.push_back(c);
  }
  {
    Criterion c{8, "type C: degree-one identities; half-integer-sector Whittaker E <= 2", {}};
    for (int r : {1, 2}) {
      c.parts.push_back(check_degree_one(sym(Family::C, r)));
      c.parts.push_back(check_whittaker(sym(Family::C, r), T, 2));
    }
    cs.push_back(c);
  }
  {
    Criterion c{9, "uniqueness: permuted schedule, workers, explicit Q and re-symbolisation", {}};
    c.parts.push_back(check_robustness(sym(Family::A, 2, true), T, 4));
    c.parts.push_back(check_robustness(sym(Family::A, 3), T, 3));
    c.parts.push_back(check_robustness(sym(Family::B, 2), T, 3));
    cs.push_back(c);
  }

  int failed = 0;
  for (const auto& c : cs) failed += !report(c);
  std::printf("%d/%zu criteria pass\n", static_cast<int>(cs.size()) - failed, cs.size());
  return failed ? 1 : 0;
}
