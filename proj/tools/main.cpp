// gv: solve Airy-structure tables, run the recursion and the instanton sums, and
// verify invariants.  Exit codes: 0 ok, 1 verification failure, 2 usage error,
// 3 truncation window insufficient.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gv/errors.hpp"
#include "gv/io.hpp"
#include "gv/verify.hpp"

using namespace gv;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerify = 1, kUsage = 2, kTruncation = 3 };

struct Options {
  RunConfig cfg;
  std::string family = "A";
  std::string level = "self-dual";
  std::string q;
  std::string output;
  bool oracle = false;
  bool prepotential = false;
  bool compare = false;
  std::string suite = "all";
  std::string table;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void finish_config(Options& o) {
  o.cfg.family = parse_family(o.family);
  if (o.level != "self-dual" && o.level != "generic") throw std::invalid_argument("--level is self-dual or generic");
  o.cfg.generic = o.level == "generic";
  o.cfg.q = o.q.empty() ? std::vector<std::string>{} : split(o.q);
  if (o.cfg.format != "json" && o.cfg.format != "csv") throw std::invalid_argument("--format is json or csv");
  if (o.cfg.workers > 0) setenv("GV_WORKERS", std::to_string(o.cfg.workers).c_str(), 1);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + o.output);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_json(const Options& o, const char* cmd) {
  if (o.cfg.format != "json") throw std::invalid_argument(std::string(cmd) + " writes JSON only");
}

FgnTable solve_table(const RunConfig& cfg, int E, int margin = -1) {
  AlgebraSpec spec = cfg.spec();
  if (E <= 0) {
    FgnTable t;
    t.family = spec.family;
    t.rank = spec.rank;
    return t;
  }
  NormalForm nf = build_normal_form(spec, cfg.t_value(), solve_weight_cap(spec, E, margin));
  SolveOptions so;
  so.max_euler = E;
  so.weight_margin = margin;
  so.workers = cfg.workers;
  return solve_fgn(nf, so);
}

// Table and window for Phi / z with sum k <= d_max and 2h <= h_max.
FgnTable table_for_phi(const RunConfig& cfg) {
  AlgebraSpec spec = cfg.spec();
  if (spec.family != Family::A) throw std::invalid_argument("the instanton sums are implemented for type A");
  if (cfg.t != "T") throw std::invalid_argument("phi and z use the symbolic T");
  int E = std::max(1, phi_required_euler(spec.rank, cfg.d_max, cfg.h_max));
  int margin = std::max(2 * cfg.d_max - vanishing_weight(spec, E + 1), 2);
  return solve_table(cfg, E, margin);
}

int cmd_fgn(const Options& o) {
  require_json(o, "fgn");
  emit(o, dump(table_json(solve_table(o.cfg, o.cfg.max_euler), o.cfg, "airy")));
  return kOk;
}

int cmd_phi(const Options& o) {
  require_json(o, "phi");
  emit(o, dump(phi_json(phi_from_fgn(table_for_phi(o.cfg), o.cfg.d_max, o.cfg.h_max), o.cfg)));
  return kOk;
}

int cmd_z(const Options& o) {
  FgnTable table = table_for_phi(o.cfg);
  PhiTable phi = phi_from_fgn(table, o.cfg.d_max, o.cfg.h_max);
  ZSeries z = instanton_z(phi, o.cfg.d_max, o.cfg.h_max);
  int status = kOk;
  if (o.oracle) {
    std::string diff = compare_z(z, pairing_oracle_z(table, o.cfg.d_max, o.cfg.h_max));
    if (!diff.empty()) {
      std::cerr << "graph sum and pairing oracle differ: " << diff << "\n";
      status = kVerify;
    } else {
      std::cerr << "graph sum agrees with the pairing oracle\n";
    }
  }
  if (o.cfg.format == "csv")
    emit(o, free_energy_csv(z, o.prepotential));
  else
    emit(o, dump(z_json(z, o.cfg, o.prepotential)));
  return status;
}

int cmd_omega(const Options& o) {
  require_json(o, "omega");
  AlgebraSpec spec = o.cfg.spec();
  TrOptions to;
  to.max_euler = o.cfg.max_euler;
  to.workers = o.cfg.workers;
  TrResult res = solve_tr(SpectralCurve::make(spec, o.cfg.t_value()), to);
  json j = table_json(res.table, o.cfg, "tr");
  j["symmetry_checks"] = res.symmetry_checks;
  j["loop_equations"] = res.loop_checks;
  emit(o, dump(j));
  if (o.compare) {
    FgnTable airy = solve_table(o.cfg, o.cfg.max_euler);
    if (!(airy == res.table)) {
      std::cerr << "recursion table differs from the Airy table\n";
      return kVerify;
    }
    std::cerr << "recursion table equals the Airy table (" << airy.entries.size() << " entries)\n";
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  AlgebraSpec spec = o.cfg.spec();
  Scalar T = o.cfg.t_value();
  const std::string& s = o.suite;
  static const std::vector<std::string> known{"all", "whittaker", "lemma45", "tr", "graphs", "virasoro", "degree-one",
                                              "robustness"};
  if (std::find(known.begin(), known.end(), s) == known.end()) throw std::invalid_argument("unknown suite '" + s + "'");
  bool all = s == "all";
  Family f = spec.family;
  std::vector<CheckResult> out;
  std::optional<FgnTable> given;
  if (!o.table.empty()) {
    if (s != "whittaker" && s != "lemma45") throw std::invalid_argument("--table goes with --suite whittaker or lemma45");
    std::ifstream in(o.table);
    if (!in) throw std::invalid_argument("cannot read " + o.table);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(o.table + " is not JSON");
    given = table_from_json(j);
    if (given->family != spec.family || given->rank != spec.rank)
      throw std::invalid_argument("table is " + family_name(given->family) + std::to_string(given->rank) +
                                  ", options say " + family_name(spec.family) + std::to_string(spec.rank));
  }
  if (all || s == "whittaker")
    out.push_back(given ? check_whittaker_table(spec, T, *given) : check_whittaker(spec, T, o.cfg.max_euler));
  if ((all && f == Family::A) || s == "lemma45")
    out.push_back(check_lemma(spec, T, given ? *given : solve_table(o.cfg, o.cfg.max_euler)));
  if ((all && (f == Family::B || (f == Family::A && !spec.generic_level))) || s == "tr")
    out.push_back(check_tr(spec, T, o.cfg.max_euler));
  if ((all && f == Family::A) || s == "graphs") out.push_back(check_graphs(spec, o.cfg.d_max, o.cfg.h_max));
  if ((all && f == Family::D) || s == "virasoro") out.push_back(check_virasoro(spec));
  if ((all && (f == Family::C || f == Family::D)) || s == "degree-one") out.push_back(check_degree_one(spec));
  if (s == "robustness") out.push_back(check_robustness(spec, T, o.cfg.max_euler));

  bool ok = true, truncated = false;
  std::ostringstream os;
  json rep = json::array();
  for (const auto& c : out) {
    ok = ok && c.pass;
    truncated = truncated || c.truncated;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", c.seconds);
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << secs << " s): " << c.detail << "\n";
    rep.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"seconds", c.seconds}});
  }
  if (o.cfg.format == "json") {
    json j{{"schema", "gv-verify-report"}, {"schema_version", kSchemaVersion}, {"config", o.cfg.to_json()},
           {"checks", rep}, {"pass", ok}};
    emit(o, dump(j));
  } else {
    emit(o, os.str());
  }
  if (o.cfg.format == "json" && !o.output.empty() && o.output != "-") std::cout << os.str();
  if (ok) return kOk;
  bool only_truncation = std::all_of(out.begin(), out.end(), [](const CheckResult& c) { return c.pass || c.truncated; });
  return truncated && only_truncation ? kTruncation : kVerify;
}

void common(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "A, B, C or D")->check(CLI::IsMember({"A", "B", "C", "D"}));
  sub->add_option("--rank", o.cfg.rank, "rank r")->check(CLI::Range(1, 16));
  sub->add_option("--level", o.level, "self-dual or generic (symbolic alpha0, type A)")
      ->check(CLI::IsMember({"self-dual", "generic"}));
  sub->add_option("--q", o.q, "explicit Q_1,...,Q_r as rationals (default symbolic)");
  sub->add_option("--T", o.cfg.t, "value of T (default symbolic)");
  sub->add_option("--max-euler", o.cfg.max_euler, "bound on 2g - 2 + n")->check(CLI::Range(0, 64));
  sub->add_option("--d-max", o.cfg.d_max, "instanton order")->check(CLI::Range(0, 16));
  sub->add_option("--h-max", o.cfg.h_max, "hbar order of log z, doubled")->check(CLI::Range(0, 64));
  sub->add_option("-o,--output", o.output, "output file (default stdout)");
  sub->add_option("--format", o.cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--pretty", o.cfg.pretty, "add human-readable half-integer fields");
  sub->add_option("--workers", o.cfg.workers, "worker threads (default GV_WORKERS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaiotto vectors from Airy structures: F-tables, recursion, instanton sums"};
  app.require_subcommand(1);
  Options o;
  CLI::App* fgn = app.add_subcommand("fgn", "solve the Airy structure for F_{g,n}");
  CLI::App* phi = app.add_subcommand("phi", "modified genus expansion Phi_{h,n} (type A)");
  CLI::App* z = app.add_subcommand("z", "instanton partition function and free energies (type A)");
  CLI::App* omega = app.add_subcommand("omega", "correlators from topological recursion (A self-dual, B)");
  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  for (CLI::App* s : {fgn, phi, z, omega, verify}) common(s, o);
  z->add_flag("--oracle", o.oracle, "also evaluate the norm in the Fock module and compare");
  z->add_flag("--prepotential", o.prepotential, "only F_0, from tree graphs");
  omega->add_flag("--compare", o.compare, "compare with the Airy table");
  verify->add_option("--suite", o.suite, "all, whittaker, lemma45, tr, graphs, virasoro, degree-one, robustness");
  verify->add_option("--table", o.table, "F-table JSON to check instead of solving (whittaker, lemma45)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    finish_config(o);
    if (*fgn) return cmd_fgn(o);
    if (*phi) return cmd_phi(o);
    if (*z) return cmd_z(o);
    if (*omega) return cmd_omega(o);
    if (*verify) return cmd_verify(o);
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return kTruncation;
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kVerify;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerify;
  }
  return kUsage;
}
