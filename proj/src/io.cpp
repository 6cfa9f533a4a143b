#include "gv/io.hpp"

#include <sstream>
#include <stdexcept>

namespace gv {

using nlohmann::json;

namespace {

std::string half(int x2) {
  if (x2 % 2 == 0) return std::to_string(x2 / 2);
  return std::to_string(x2) + "/2";
}

Scalar parse_rational(const std::string& s) {
  try {
    mpq_class q(s);
    q.canonicalize();
    return Scalar(q);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("'" + s + "' is not a rational number");
  }
}

json labels_json(const std::vector<Label>& ls) {
  json a = json::array();
  for (const auto& l : ls) a.push_back({l.color, l.k2});
  return a;
}

std::string labels_pretty(const std::vector<Label>& ls) {
  std::string s;
  for (const auto& l : ls) s += (s.empty() ? "" : " ") + ("(" + std::to_string(l.color) + "," + half(l.k2) + ")");
  return s;
}

json header(const std::string& schema, const RunConfig& cfg) {
  return {{"schema", schema}, {"schema_version", kSchemaVersion}, {"config", cfg.to_json()}};
}

json series_rows(const GradedSeries& s, const char* key) {
  json rows = json::array();
  for (const auto& [k, v] : s.coeffs()) rows.push_back({{key, k.first}, {"lambda", k.second}, {"value", v.str()}});
  return rows;
}

}  // namespace

AlgebraSpec RunConfig::spec() const {
  if (generic && family != Family::A) throw std::invalid_argument("generic alpha0 is only available for type A");
  if (q.empty()) return AlgebraSpec::symbolic(family, rank, generic);
  if (static_cast<int>(q.size()) != rank)
    throw std::invalid_argument("--q needs exactly " + std::to_string(rank) + " values");
  std::vector<Scalar> qs;
  for (const auto& s : q) qs.push_back(parse_rational(s));
  return AlgebraSpec::with_q(family, rank, qs, generic);
}

Scalar RunConfig::t_value() const {
  if (t == "T") return Scalar::var(TVar);
  return parse_rational(t);
}

json RunConfig::to_json() const {
  json j{{"family", family_name(family)},
         {"rank", rank},
         {"level", generic ? "generic" : "self-dual"},
         {"q", q.empty() ? json("symbolic") : json(q)},
         {"T", t},
         {"max_euler", max_euler},
         {"d_max", d_max},
         {"h_max", h_max},
         {"format", format}};
  return j;
}

json table_json(const FgnTable& t, const RunConfig& cfg, const std::string& pipeline) {
  json j = header("gv-fgn-table", cfg);
  j["pipeline"] = pipeline;
  j["family"] = family_name(t.family);
  j["rank"] = t.rank;
  j["max_euler"] = t.max_euler;
  j["weight_cap"] = t.weight_cap;
  json es = json::array();
  for (const auto& [k, v] : t.entries) {
    json e{{"g2", k.g2}, {"labels", labels_json(k.labels)}, {"value", v.str()}};
    if (cfg.pretty) {
      e["g"] = half(k.g2);
      e["labels_pretty"] = labels_pretty(k.labels);
    }
    es.push_back(e);
  }
  j["entries"] = es;
  return j;
}

FgnTable table_from_json(const json& j) {
  if (j.value("schema", "") != "gv-fgn-table") throw std::invalid_argument("not an F-table file");
  if (j.value("schema_version", 0) != kSchemaVersion) throw std::invalid_argument("unsupported schema version");
  FgnTable t;
  t.family = parse_family(j.at("family").get<std::string>());
  t.rank = j.at("rank").get<int>();
  t.max_euler = j.at("max_euler").get<int>();
  t.weight_cap = j.at("weight_cap").get<int>();
  for (const auto& e : j.at("entries")) {
    FgnKey k;
    k.g2 = e.at("g2").get<int>();
    for (const auto& l : e.at("labels")) k.labels.push_back({l.at(0).get<int>(), l.at(1).get<int>()});
    std::sort(k.labels.begin(), k.labels.end());
    Scalar v = Scalar::parse(e.at("value").get<std::string>());
    if (!v.is_zero()) t.entries[k] = v;
  }
  return t;
}

json phi_json(const PhiTable& phi, const RunConfig& cfg) {
  json j = header("gv-phi-table", cfg);
  j["rank"] = phi.rank;
  j["max_d"] = phi.max_d;
  j["max_h2"] = phi.max_h2;
  json es = json::array();
  for (const auto& [k, v] : phi.entries) {
    json e{{"h2", k.g2}, {"labels", labels_json(k.labels)}, {"value", v.str()}};
    if (cfg.pretty) {
      e["h"] = half(k.g2);
      e["labels_pretty"] = labels_pretty(k.labels);
    }
    es.push_back(e);
  }
  j["entries"] = es;
  return j;
}

json z_json(const ZSeries& z, const RunConfig& cfg, bool prepotential_only) {
  json j = header("gv-instanton", cfg);
  j["rank"] = z.rank;
  j["max_d"] = z.max_d;
  j["max_h2"] = z.max_h2;
  j["lambda_unit"] = "Lambda^r";
  if (!prepotential_only) {
    json zs = json::array();
    for (std::size_t l = 0; l < z.z.size(); ++l) {
      auto b = z.z[l].bound();
      zs.push_back({{"lambda", l}, {"hbar2_bound", b ? json(*b) : json(nullptr)}, {"terms", series_rows(z.z[l], "hbar2")}});
    }
    j["z"] = zs;
    j["graphs"] = z.graphs;
  }
  json fe = json::array();
  std::istringstream rows(free_energy_csv(z, prepotential_only));
  std::string line;
  std::getline(rows, line);  // header
  while (std::getline(rows, line)) {
    std::istringstream ls(line);
    std::string h2, lam, val;
    std::getline(ls, h2, ',');
    std::getline(ls, lam, ',');
    std::getline(ls, val);
    fe.push_back({{"h2", std::stoi(h2)}, {"lambda", std::stoi(lam)}, {"value", val}});
  }
  j[prepotential_only ? "prepotential" : "free_energy"] = fe;
  return j;
}

std::string free_energy_csv(const ZSeries& z, bool prepotential_only) {
  std::ostringstream os;
  os << "h2,lambda,value\n";
  for (int l = 0; l < static_cast<int>(z.log_z.size()); ++l) {
    if (prepotential_only) {
      Scalar v = z.trees.get(-2, l);
      if (!v.is_zero()) os << 0 << "," << l << "," << v.str() << "\n";
      continue;
    }
    for (int h2 = 0; h2 <= z.max_h2; ++h2) {
      Scalar v = z.free_energy(h2, l);
      if (!v.is_zero()) os << h2 << "," << l << "," << v.str() << "\n";
    }
  }
  return os.str();
}

}  // namespace gv
