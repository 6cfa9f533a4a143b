#pragma once
// Run configuration and machine-readable output.  Half-integers are written only
// as doubled integers ("g2", "k2", "h2", "hbar2"); Scalars as canonical strings,
// so tables round-trip exactly.  Output is deterministic for a given config.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "gv/nekrasov.hpp"

namespace gv {

constexpr int kSchemaVersion = 1;

struct RunConfig {
  Family family = Family::A;
  int rank = 2;
  bool generic = false;        // generic alpha0 (type A only)
  std::vector<std::string> q;  // explicit Q_a as rationals; empty -> symbolic
  std::string t = "T";         // value of T (symbolic or rational)
  int max_euler = 3;
  int d_max = 1;
  int h_max = 2;
  std::string format = "json";
  bool pretty = false;
  int workers = 0;

  // Throws std::invalid_argument / DegenerateParameters on an invalid config.
  AlgebraSpec spec() const;
  Scalar t_value() const;
  nlohmann::json to_json() const;
};

nlohmann::json table_json(const FgnTable& t, const RunConfig& cfg, const std::string& pipeline);
// Reads a table written by table_json (the config header is ignored).
FgnTable table_from_json(const nlohmann::json& j);

nlohmann::json phi_json(const PhiTable& phi, const RunConfig& cfg);
nlohmann::json z_json(const ZSeries& z, const RunConfig& cfg, bool prepotential_only);
// Rows h2,lambda,value of log z = sum_h hbar^{h-1} F_h (lambda in units of Lambda^r).
std::string free_energy_csv(const ZSeries& z, bool prepotential_only);

}  // namespace gv
