#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qkd/config_file.hpp"
#include "qkd/intensity_attack.hpp"
#include "qkd/optimize.hpp"

namespace qkd {

// One curve of a sweep: protocol plus leakage/attack variant. Exactly one of
// delta or i_max is active (i_max < 0 means delta mode); kappa > 1 or
// n_sub > 1 selects the intensity-attack analysis and requires i_max mode.
struct Scenario {
  Protocol protocol = Protocol::bb84;
  double delta = 1.0;
  double i_max = -1.0;
  double kappa = 1.0;
  int n_sub = 1;
  bool resimulate = false;
};

struct SweepPlan {
  ExperimentConfig base;   // template; per-row fields are overwritten
  std::vector<Scenario> scenarios;
  std::vector<double> distances_km;
  bool optimize_params = true;
  bool warm_start = true;
  OptimizeOptions options;
  TunableParams fixed;     // used when optimize_params is false
};

struct SweepRow {
  Scenario scenario;
  double distance_km = 0.0;
  TunableParams params;
  KeyRateResult result;
  std::string error;       // empty on success
};

// Builds a plan from a parsed config, rejecting unknown or malformed keys.
SweepPlan plan_from_config(const cfg::Config& config);

// Evaluates every (scenario, distance) cell in deterministic order. Rows
// that fail carry the error message and a zero rate.
std::vector<SweepRow> run_plan(const SweepPlan& plan, Exec exec = Exec::par);

// RFC-4180-style CSV with a mandatory header, LF line endings and 17
// significant digits on every real value.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string protocol_name(Protocol p);

}  // namespace qkd
