#pragma once

#include <functional>

#include "qkd/keyrate_lt.hpp"
#include "qkd/parallel.hpp"

namespace qkd {

// Free protocol parameters tuned per distance. The weakest intensity stays
// fixed (finite extinction ratio), the two decoy probabilities below p_mu0
// split the remainder evenly, and both sides share the Z-basis probability.
struct TunableParams {
  double mu0 = 0.5;
  double mu1 = 0.1;
  double p_z = 0.9;
  double p_mu0 = 0.5;
};

struct OptimizeOptions {
  int grid_points = 8;   // coarse-grid resolution per coordinate
  double tol = 1e-3;     // golden-section width target, relative to the box
  int sweeps = 2;        // coordinate-refinement passes
  Exec exec = Exec::par; // grid evaluations only; refinement is sequential
};

struct OptimizeOutcome {
  TunableParams params;
  KeyRateResult result;
};

using RateFunction = std::function<KeyRateResult(const ExperimentConfig&)>;

// Rebuilds the source and basis probabilities of base from p; the weakest
// intensity is taken from base.source.intensities.back().
ExperimentConfig apply_params(ExperimentConfig base, const TunableParams& p);

// Maximizes rate over (mu0, mu1, p_z, p_mu0): coarse grid seed (optionally
// replaced by per-coordinate line scans through warm), then coordinate-wise
// golden-section refinement. Deterministic; the best evaluated point wins.
OptimizeOutcome optimize(const ExperimentConfig& base, const RateFunction& rate,
                         const OptimizeOptions& opt = {},
                         const TunableParams* warm = nullptr);

}  // namespace qkd
