#pragma once

#include "qkd/keyrate_bb84.hpp"

namespace qkd {

// Bounds on the four averaged single-photon detection rates entering the
// three-state phase-error decomposition. Rates are conditional on the
// setting being chosen and Bob measuring X, so they live in [0,1]. Each
// field carries the bound direction its sign in the decomposition demands.
struct LtYieldEstimate {
  double z0_to_x0_upper = 0.0;
  double z1_to_x0_upper = 0.0;
  double x0_to_x0_lower = 0.0;
  double x0_to_x1_upper = 0.0;
};

// Weights of the two virtual states obtained by rewriting the Z-basis part
// of the single-photon purification in the complementary basis. overlap_re
// is Re<1_z0|1_z1> of the actual single-photon states; the ideal orthogonal
// pair has overlap 0, giving p0 = p1 = (p_z0 + p_z1)/2.
struct VirtualProbs {
  double p0 = 0.0;
  double p1 = 0.0;
};

VirtualProbs lt_virtual_probs(double p_z0, double p_z1, double overlap_re);

// Upper bound on the averaged single-photon phase-error probability. p1 is
// the marginal single-photon probability of the source.
double lt_phase_error_bound(const LtYieldEstimate& est, const VirtualProbs& vp,
                            double p1, double p_z_bob);

KeyRateResult lt_rate(const ExperimentConfig& cfg,
                      const ObservedStatistics& obs);
KeyRateResult lt_rate(const ExperimentConfig& cfg);

// Dispatch on cfg.protocol.
KeyRateResult protocol_rate(const ExperimentConfig& cfg,
                            const ObservedStatistics& obs);
KeyRateResult protocol_rate(const ExperimentConfig& cfg);

}  // namespace qkd
