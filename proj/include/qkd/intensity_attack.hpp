#pragma once

#include <vector>

#include "qkd/keyrate_lt.hpp"
#include "qkd/parallel.hpp"

namespace qkd {

// Analyses for injected light that both leaks setting information (bounded
// by cfg.i_max) and multiplies every signal intensity by an unknown factor
// in [1, kappa].

// Sub-interval bookkeeping: [1, kappa] splits into n_it equal intensity
// slices; slice k starts at scale factor 1 + k(kappa-1)/n_it and spans a
// residual factor kappa_k. The kappa_k telescope: their product is kappa.
std::vector<double> subinterval_scales(double kappa, int n_it);
std::vector<double> subinterval_kappas(double kappa, int n_it);

// Round-dependent attack: the factor may differ per round, so the analysis
// must hold for the whole interval at once. Equivalent to one slice.
KeyRateResult rate_round_dependent(const ExperimentConfig& cfg, double kappa);

// Round-independent attack: one unknown factor for the whole run. Evaluates
// each slice with its intensities shifted to the slice start and its own
// residual kappa_k, and keeps the worst key length. Observed statistics stay
// at the nominal intensities unless resimulate is set (attack folded into
// the honest run). The slice loop parallelizes; the argmin is serial.
KeyRateResult rate_worst_case_subintervals(const ExperimentConfig& cfg,
                                           double kappa, int n_it,
                                           bool resimulate = false,
                                           Exec exec = Exec::par);

}  // namespace qkd
