#pragma once

#include "qkd/experiment.hpp"
#include "qkd/kato.hpp"

namespace qkd {

// Outcome of one full finite-key analysis.
struct KeyRateResult {
  double key_length = 0.0;   // extractable secret bits (floored, >= 0)
  double rate = 0.0;         // key_length / n_total
  double m1_lower = 0.0;     // single-photon Z-basis count, lower bound
  double mph1_upper = 0.0;   // single-photon phase-error count, upper bound
  double eph_upper = 1.0;    // phase-error ratio fed to the entropy term
  double y1_lp = 0.0;        // LP value feeding m1_lower
  double g1_lp = 0.0;        // LP-derived value feeding mph1_upper
  double ec_leakage = 0.0;   // error-correction cost in bits
  int bound_applications = 0;
};

// Counts every concentration-bound application of one analysis and applies
// the shared per-application failure probability. With exact_tails set the
// deviations collapse to zero (infinite-key limit) but the applications are
// still counted, so the budget audit covers both modes.
class BoundTracker {
 public:
  BoundTracker(double n, double epsilon, bool exact_tails)
      : n_(n), eps_(epsilon), exact_(exact_tails) {}

  double count_lower(double prediction, double s);
  double count_upper(double prediction, double s);
  double sum_lower(double prediction, double count);
  double sum_upper(double prediction, double count);

  int applications() const { return used_; }

 private:
  double n_;
  double eps_;
  bool exact_;
  int used_ = 0;
};

double binary_entropy(double x);

// Lower bound on the Z-basis single-photon count: per-intensity sum bounds
// on the sifted counts, overlap-corrected into reference-scenario gain
// intervals, decoy LP for the single-photon rate, then one count bound.
double estimate_m1_lower(const ExperimentConfig& cfg,
                         const ObservedStatistics& obs);

// Upper bound on the single-photon phase-error count from the X-basis error
// counts; the reference error rate converts to the Z-basis phase-error rate
// through the basis-selection ratio.
double estimate_mph1_upper(const ExperimentConfig& cfg,
                           const ObservedStatistics& obs);

// Finite-key length from the two single-photon bounds plus error-correction
// and security-accounting terms; clamps at zero and reports the rate.
KeyRateResult key_length(const ExperimentConfig& cfg, double m1_lower,
                         double mph1_upper, const ObservedStatistics& obs);

KeyRateResult bb84_rate(const ExperimentConfig& cfg,
                        const ObservedStatistics& obs);
KeyRateResult bb84_rate(const ExperimentConfig& cfg);

namespace detail {
double m1_lower_tracked(const ExperimentConfig& cfg,
                        const ObservedStatistics& obs, BoundTracker& tracker,
                        double* y1_lp);
}  // namespace detail

}  // namespace qkd
