#pragma once

#include <vector>

namespace qkd::cs {

// Bounds relating the probability p of an event in the actual protocol to
// the corresponding probability in a reference protocol whose states overlap
// the actual ones by at least delta (the square-root-fidelity parameter in
// [0,1]). g_plus/g_minus are the extremal solutions of the two-projection
// overlap constraint sqrt(p1 p2) + sqrt((1-p1)(1-p2)) >= delta; upper/lower
// clamp them into [0,1] outside the informative region.

double g_plus(double delta, double p);
double g_minus(double delta, double p);
double upper(double delta, double p);  // p < delta^2 ? g_plus : 1
double lower(double delta, double p);  // p > 1-delta^2 ? g_minus : 0

// Side-channel leakage models for the overlap parameter. The probe light
// back-reflected from the transmitter is bounded in intensity by i_max; the
// reference case replaces it with vacuum.
struct LeakModel {
  double i_max = 0.0;                // photon-number bound on leaked light
  std::vector<double> intensities;   // signal intensities mu
  std::vector<double> probs;         // selection probabilities, sum to 1
};

void validate(const LeakModel& m);

// Leakage alone: delta = exp(-i_max/2).
double overlap_coherent(const LeakModel& m);

// Leakage plus intensity rescaling: injected light multiplies every signal
// intensity by a factor in [1, kappa]. mu_scale rescales every intensity in
// the sum (sub-interval analyses pass the lower edge of their interval
// relative to the nominal intensity; the full-interval case is mu_scale = 1).
double overlap_intensity(const LeakModel& m, double mu_scale, double kappa);

}  // namespace qkd::cs
