#pragma once

#include <vector>

#include "qkd/simplex.hpp"

namespace qkd::decoy {

// Phase-randomized weak coherent source: Poisson photon-number mixture over a
// small set of intensities. n_cut truncates the photon-number expansion; the
// truncated tail carries at most tail_mass(mu, n_cut) probability per pulse.
struct PhotonSource {
  std::vector<double> intensities;  // strictly decreasing, mu0 > mu1 > ...
  std::vector<double> probs;        // selection probabilities, sum to 1
  int n_cut = 12;
};

void validate(const PhotonSource& s);

double pn_given_mu(double mu, int n);              // Poisson pmf
double tail_mass(double mu, int n_cut);            // 1 - sum_{n<=n_cut}
double pn_marginal(const PhotonSource& s, int n);  // sum_mu p_mu p_{n|mu}

// Per-intensity interval in probability units: bounds on (1/N) times the sum
// over rounds of the reference-scenario detection probability for that
// intensity (basis/setting selection probabilities included).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Shared constraint structure of all three decoy LPs: variables are the
// round-averaged conditional n-photon rates v_n in [0,1], n = 0..n_cut, and
// each intensity contributes
//   clamp01(lo_i / (p_mu_i * sel_prob)) - tail_mass(mu_i)
//     <= sum_n p_{n|mu_i} v_n <= clamp01(hi_i / (p_mu_i * sel_prob))
// with the lower side clamped at 0. The objective picks out v_target.
lp::Problem conditional_rate_problem(const PhotonSource& s,
                                     const std::vector<Interval>& observed,
                                     double sel_prob, int target_n,
                                     lp::Sense sense);

// Z-basis single-photon yield: minimize v_1. sel_prob = p_z_alice * p_z_bob.
lp::Problem yield_problem(const PhotonSource& s,
                          const std::vector<Interval>& gains, double p_z_alice,
                          double p_z_bob);

// X-basis single-photon error rate: maximize v_1. sel_prob = p_x_a * p_x_b.
lp::Problem error_problem(const PhotonSource& s,
                          const std::vector<Interval>& error_gains,
                          double p_x_alice, double p_x_bob);

// Per-(setting, outcome) single-photon detection rate for the three-state
// protocol; the caller chooses the sense to match the sign of the term the
// yield feeds. sel_prob = p_setting * p_x_bob.
lp::Problem setting_yield_problem(const PhotonSource& s,
                                  const std::vector<Interval>& gains,
                                  double p_setting, double p_x_bob,
                                  lp::Sense sense);

}  // namespace qkd::decoy
