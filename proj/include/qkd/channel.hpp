#pragma once

namespace qkd::channel {

// Polarization-encoded fiber channel with loss, fixed misalignment, two
// threshold detectors with independent dark counts, and even reassignment of
// double clicks between the two outcomes.
struct Params {
  double dark_prob = 0.0;          // dark-count probability per detector
  double eta_det = 1.0;            // detector efficiency
  double alpha_db_per_km = 0.2;    // fiber attenuation
  double distance_km = 0.0;
  double misalignment_rad = 0.0;   // rotation between Alice and Bob frames
};

void validate(const Params& p);

double transmittance(const Params& p);  // eta_det * 10^(-alpha*L/10)

// Alice's four linear-polarization settings and their angles.
enum class State : int { z0 = 0, z1 = 1, x0 = 2, x1 = 3 };
enum class Basis : int { z = 0, x = 1 };
double state_angle(State a);  // 0, pi/2, pi/4, 3pi/4

// Statistics for phase-randomized coherent pulses of intensity mu.
double gain(const Params& p, double mu);  // click probability, any setting
double outcome_prob(const Params& p, State a, double mu, Basis bob,
                    int outcome);
double error_rate(const Params& p, double mu, Basis b);  // click AND wrong bit

// The same statistics conditioned on an n-photon pulse. These are the exact
// photon-number-resolved quantities the decoy analysis estimates; they serve
// as ground truth in tests and as forecast inputs for the concentration
// bounds.
double fock_gain(const Params& p, int n);
double fock_outcome_prob(const Params& p, State a, int n, Basis bob,
                         int outcome);
double fock_error_rate(const Params& p, int n, Basis b);

}  // namespace qkd::channel
