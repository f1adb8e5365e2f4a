#include "qkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd::channel {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Probability of each exclusive detector pattern given the probabilities
// that the light alone leaves each detector silent (s0/s1 for the outcome-0/
// outcome-1 detectors, s_all for both jointly). Double clicks are split
// evenly between the outcomes, which makes P0 + P1 equal the total click
// probability 1 - (1-pd)^2 s_all identically.
double outcome_from_silences(double pd, double s0, double s1, double s_all,
                             int outcome) {
  const double q0 = (1.0 - pd) * s0;     // detector 0 silent
  const double q1 = (1.0 - pd) * s1;     // detector 1 silent
  const double qn = (1.0 - pd) * (1.0 - pd) * s_all;  // neither clicks
  const double both = 1.0 - q0 - q1 + qn;
  const double only = (outcome == 0 ? q1 : q0) - qn;
  return only + 0.5 * both;
}

// Effective polarization angle of setting a as seen by Bob's measurement.
// Measuring in X projects onto the +-pi/4 pair, i.e. the same detector
// formulas rotated by -pi/4.
double effective_angle(const Params& p, State a, Basis bob) {
  double th = state_angle(a) + p.misalignment_rad;
  if (bob == Basis::x) th -= kPi / 4.0;
  return th;
}

}  // namespace

void validate(const Params& p) {
  if (!(p.dark_prob >= 0.0) || !(p.dark_prob < 1.0))
    throw std::invalid_argument("channel: dark_prob must lie in [0,1)");
  if (!(p.eta_det > 0.0) || !(p.eta_det <= 1.0))
    throw std::invalid_argument("channel: eta_det must lie in (0,1]");
  if (!(p.alpha_db_per_km >= 0.0))
    throw std::invalid_argument("channel: alpha_db_per_km must be >= 0");
  if (!(p.distance_km >= 0.0))
    throw std::invalid_argument("channel: distance_km must be >= 0");
  if (!(std::fabs(p.misalignment_rad) <= kPi))
    throw std::invalid_argument("channel: misalignment_rad out of range");
}

double transmittance(const Params& p) {
  validate(p);
  return p.eta_det * std::pow(10.0, -p.alpha_db_per_km * p.distance_km / 10.0);
}

double state_angle(State a) {
  switch (a) {
    case State::z0: return 0.0;
    case State::z1: return kPi / 2.0;
    case State::x0: return kPi / 4.0;
    case State::x1: return 3.0 * kPi / 4.0;
  }
  throw std::invalid_argument("channel: unknown state");
}

double gain(const Params& p, double mu) {
  validate(p);
  if (!(mu >= 0.0)) throw std::invalid_argument("channel: mu must be >= 0");
  const double s = (1.0 - p.dark_prob);
  return 1.0 - s * s * std::exp(-mu * transmittance(p));
}

double outcome_prob(const Params& p, State a, double mu, Basis bob,
                    int outcome) {
  validate(p);
  if (!(mu >= 0.0)) throw std::invalid_argument("channel: mu must be >= 0");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("channel: outcome must be 0 or 1");
  const double eta = transmittance(p);
  const double th = effective_angle(p, a, bob);
  const double c2 = std::cos(th) * std::cos(th);
  const double s2 = std::sin(th) * std::sin(th);
  return outcome_from_silences(p.dark_prob, std::exp(-eta * mu * c2),
                               std::exp(-eta * mu * s2), std::exp(-eta * mu),
                               outcome);
}

double error_rate(const Params& p, double mu, Basis b) {
  const State s0 = b == Basis::z ? State::z0 : State::x0;
  const State s1 = b == Basis::z ? State::z1 : State::x1;
  return 0.5 * (outcome_prob(p, s0, mu, b, 1) + outcome_prob(p, s1, mu, b, 0));
}

double fock_gain(const Params& p, int n) {
  validate(p);
  if (n < 0) throw std::invalid_argument("channel: n must be >= 0");
  const double s = (1.0 - p.dark_prob);
  return 1.0 - s * s * std::pow(1.0 - transmittance(p), n);
}

double fock_outcome_prob(const Params& p, State a, int n, Basis bob,
                         int outcome) {
  validate(p);
  if (n < 0) throw std::invalid_argument("channel: n must be >= 0");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("channel: outcome must be 0 or 1");
  const double eta = transmittance(p);
  const double th = effective_angle(p, a, bob);
  const double c2 = std::cos(th) * std::cos(th);
  const double s2 = std::sin(th) * std::sin(th);
  return outcome_from_silences(
      p.dark_prob, std::pow(1.0 - eta * c2, n), std::pow(1.0 - eta * s2, n),
      std::pow(1.0 - eta, n), outcome);
}

double fock_error_rate(const Params& p, int n, Basis b) {
  const State s0 = b == Basis::z ? State::z0 : State::x0;
  const State s1 = b == Basis::z ? State::z1 : State::x1;
  return 0.5 *
         (fock_outcome_prob(p, s0, n, b, 1) + fock_outcome_prob(p, s1, n, b, 0));
}

}  // namespace qkd::channel
