#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/decoy_lp.hpp"

namespace qkd {

enum class Protocol { bb84, lt };

// Number of concentration-bound applications one full analysis performs.
// The failure budget below is divided by this count.
int bound_applications(Protocol p);

// Failure-probability bookkeeping for one analysis run.  The secrecy budget
// splits as eps_s = eps_2 + eps_pa + 2*sqrt(eps_bar), and eps_bar is shared
// evenly across every concentration-bound application.
struct EpsilonBudget {
  double eps_s = 0.0;
  double eps_c = 0.0;
  double eps_2 = 0.0;
  double eps_pa = 0.0;
  double eps_bar = 0.0;
  double eps_bound = 0.0;
  int n_bounds = 0;

  static EpsilonBudget split(double eps_s, double eps_c, int n_bounds);
};

// Full description of one protocol run: source, channel, basis choices and
// the leakage/security parameters of the analysis.
struct ExperimentConfig {
  Protocol protocol = Protocol::bb84;
  double n_total = 0.0;
  channel::Params channel;
  decoy::PhotonSource source;
  double p_z_alice = 0.5;
  double p_z_bob = 0.5;
  // Overlap floor between Eve's states for different settings.  delta = 1
  // means no leakage; when i_max >= 0 the floor is derived as exp(-i_max/2).
  double delta = 1.0;
  double i_max = -1.0;
  double f_ec = 1.2;
  double eps_secrecy = 1e-10;
  double eps_correct = 1e-10;
  // Test hook: treat every tail deviation as zero (infinite-key limit).
  bool exact_tails = false;
  // Test hook: replace each decoy extremum with the model's exact
  // single-photon rate (the limit of an unboundedly fine intensity set).
  bool exact_yields = false;
};

void validate(const ExperimentConfig& cfg);
double effective_delta(const ExperimentConfig& cfg);
EpsilonBudget budget_for(const ExperimentConfig& cfg);

// Sifted counts the analysis consumes.  Counts are real-valued: the default
// mode fills them with channel-model expected values.  For the three-state
// protocol, m_lt[i][a][b] holds the X-basis count for intensity i, setting
// a (0 -> z0, 1 -> z1, 2 -> x0) and Bob's outcome b (0 -> x0, 1 -> x1).
struct ObservedStatistics {
  double n_total = 0.0;
  std::vector<double> m_z;
  std::vector<double> e_x;
  std::vector<std::array<std::array<double, 2>, 3>> m_lt;
  double m_z_total = 0.0;
  double e_z_rate = 0.0;
};

ObservedStatistics expected_statistics(const ExperimentConfig& cfg);

// Monte-Carlo variant: every count is drawn from the matching binomial
// distribution.  Deterministic for a fixed seed.
ObservedStatistics sampled_statistics(const ExperimentConfig& cfg,
                                      std::uint64_t seed);

}  // namespace qkd
