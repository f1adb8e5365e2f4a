#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qkd/channel.hpp"
#include "qkd/decoy_lp.hpp"
#include "qkd/experiment.hpp"

using qkd::channel::Basis;
using qkd::channel::Params;
using qkd::channel::State;

namespace {

constexpr double kPi = 3.14159265358979323846;

Params nominal() {
  Params p;
  p.dark_prob = 7.2e-8;
  p.eta_det = 0.65;
  p.alpha_db_per_km = 0.2;
  p.distance_km = 50.0;
  p.misalignment_rad = 6.0 * kPi / 180.0;
  return p;
}

}  // namespace

TEST_CASE("transmittance follows the fiber attenuation law") {
  Params p = nominal();
  CHECK(qkd::channel::transmittance(p) ==
        doctest::Approx(0.065).epsilon(1e-12));
  p.distance_km = 0.0;
  CHECK(qkd::channel::transmittance(p) == doctest::Approx(0.65).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  Params p = nominal();
  p.dark_prob = 1.0;
  CHECK_THROWS_AS(qkd::channel::validate(p), std::invalid_argument);
  p = nominal();
  p.eta_det = 0.0;
  CHECK_THROWS_AS(qkd::channel::validate(p), std::invalid_argument);
  p = nominal();
  p.alpha_db_per_km = -0.1;
  CHECK_THROWS_AS(qkd::channel::validate(p), std::invalid_argument);
  p = nominal();
  p.distance_km = -1.0;
  CHECK_THROWS_AS(qkd::channel::validate(p), std::invalid_argument);
  p = nominal();
  p.misalignment_rad = 4.0;
  CHECK_THROWS_AS(qkd::channel::validate(p), std::invalid_argument);
  CHECK_NOTHROW(qkd::channel::validate(nominal()));
}

TEST_CASE("state angles") {
  CHECK(qkd::channel::state_angle(State::z0) == 0.0);
  CHECK(qkd::channel::state_angle(State::z1) ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(qkd::channel::state_angle(State::x0) ==
        doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(qkd::channel::state_angle(State::x1) ==
        doctest::Approx(3 * kPi / 4).epsilon(1e-15));
}

TEST_CASE("outcome probabilities conserve the gain") {
  // The two outcomes partition every click regardless of setting and basis.
  for (double pd : {0.0, 7.2e-8, 1e-3}) {
    for (double dist : {0.0, 50.0, 120.0}) {
      for (double mis : {0.0, 0.1}) {
        for (double mu : {1e-4, 0.1, 0.5}) {
          Params p;
          p.dark_prob = pd;
          p.eta_det = 0.65;
          p.distance_km = dist;
          p.misalignment_rad = mis;
          const double q = qkd::channel::gain(p, mu);
          for (State a : {State::z0, State::z1, State::x0, State::x1}) {
            for (Basis b : {Basis::z, Basis::x}) {
              const double sum = qkd::channel::outcome_prob(p, a, mu, b, 0) +
                                 qkd::channel::outcome_prob(p, a, mu, b, 1);
              CHECK(std::fabs(sum - q) < 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("error rates agree between the two bases") {
  for (double mis : {0.0, 0.05, 6.0 * kPi / 180.0, 0.3}) {
    Params p = nominal();
    p.misalignment_rad = mis;
    for (double mu : {1e-4, 0.1, 0.5}) {
      const double ez = qkd::channel::error_rate(p, mu, Basis::z);
      const double ex = qkd::channel::error_rate(p, mu, Basis::x);
      CHECK(std::fabs(ez - ex) < 1e-12);
    }
  }
}

TEST_CASE("six degrees of misalignment cost about one percent") {
  Params p = nominal();
  p.dark_prob = 0.0;
  for (double dist : {0.0, 50.0, 100.0}) {
    p.distance_km = dist;
    const double qber = qkd::channel::error_rate(p, 0.5, Basis::z) /
                        qkd::channel::gain(p, 0.5);
    CHECK(qber > 0.007);
    CHECK(qber < 0.013);
  }
}

TEST_CASE("gain follows the coherent-pulse click formula") {
  Params p = nominal();
  const double eta = qkd::channel::transmittance(p);
  for (double mu : {0.0, 0.1, 0.5}) {
    const double expect =
        1.0 - (1.0 - p.dark_prob) * (1.0 - p.dark_prob) * std::exp(-mu * eta);
    CHECK(qkd::channel::gain(p, mu) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(qkd::channel::gain(p, 0.5) > qkd::channel::gain(p, 0.1));
}

TEST_CASE("photon-number-resolved statistics match direct event enumeration") {
  Params p = nominal();
  p.distance_km = 25.0;
  for (int n : {0, 1, 2, 3}) {
    CHECK(qkd::channel::fock_gain(p, n) ==
          doctest::Approx(oracle::photon_gain(p, n)).epsilon(1e-13));
    for (State a : {State::z0, State::z1, State::x0, State::x1}) {
      for (Basis b : {Basis::z, Basis::x}) {
        for (int outcome : {0, 1}) {
          const double lib = qkd::channel::fock_outcome_prob(p, a, n, b,
                                                             outcome);
          const double ref = oracle::photon_outcome(
              p, qkd::channel::state_angle(a), n, b == Basis::x, outcome);
          CHECK(lib == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("coherent statistics are the poisson mixture of the resolved ones") {
  Params p = nominal();
  p.distance_km = 10.0;
  const double mu = 0.4;
  double mix_gain = 0.0;
  double mix_out = 0.0;
  for (int n = 0; n <= 200; ++n) {
    const double pn = qkd::decoy::pn_given_mu(mu, n);
    mix_gain += pn * qkd::channel::fock_gain(p, n);
    mix_out += pn * qkd::channel::fock_outcome_prob(p, State::x0, n, Basis::x, 1);
  }
  CHECK(qkd::channel::gain(p, mu) == doctest::Approx(mix_gain).epsilon(1e-12));
  CHECK(qkd::channel::outcome_prob(p, State::x0, mu, Basis::x, 1) ==
        doctest::Approx(mix_out).epsilon(1e-12).scale(1.0));
}

TEST_CASE("errors never exceed the gain and grow with misalignment") {
  Params p = nominal();
  double prev = -1.0;
  for (double mis : {0.0, 0.05, 0.1, 0.2, 0.3}) {
    p.misalignment_rad = mis;
    const double e = qkd::channel::error_rate(p, 0.5, Basis::z);
    CHECK(e <= qkd::channel::gain(p, 0.5) + 1e-15);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("invalid channel queries throw") {
  Params p = nominal();
  CHECK_THROWS_AS(qkd::channel::gain(p, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(qkd::channel::outcome_prob(p, State::z0, 0.5, Basis::z, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(qkd::channel::fock_gain(p, -1), std::invalid_argument);
  CHECK_THROWS_AS(qkd::channel::fock_outcome_prob(p, State::z0, -1, Basis::z, 0),
                  std::invalid_argument);
}

namespace {

qkd::ExperimentConfig base_config(qkd::Protocol proto) {
  qkd::ExperimentConfig cfg;
  cfg.protocol = proto;
  cfg.n_total = 1e9;
  cfg.channel = nominal();
  cfg.source = qkd::decoy::PhotonSource{{0.5, 0.1, 1e-4}, {0.5, 0.25, 0.25}, 12};
  cfg.p_z_alice = 0.9;
  cfg.p_z_bob = 0.9;
  return cfg;
}

}  // namespace

TEST_CASE("expected statistics reproduce the channel model term by term") {
  const auto cfg = base_config(qkd::Protocol::bb84);
  const auto obs = qkd::expected_statistics(cfg);
  REQUIRE(obs.m_z.size() == 3);
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double mu = cfg.source.intensities[i];
    const double rounds = cfg.n_total * 0.81 * cfg.source.probs[i];
    CHECK(obs.m_z[i] ==
          doctest::Approx(rounds * qkd::channel::gain(cfg.channel, mu))
              .epsilon(1e-12));
    CHECK(obs.e_x[i] ==
          doctest::Approx(cfg.n_total * 0.01 * cfg.source.probs[i] *
                          qkd::channel::error_rate(cfg.channel, mu, Basis::x))
              .epsilon(1e-12));
    total += obs.m_z[i];
    err += rounds * qkd::channel::error_rate(cfg.channel, mu, Basis::z);
  }
  CHECK(obs.m_z_total == doctest::Approx(total).epsilon(1e-14));
  CHECK(obs.e_z_rate == doctest::Approx(err / total).epsilon(1e-12));
}

TEST_CASE("expected statistics fill the three-state table") {
  const auto cfg = base_config(qkd::Protocol::lt);
  const auto obs = qkd::expected_statistics(cfg);
  REQUIRE(obs.m_lt.size() == 3);
  const State states[3] = {State::z0, State::z1, State::x0};
  for (std::size_t i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a) {
      const double p_a = a == 2 ? 1.0 - cfg.p_z_alice : cfg.p_z_alice / 2.0;
      for (int b = 0; b < 2; ++b) {
        const double expect =
            cfg.n_total * cfg.source.probs[i] * p_a * (1.0 - cfg.p_z_bob) *
            qkd::channel::outcome_prob(cfg.channel, states[a],
                                       cfg.source.intensities[i], Basis::x, b);
        CHECK(obs.m_lt[i][static_cast<std::size_t>(a)]
                        [static_cast<std::size_t>(b)] ==
              doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("an empty run produces empty statistics") {
  auto cfg = base_config(qkd::Protocol::bb84);
  cfg.n_total = 0.0;
  const auto obs = qkd::expected_statistics(cfg);
  CHECK(obs.m_z_total == 0.0);
  CHECK(obs.e_z_rate == 0.0);
  for (double v : obs.m_z) CHECK(v == 0.0);
}

TEST_CASE("sampled statistics are seed-deterministic and near the mean") {
  const auto cfg = base_config(qkd::Protocol::bb84);
  const auto a = qkd::sampled_statistics(cfg, 42);
  const auto b = qkd::sampled_statistics(cfg, 42);
  const auto c = qkd::sampled_statistics(cfg, 43);
  CHECK(a.m_z == b.m_z);
  CHECK(a.e_x == b.e_x);
  CHECK(a.e_z_rate == b.e_z_rate);
  CHECK(a.m_z != c.m_z);

  const auto mean = qkd::expected_statistics(cfg);
  for (std::size_t i = 0; i < mean.m_z.size(); ++i) {
    const double sigma = std::sqrt(mean.m_z[i]) + 1.0;
    CHECK(std::fabs(a.m_z[i] - mean.m_z[i]) < 6.0 * sigma);
  }
}

TEST_CASE("sampled three-state counts integerize the expected table") {
  const auto cfg = base_config(qkd::Protocol::lt);
  const auto s = qkd::sampled_statistics(cfg, 7);
  const auto mean = qkd::expected_statistics(cfg);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        const double drawn = s.m_lt[i][a][b];
        CHECK(drawn == std::floor(drawn));
        const double sigma = std::sqrt(mean.m_lt[i][a][b]) + 1.0;
        CHECK(std::fabs(drawn - mean.m_lt[i][a][b]) < 6.0 * sigma);
      }
}
