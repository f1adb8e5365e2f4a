#include <chrono>
#include <cstdio>

#include "qkd/intensity_attack.hpp"
#include "qkd/optimize.hpp"

namespace {

qkd::ExperimentConfig base_config() {
  qkd::ExperimentConfig cfg;
  cfg.protocol = qkd::Protocol::bb84;
  cfg.n_total = 1e10;
  cfg.channel.dark_prob = 7.2e-8;
  cfg.channel.eta_det = 0.65;
  cfg.channel.alpha_db_per_km = 0.2;
  cfg.channel.distance_km = 40.0;
  cfg.channel.misalignment_rad = 6.0 * 3.14159265358979323846 / 180.0;
  cfg.source.intensities = {0.5, 0.1, 1e-4};
  cfg.source.probs = {0.6, 0.2, 0.2};
  cfg.p_z_alice = 0.9;
  cfg.p_z_bob = 0.9;
  cfg.delta = 1.0;
  return cfg;
}

template <class F>
double time_once(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial_s, double par_s) {
  std::printf("%-24s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n",
              name, serial_s, par_s, serial_s / par_s);
}

}  // namespace

int main() {
  const qkd::ExperimentConfig cfg = base_config();
  std::printf("threads available: %d\n", qkd::max_threads());

  {
    qkd::OptimizeOptions opt;
    opt.sweeps = 1;
    const qkd::RateFunction fn = [](const qkd::ExperimentConfig& c) {
      return qkd::bb84_rate(c);
    };
    double r_serial = 0.0;
    double r_par = 0.0;
    opt.exec = qkd::Exec::serial;
    const double ts = time_once(
        [&] { r_serial = qkd::optimize(cfg, fn, opt).result.rate; });
    opt.exec = qkd::Exec::par;
    const double tp =
        time_once([&] { r_par = qkd::optimize(cfg, fn, opt).result.rate; });
    report("optimizer grid", ts, tp);
    if (r_serial != r_par)
      std::printf("  MISMATCH: serial %.17g vs parallel %.17g\n", r_serial,
                  r_par);
  }

  {
    qkd::ExperimentConfig attack = cfg;
    attack.i_max = 1e-5;
    qkd::KeyRateResult r_serial;
    qkd::KeyRateResult r_par;
    const double ts = time_once([&] {
      r_serial = qkd::rate_worst_case_subintervals(attack, 1.05, 256, false,
                                                   qkd::Exec::serial);
    });
    const double tp = time_once([&] {
      r_par = qkd::rate_worst_case_subintervals(attack, 1.05, 256, false,
                                                qkd::Exec::par);
    });
    report("attack subintervals", ts, tp);
    if (r_serial.key_length != r_par.key_length)
      std::printf("  MISMATCH: serial %.17g vs parallel %.17g\n",
                  r_serial.key_length, r_par.key_length);
  }

  return 0;
}
