#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "qkd/sweep.hpp"

namespace {

#ifndef QKDRATE_PRESET_DIR
#define QKDRATE_PRESET_DIR "presets"
#endif

std::string preset_path(const std::string& name) {
  const char* env = std::getenv("QKDRATE_PRESET_DIR");
  const std::string dir = env && *env ? env : QKDRATE_PRESET_DIR;
  return dir + "/" + name + ".cfg";
}

int thread_request(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("QKDRATE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

void log_budgets(const qkd::SweepPlan& plan) {
  std::set<qkd::Protocol> seen;
  for (const auto& sc : plan.scenarios) {
    if (!seen.insert(sc.protocol).second) continue;
    const auto b = qkd::EpsilonBudget::split(
        plan.base.eps_secrecy, plan.base.eps_correct,
        qkd::bound_applications(sc.protocol));
    std::cerr << "budget[" << qkd::protocol_name(sc.protocol)
              << "]: eps_s=" << b.eps_s << " eps_c=" << b.eps_c
              << " eps_2=" << b.eps_2 << " eps_pa=" << b.eps_pa
              << " eps_bar=" << b.eps_bar << " per-bound=" << b.eps_bound
              << " applications=" << b.n_bounds << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-key secret-key rates for decoy-state QKD with "
               "leaky transmitters"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "evaluate a sweep and write a CSV");
  std::string config_path;
  std::string out_path;
  std::string preset;
  int threads = 0;
  run->add_option("--config", config_path, "configuration file");
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--preset", preset, "bundled configuration name")
      ->check(CLI::IsMember({"fig2", "fig3", "fig5", "fig6a", "fig6b"}));
  run->add_option("--threads", threads,
                  "worker threads (overrides QKDRATE_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (config_path.empty() == preset.empty()) {
    std::cerr << "error: give exactly one of --config or --preset\n";
    return 1;
  }
  const std::string path =
      config_path.empty() ? preset_path(preset) : config_path;

  const int n_threads = thread_request(threads);
  if (n_threads > 0) qkd::set_threads(n_threads);

  qkd::SweepPlan plan;
  try {
    plan = qkd::plan_from_config(qkd::cfg::Config::from_file(path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  log_budgets(plan);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<qkd::SweepRow> rows = qkd::run_plan(plan, qkd::Exec::par);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 2;
  }
  qkd::write_csv(out, rows);
  out.flush();
  if (!out) {
    std::cerr << "error: write to '" << out_path << "' failed\n";
    return 2;
  }

  int failures = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "row error: " << qkd::protocol_name(r.scenario.protocol)
                << " @ " << r.distance_km << " km: " << r.error << '\n';
    }
  std::cerr << "wrote " << rows.size() << " rows in " << seconds << " s ("
            << qkd::max_threads() << " threads)\n";
  return failures == 0 ? 0 : 2;
}
