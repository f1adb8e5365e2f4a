#include "qkd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qkd {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

ExperimentConfig scenario_config(const SweepPlan& plan, const Scenario& sc,
                                 double distance_km, const TunableParams& p) {
  ExperimentConfig c = apply_params(plan.base, p);
  c.protocol = sc.protocol;
  c.channel.distance_km = distance_km;
  c.delta = sc.i_max < 0.0 ? sc.delta : 1.0;
  c.i_max = sc.i_max;
  return c;
}

KeyRateResult evaluate_scenario(const ExperimentConfig& cfg,
                                const Scenario& sc, Exec exec) {
  if (sc.kappa > 1.0 || sc.n_sub > 1)
    return rate_worst_case_subintervals(cfg, sc.kappa, sc.n_sub,
                                        sc.resimulate, exec);
  return protocol_rate(cfg);
}

Protocol parse_protocol(const std::string& word) {
  if (word == "bb84") return Protocol::bb84;
  if (word == "lt") return Protocol::lt;
  throw cfg::ParseError("config: key 'run.protocol' must list bb84 or lt, "
                        "got '" + word + "'");
}

}  // namespace

std::string protocol_name(Protocol p) {
  return p == Protocol::bb84 ? "bb84" : "lt";
}

SweepPlan plan_from_config(const cfg::Config& config) {
  SweepPlan plan;

  std::vector<Protocol> protocols;
  if (config.has("run.protocol")) {
    for (const std::string& w : config.get_words("run.protocol"))
      protocols.push_back(parse_protocol(w));
  }
  if (protocols.empty()) protocols.push_back(Protocol::bb84);

  plan.base.n_total = config.get_double("run.n_total");
  plan.base.eps_secrecy = config.get_double("run.eps_secrecy", 1e-10);
  plan.base.eps_correct = config.get_double("run.eps_correct", 1e-10);
  plan.base.f_ec = config.get_double("run.f_ec", 1.2);
  plan.base.source.n_cut = config.get_int("run.n_cut", 12);

  plan.base.channel.dark_prob = config.get_double("channel.dark_prob");
  plan.base.channel.eta_det = config.get_double("channel.eta_det");
  plan.base.channel.alpha_db_per_km =
      config.get_double("channel.alpha_db_per_km", 0.2);
  plan.base.channel.misalignment_rad =
      config.get_double("channel.misalignment_deg", 0.0) * kPi / 180.0;

  plan.fixed.mu0 = config.get_double("source.mu0", 0.5);
  plan.fixed.mu1 = config.get_double("source.mu1", 0.1);
  plan.fixed.p_z = config.get_double("source.p_z", 0.9);
  plan.fixed.p_mu0 = config.get_double("source.p_mu0", 0.5);
  const double mu2 = config.get_double("source.mu2", 1e-4);
  plan.base.source.intensities = {plan.fixed.mu0, plan.fixed.mu1, mu2};
  plan.base.source.probs = {plan.fixed.p_mu0,
                            0.5 * (1.0 - plan.fixed.p_mu0),
                            0.5 * (1.0 - plan.fixed.p_mu0)};
  plan.base.p_z_alice = plan.fixed.p_z;
  plan.base.p_z_bob = plan.fixed.p_z;

  const bool has_delta = config.has("leak.delta");
  const bool has_imax = config.has("leak.i_max");
  if (has_delta && has_imax)
    throw cfg::ParseError(
        "config: keys 'leak.delta' and 'leak.i_max' are mutually exclusive");
  std::vector<double> deltas{1.0};
  std::vector<double> i_maxes;
  if (has_imax) {
    i_maxes = config.get_numbers("leak.i_max");
    if (i_maxes.empty())
      throw cfg::ParseError("config: key 'leak.i_max' has no values");
    for (double v : i_maxes)
      if (v < 0.0)
        throw cfg::ParseError("config: key 'leak.i_max' must be >= 0");
  } else {
    deltas = config.get_numbers("leak.delta", deltas);
    if (deltas.empty())
      throw cfg::ParseError("config: key 'leak.delta' has no values");
    for (double v : deltas)
      if (v < 0.0 || v > 1.0)
        throw cfg::ParseError("config: key 'leak.delta' must lie in [0,1]");
  }
  const std::vector<double> kappas =
      config.get_numbers("leak.kappa", {1.0});
  if (kappas.empty())
    throw cfg::ParseError("config: key 'leak.kappa' has no values");
  for (double k : kappas)
    if (k < 1.0)
      throw cfg::ParseError("config: key 'leak.kappa' must be >= 1");
  const bool attacked =
      std::any_of(kappas.begin(), kappas.end(),
                  [](double k) { return k > 1.0; });
  const int n_sub = config.get_int("leak.n_sub", 1);
  if (n_sub < 1)
    throw cfg::ParseError("config: key 'leak.n_sub' must be >= 1");
  if ((attacked || n_sub > 1) && !has_imax)
    throw cfg::ParseError(
        "config: key 'leak.kappa' > 1 or 'leak.n_sub' > 1 requires "
        "'leak.i_max'");
  const bool resimulate = config.get_bool("leak.resimulate", false);

  for (Protocol proto : protocols) {
    const std::size_t leak_count =
        has_imax ? i_maxes.size() : deltas.size();
    for (std::size_t li = 0; li < leak_count; ++li) {
      for (double kappa : kappas) {
        Scenario sc;
        sc.protocol = proto;
        if (has_imax) {
          sc.i_max = i_maxes[li];
        } else {
          sc.delta = deltas[li];
        }
        sc.kappa = kappa;
        sc.n_sub = kappa > 1.0 ? n_sub : 1;
        sc.resimulate = resimulate;
        plan.scenarios.push_back(sc);
      }
    }
  }

  plan.distances_km = config.get_numbers("sweep.distance_km");
  for (double d : plan.distances_km)
    if (d < 0.0)
      throw cfg::ParseError(
          "config: key 'sweep.distance_km' must be >= 0");

  plan.optimize_params = config.get_bool("optimize.enabled", true);
  plan.warm_start = config.get_bool("optimize.warm_start", true);
  plan.options.grid_points = config.get_int("optimize.grid_points", 8);
  plan.options.tol = config.get_double("optimize.tol", 1e-3);
  plan.options.sweeps = config.get_int("optimize.sweeps", 2);

  const std::vector<std::string> unread = config.unread_keys();
  if (!unread.empty())
    throw cfg::ParseError("config: unknown key '" + unread.front() + "'");

  validate(scenario_config(plan, plan.scenarios.front(), 0.0, plan.fixed));
  return plan;
}

std::vector<SweepRow> run_plan(const SweepPlan& plan, Exec exec) {
  std::vector<SweepRow> rows;
  rows.reserve(plan.scenarios.size() * plan.distances_km.size());
  OptimizeOptions options = plan.options;
  options.exec = exec;

  for (const Scenario& sc : plan.scenarios) {
    TunableParams warm = plan.fixed;
    bool have_warm = false;
    for (double distance : plan.distances_km) {
      SweepRow row;
      row.scenario = sc;
      row.distance_km = distance;
      row.params = plan.fixed;
      try {
        if (plan.optimize_params) {
          const ExperimentConfig base =
              scenario_config(plan, sc, distance, plan.fixed);
          const RateFunction fn = [&](const ExperimentConfig& c) {
            return evaluate_scenario(c, sc, exec);
          };
          const TunableParams* seed =
              plan.warm_start && have_warm ? &warm : nullptr;
          const OptimizeOutcome out = optimize(base, fn, options, seed);
          row.params = out.params;
          row.result = out.result;
          warm = out.params;
          have_warm = true;
        } else {
          const ExperimentConfig c =
              scenario_config(plan, sc, distance, plan.fixed);
          row.result = evaluate_scenario(c, sc, exec);
        }
      } catch (const std::exception& e) {
        row.result = KeyRateResult{};
        row.error = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "protocol,delta,i_max,kappa,n_sub,distance_km,rate,key_length,"
         "m1_lower,mph1_upper,eph_upper,mu0,mu1,p_z,p_mu0,error\n";
  for (const SweepRow& r : rows) {
    const double delta_eff =
        r.scenario.i_max < 0.0 ? r.scenario.delta
                               : std::exp(-0.5 * r.scenario.i_max);
    out << protocol_name(r.scenario.protocol) << ',' << fmt(delta_eff) << ','
        << (r.scenario.i_max < 0.0 ? std::string()
                                   : fmt(r.scenario.i_max))
        << ',' << fmt(r.scenario.kappa) << ',' << r.scenario.n_sub << ','
        << fmt(r.distance_km) << ',' << fmt(r.result.rate) << ','
        << fmt(r.result.key_length) << ',' << fmt(r.result.m1_lower) << ','
        << fmt(r.result.mph1_upper) << ',' << fmt(r.result.eph_upper) << ','
        << fmt(r.params.mu0) << ',' << fmt(r.params.mu1) << ','
        << fmt(r.params.p_z) << ',' << fmt(r.params.p_mu0) << ','
        << csv_quote(r.error) << '\n';
  }
}

}  // namespace qkd
