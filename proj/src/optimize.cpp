#include "qkd/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qkd {
namespace {

// Internal coordinates: x = (mu0, t, p_z, p_mu0) with mu1 = mu2 + t(mu0-mu2),
// so every point in the box respects mu0 > mu1 > mu2.
struct Box {
  std::array<double, 4> lo;
  std::array<double, 4> hi;
};

Box make_box(double mu2) {
  Box b;
  b.lo = {std::max(10.0 * mu2, 1e-3), 0.02, 0.5, 0.1};
  b.hi = {1.2, 0.98, 0.99, 0.95};
  return b;
}

TunableParams to_params(const std::array<double, 4>& x, double mu2) {
  TunableParams p;
  p.mu0 = x[0];
  p.mu1 = mu2 + x[1] * (x[0] - mu2);
  p.p_z = x[2];
  p.p_mu0 = x[3];
  return p;
}

std::array<double, 4> to_coords(const TunableParams& p, double mu2,
                                const Box& box) {
  std::array<double, 4> x;
  x[0] = std::clamp(p.mu0, box.lo[0], box.hi[0]);
  const double span = x[0] - mu2;
  const double t = span > 0.0 ? (p.mu1 - mu2) / span : 0.5;
  x[1] = std::clamp(t, box.lo[1], box.hi[1]);
  x[2] = std::clamp(p.p_z, box.lo[2], box.hi[2]);
  x[3] = std::clamp(p.p_mu0, box.lo[3], box.hi[3]);
  return x;
}

}  // namespace

ExperimentConfig apply_params(ExperimentConfig base, const TunableParams& p) {
  if (base.source.intensities.size() != 3)
    throw std::invalid_argument("apply_params: expected a three-level source");
  const double mu2 = base.source.intensities.back();
  if (!(p.mu0 > p.mu1 && p.mu1 > mu2))
    throw std::invalid_argument("apply_params: intensities must decrease");
  base.source.intensities = {p.mu0, p.mu1, mu2};
  base.source.probs = {p.p_mu0, 0.5 * (1.0 - p.p_mu0),
                       0.5 * (1.0 - p.p_mu0)};
  base.p_z_alice = p.p_z;
  base.p_z_bob = p.p_z;
  return base;
}

OptimizeOutcome optimize(const ExperimentConfig& base, const RateFunction& rate,
                         const OptimizeOptions& opt,
                         const TunableParams* warm) {
  if (opt.grid_points < 2)
    throw std::invalid_argument("optimize: grid_points must be >= 2");
  if (!(opt.tol > 0.0) || opt.sweeps < 1)
    throw std::invalid_argument("optimize: bad tolerance or sweep count");
  const double mu2 = base.source.intensities.back();
  const Box box = make_box(mu2);

  const auto eval = [&](const std::array<double, 4>& x) {
    return rate(apply_params(base, to_params(x, mu2))).rate;
  };

  std::array<double, 4> best_x{};
  double best_f = -1.0;
  const auto consider = [&](const std::array<double, 4>& x, double f) {
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
  };

  const int g = opt.grid_points;
  const auto grid_value = [&](int d, int j) {
    return box.lo[static_cast<std::size_t>(d)] +
           (box.hi[static_cast<std::size_t>(d)] -
            box.lo[static_cast<std::size_t>(d)]) *
               j / (g - 1);
  };

  std::vector<std::array<double, 4>> points;
  if (warm) {
    // Line scans through the warm point, plus the warm point itself.
    const auto w = to_coords(*warm, mu2, box);
    points.push_back(w);
    for (int d = 0; d < 4; ++d)
      for (int j = 0; j < g; ++j) {
        auto x = w;
        x[static_cast<std::size_t>(d)] = grid_value(d, j);
        points.push_back(x);
      }
  } else {
    points.reserve(static_cast<std::size_t>(g) * g * g * g);
    for (int i0 = 0; i0 < g; ++i0)
      for (int i1 = 0; i1 < g; ++i1)
        for (int i2 = 0; i2 < g; ++i2)
          for (int i3 = 0; i3 < g; ++i3)
            points.push_back({grid_value(0, i0), grid_value(1, i1),
                              grid_value(2, i2), grid_value(3, i3)});
  }

  std::vector<double> values(points.size());
  for_each_index(opt.exec, points.size(),
                 [&](std::size_t i) { values[i] = eval(points[i]); });
  for (std::size_t i = 0; i < points.size(); ++i)
    consider(points[i], values[i]);

  // Coordinate-wise golden-section refinement from the incumbent.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::array<double, 4> cur = best_x;
  for (int sweep = 0; sweep < opt.sweeps; ++sweep) {
    for (int d = 0; d < 4; ++d) {
      const std::size_t sd = static_cast<std::size_t>(d);
      double a = box.lo[sd];
      double b = box.hi[sd];
      const double width_target = opt.tol * (b - a);
      const auto line = [&](double v) {
        auto x = cur;
        x[sd] = v;
        const double f = eval(x);
        consider(x, f);
        return f;
      };
      double c = b - invphi * (b - a);
      double e = a + invphi * (b - a);
      double fc = line(c);
      double fe = line(e);
      while (b - a > width_target) {
        if (fc >= fe) {
          b = e;
          e = c;
          fe = fc;
          c = b - invphi * (b - a);
          fc = line(c);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + invphi * (b - a);
          fe = line(e);
        }
      }
      cur = best_x;
    }
  }

  OptimizeOutcome out;
  out.params = to_params(best_x, mu2);
  out.result = rate(apply_params(base, out.params));
  return out;
}

}  // namespace qkd
