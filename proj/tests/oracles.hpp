#pragma once

// Independent reference implementations used only by tests. Everything here
// recomputes results through a different route than the library: brute-force
// vertex enumeration for the LPs, 1-D numeric search for the concentration
// parameters, and direct event enumeration for the single-photon channel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/kato.hpp"
#include "qkd/simplex.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Brute-force LP solver: enumerate every candidate vertex (n tight
// constraints chosen from row sides and variable bounds), keep the feasible
// ones, and take the best objective. Exponential, so only for small inputs.

struct DenseLp {
  const qkd::lp::Problem* p;
  std::size_t n;
  std::size_t m;
  double var_lo(std::size_t j) const {
    return p->var_lo.empty() ? 0.0 : p->var_lo[j];
  }
  double var_hi(std::size_t j) const {
    return p->var_hi.empty() ? 1.0 : p->var_hi[j];
  }
};

inline bool solve_square(std::vector<double> a, std::vector<double> rhs,
                         std::vector<double>& x) {
  const std::size_t k = rhs.size();
  x.assign(k, 0.0);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(a[r * k + col]) > std::fabs(a[piv * k + col])) piv = r;
    if (std::fabs(a[piv * k + col]) < 1e-12) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < k; ++c)
        std::swap(a[piv * k + c], a[col * k + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / a[col * k + col];
      for (std::size_t c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t ri = k; ri-- > 0;) {
    double v = rhs[ri];
    for (std::size_t c = ri + 1; c < k; ++c) v -= a[ri * k + c] * x[c];
    x[ri] = v / a[ri * k + ri];
  }
  return true;
}

inline bool feasible(const DenseLp& lp, const std::vector<double>& x,
                     double tol) {
  for (std::size_t j = 0; j < lp.n; ++j)
    if (x[j] < lp.var_lo(j) - tol || x[j] > lp.var_hi(j) + tol) return false;
  for (std::size_t r = 0; r < lp.m; ++r) {
    double v = 0.0;
    for (std::size_t j = 0; j < lp.n; ++j)
      v += lp.p->rows[r].coeff[j] * x[j];
    if (v < lp.p->rows[r].lo - tol || v > lp.p->rows[r].hi + tol) return false;
  }
  return true;
}

// Returns the optimal objective value, or nullopt when no feasible vertex
// exists (the polytope is empty for bounded problems).
inline std::optional<double> solve_vertex(const qkd::lp::Problem& problem,
                                          double tol = 1e-8) {
  DenseLp lp{&problem, problem.objective.size(), problem.rows.size()};
  const bool maximize = problem.sense == qkd::lp::Sense::maximize;
  std::optional<double> best;

  const auto consider = [&](const std::vector<double>& x) {
    if (!feasible(lp, x, tol)) return;
    double v = 0.0;
    for (std::size_t j = 0; j < lp.n; ++j) v += problem.objective[j] * x[j];
    if (!best || (maximize ? v > *best : v < *best)) best = v;
  };

  std::vector<std::size_t> rows_selected;
  std::vector<std::size_t> free_vars;

  // For every subset of j rows made tight (each at its lo or hi side) and
  // every choice of j free variables, the other n-j variables sit at a box
  // bound; solve the j x j system for the free ones.
  const auto visit_assignment = [&](std::size_t j, std::uint32_t row_sides,
                                    std::uint32_t fixed_sides) {
    std::vector<char> is_free(lp.n, 0);
    for (std::size_t t = 0; t < j; ++t) is_free[free_vars[t]] = 1;
    std::vector<double> x(lp.n, 0.0);
    std::size_t fixed_idx = 0;
    for (std::size_t v = 0; v < lp.n; ++v) {
      if (is_free[v]) continue;
      x[v] = (fixed_sides >> fixed_idx & 1u) ? lp.var_hi(v) : lp.var_lo(v);
      ++fixed_idx;
    }
    if (j > 0) {
      std::vector<double> a(j * j, 0.0);
      std::vector<double> rhs(j, 0.0);
      for (std::size_t t = 0; t < j; ++t) {
        const auto& row = problem.rows[rows_selected[t]];
        double target = (row_sides >> t & 1u) ? row.hi : row.lo;
        for (std::size_t v = 0; v < lp.n; ++v) {
          if (is_free[v])
            a[t * j + static_cast<std::size_t>(
                          std::count(is_free.begin(), is_free.begin() +
                                     static_cast<long>(v), 1))] =
                row.coeff[v];
          else
            target -= row.coeff[v] * x[v];
        }
        rhs[t] = target;
      }
      std::vector<double> xf;
      if (!solve_square(a, rhs, xf)) return;
      std::size_t t = 0;
      for (std::size_t v = 0; v < lp.n; ++v)
        if (is_free[v]) x[v] = xf[t++];
    }
    consider(x);
  };

  const auto for_each_subset = [](std::size_t total, std::size_t pick,
                                  auto&& body) {
    std::vector<std::size_t> idx(pick);
    for (std::size_t t = 0; t < pick; ++t) idx[t] = t;
    while (true) {
      body(idx);
      if (pick == 0) return;  // only the empty subset exists
      std::size_t t = pick;
      while (t-- > 0) {
        if (idx[t] + (pick - t) < total) {
          ++idx[t];
          for (std::size_t u = t + 1; u < pick; ++u) idx[u] = idx[u - 1] + 1;
          break;
        }
        if (t == 0) return;
      }
    }
  };

  const std::size_t j_max = std::min(lp.n, lp.m);
  for (std::size_t j = 0; j <= j_max; ++j) {
    for_each_subset(lp.m, j, [&](const std::vector<std::size_t>& rows_idx) {
      rows_selected = rows_idx;
      for_each_subset(lp.n, j, [&](const std::vector<std::size_t>& vars_idx) {
        free_vars = vars_idx;
        const std::uint32_t side_count = 1u << j;
        const std::uint32_t fixed_count =
            static_cast<std::uint32_t>(1u << (lp.n - j));
        for (std::uint32_t rs = 0; rs < side_count; ++rs)
          for (std::uint32_t fs = 0; fs < fixed_count; ++fs)
            visit_assignment(j, rs, fs);
      });
    });
  }
  return best;
}

// Enumeration cost (candidate count); used to keep random sizes tractable.
inline double vertex_cost(std::size_t n, std::size_t m) {
  const auto choose = [](std::size_t a, std::size_t b) {
    double v = 1.0;
    for (std::size_t i = 0; i < b; ++i)
      v = v * static_cast<double>(a - i) / static_cast<double>(i + 1);
    return v;
  };
  double total = 0.0;
  for (std::size_t j = 0; j <= std::min(n, m); ++j)
    total += choose(m, j) * std::pow(2.0, static_cast<double>(j)) *
             choose(n, j) *
             std::pow(2.0, static_cast<double>(n - j));
  return total;
}

// Random LP that is feasible by construction: constraints bracket a random
// interior point with generous margins.
inline qkd::lp::Problem random_lp(std::mt19937_64& rng, std::size_t n,
                                  std::size_t m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> margin(0.05, 0.6);
  qkd::lp::Problem p;
  p.sense = unit(rng) < 0.5 ? qkd::lp::Sense::minimize
                            : qkd::lp::Sense::maximize;
  p.objective.resize(n);
  for (auto& c : p.objective) c = coeff(rng);
  std::vector<double> anchor(n);
  for (auto& v : anchor) v = unit(rng);
  p.rows.resize(m);
  for (auto& row : p.rows) {
    row.coeff.resize(n);
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row.coeff[j] = coeff(rng);
      v += row.coeff[j] * anchor[j];
    }
    row.lo = v - margin(rng);
    row.hi = v + margin(rng);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Numeric re-derivation of the concentration parameters: 1-D golden search
// over a with b(a) pinned by the tail-probability equality.

enum class KatoKind { count_lower, count_upper, sum_lower, sum_upper };

inline double kato_bound_value(KatoKind kind, const qkd::kato::BoundQuery& q,
                               double a) {
  const double r = std::sqrt(q.n);
  const double big_l = std::log(1.0 / q.epsilon);
  const bool plus_branch =
      kind == KatoKind::count_lower || kind == KatoKind::sum_upper;
  const double t = plus_branch ? 3.0 * r + 4.0 * a : 3.0 * r - 4.0 * a;
  const double b = std::sqrt(a * a + t * t * big_l / (18.0 * q.n));
  switch (kind) {
    case KatoKind::count_lower:
      return q.n / (r + 2.0 * a) * (q.prediction / r + a - b);
    case KatoKind::count_upper:
      return q.n / (r - 2.0 * a) * (q.prediction / r - a + b);
    case KatoKind::sum_lower:
      return q.prediction -
             (b + a * (2.0 * q.prediction / q.n - 1.0)) * r;
    case KatoKind::sum_upper:
      return q.prediction +
             (b + a * (2.0 * q.prediction / q.n - 1.0)) * r;
  }
  return 0.0;
}

// Best achievable bound value over a (maximal lower bounds, minimal upper
// bounds), found by golden-section search.
inline double kato_numeric_best(KatoKind kind, const qkd::kato::BoundQuery& q) {
  const bool is_lower =
      kind == KatoKind::count_lower || kind == KatoKind::sum_lower;
  const double r = std::sqrt(q.n);
  double lo = -0.49 * r;
  double hi = 0.49 * r;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto score = [&](double a) {
    const double v = kato_bound_value(kind, q, a);
    return is_lower ? v : -v;
  };
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = score(c);
  double fd = score(d);
  for (int it = 0; it < 200 && hi - lo > 1e-10 * r; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = score(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = score(d);
    }
  }
  const double a = 0.5 * (lo + hi);
  return kato_bound_value(kind, q, a);
}

// ---------------------------------------------------------------------------
// Single-photon channel statistics by direct enumeration of the photon
// routing and the two dark-count bits, with even double-click reassignment.

inline double photon_outcome(const qkd::channel::Params& ch, double angle,
                             int n_photons, bool bob_x, int outcome) {
  const double eta = qkd::channel::transmittance(ch);
  const double theta = angle + ch.misalignment_rad -
                       (bob_x ? 3.14159265358979323846 / 4.0 : 0.0);
  const double to0 = eta * std::cos(theta) * std::cos(theta);
  // Probability that no photon reaches the given detector.
  const double silent0 = std::pow(1.0 - to0, n_photons);
  const double silent1 = std::pow(1.0 - (eta - to0), n_photons);
  const double silent_both = std::pow(1.0 - eta, n_photons);
  // patterns[k]: bit0 = some photon reaches detector 0, bit1 = detector 1.
  const double patterns[4] = {
      silent_both,                              // photons reach neither
      silent1 - silent_both,                    // reach 0 only
      silent0 - silent_both,                    // reach 1 only
      1.0 - silent0 - silent1 + silent_both};   // reach both
  double total = 0.0;
  for (int d0 = 0; d0 < 2; ++d0)
    for (int d1 = 0; d1 < 2; ++d1) {
      const double p_dark = (d0 ? ch.dark_prob : 1.0 - ch.dark_prob) *
                            (d1 ? ch.dark_prob : 1.0 - ch.dark_prob);
      for (int k = 0; k < 4; ++k) {
        const bool click0 = (k & 1) || d0;
        const bool click1 = (k & 2) || d1;
        if (!click0 && !click1) continue;
        const double weight = p_dark * patterns[k];
        if (click0 && click1)
          total += 0.5 * weight;  // double click: even reassignment
        else if ((outcome == 0) == click0)
          total += weight;
      }
    }
  return total;
}

inline double photon_gain(const qkd::channel::Params& ch, int n_photons) {
  const double eta = qkd::channel::transmittance(ch);
  return 1.0 - (1.0 - ch.dark_prob) * (1.0 - ch.dark_prob) *
                   std::pow(1.0 - eta, n_photons);
}

}  // namespace oracle
