#include "qkd/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace qkd::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kFeasTol = 1e-8;

struct Tableau {
  std::size_t rows = 0, cols = 0;  // cols includes the rhs column
  std::vector<double> t;
  std::vector<std::size_t> basis;

  double& at(std::size_t i, std::size_t j) { return t[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * cols + j]; }
  double rhs(std::size_t i) const { return at(i, cols - 1); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j < cols; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(pr, j);
      at(i, pc) = 0.0;
    }
    basis[pr] = pc;
  }
};

// Minimizes d over the current tableau with Bland's rule. Columns at or past
// col_limit are never chosen as entering (used to freeze artificials).
void run_simplex(Tableau& tb, std::vector<double>& red, double& obj,
                 std::size_t col_limit) {
  const std::size_t guard = 200 * (tb.rows + tb.cols) + 1000;
  for (std::size_t iter = 0; iter < guard; ++iter) {
    std::size_t enter = col_limit;
    for (std::size_t j = 0; j < col_limit; ++j) {
      if (red[j] < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter == col_limit) return;

    std::size_t leave = tb.rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tb.rows; ++i) {
      const double a = tb.at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tb.rhs(i) / a;
      if (ratio < best - 1e-12 ||
          (ratio < best + 1e-12 &&
           (leave == tb.rows || tb.basis[i] < tb.basis[leave]))) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == tb.rows)
      throw std::logic_error("lp: unbounded direction in a box-bounded LP");

    const double f = red[enter];
    tb.pivot(leave, enter);
    for (std::size_t j = 0; j < tb.cols; ++j)
      red[j] -= f * tb.at(leave, j);
    red[enter] = 0.0;
    obj += f * tb.rhs(leave);
  }
  throw std::logic_error("lp: simplex failed to terminate");
}

std::vector<double> reduced_costs(const Tableau& tb,
                                  const std::vector<double>& d) {
  std::vector<double> red(d);
  for (std::size_t i = 0; i < tb.rows; ++i) {
    const double w = d[tb.basis[i]];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < tb.cols; ++j) red[j] -= w * tb.at(i, j);
  }
  return red;
}

}  // namespace

void validate(const Problem& p) {
  const std::size_t n = p.objective.size();
  if (n == 0) throw std::invalid_argument("lp: empty objective");
  if (!p.var_lo.empty() && p.var_lo.size() != n)
    throw std::invalid_argument("lp: var_lo dimension mismatch");
  if (!p.var_hi.empty() && p.var_hi.size() != n)
    throw std::invalid_argument("lp: var_hi dimension mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = p.var_lo.empty() ? 0.0 : p.var_lo[j];
    const double hi = p.var_hi.empty() ? 1.0 : p.var_hi[j];
    if (!(lo <= hi)) throw Infeasible("lp: variable box lower exceeds upper");
  }
  for (const Row& r : p.rows) {
    if (r.coeff.size() != n)
      throw std::invalid_argument("lp: constraint dimension mismatch");
    if (!(r.lo <= r.hi)) throw Infeasible("lp: row lower bound exceeds upper");
  }
}

Solution solve(const Problem& p) {
  validate(p);
  const std::size_t n = p.objective.size();
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  if (!p.var_lo.empty()) lo = p.var_lo;
  if (!p.var_hi.empty()) hi = p.var_hi;

  // Shift to y = x - lo >= 0 and expand everything into a.y <= b form.
  struct Ineq {
    std::vector<double> a;
    double b;
  };
  std::vector<Ineq> cons;
  for (const Row& r : p.rows) {
    double shift = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      shift += r.coeff[j] * lo[j];
      scale = std::max(scale, std::fabs(r.coeff[j]));
    }
    const double rl = r.lo - shift, rh = r.hi - shift;
    if (scale == 0.0) {
      if (rl > kFeasTol || rh < -kFeasTol)
        throw Infeasible("lp: constant row outside its bounds");
      continue;
    }
    cons.push_back({r.coeff, rh});
    Ineq neg{r.coeff, -rl};
    for (double& c : neg.a) c = -c;
    cons.push_back(std::move(neg));
  }
  for (std::size_t j = 0; j < n; ++j) {
    Ineq up{std::vector<double>(n, 0.0), hi[j] - lo[j]};
    up.a[j] = 1.0;
    cons.push_back(std::move(up));
  }

  const std::size_t m = cons.size();
  std::vector<int> art_col(m, -1);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (cons[i].b < 0.0) art_col[i] = static_cast<int>(n_art++);
  }

  Tableau tb;
  tb.rows = m;
  tb.cols = n + m + n_art + 1;
  tb.t.assign(tb.rows * tb.cols, 0.0);
  tb.basis.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const double sgn = cons[i].b < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sgn * cons[i].a[j];
    tb.at(i, n + i) = sgn;  // slack
    tb.at(i, tb.cols - 1) = sgn * cons[i].b;
    if (art_col[i] >= 0) {
      tb.at(i, n + m + art_col[i]) = 1.0;
      tb.basis[i] = n + m + art_col[i];
    } else {
      tb.basis[i] = n + i;
    }
  }

  if (n_art > 0) {
    std::vector<double> d(tb.cols, 0.0);
    for (std::size_t j = n + m; j + 1 < tb.cols; ++j) d[j] = 1.0;
    std::vector<double> red = reduced_costs(tb, d);
    double obj = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (art_col[i] >= 0) obj += tb.rhs(i);
    run_simplex(tb, red, obj, n + m);
    if (obj > kFeasTol) throw Infeasible("lp: no feasible point");
    // Pivot any lingering zero-valued artificial out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::fabs(tb.at(i, j)) > kPivotTol) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> d(tb.cols, 0.0);
  const double flip = p.sense == Sense::maximize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) d[j] = flip * p.objective[j];
  std::vector<double> red = reduced_costs(tb, d);
  double obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) obj += d[tb.basis[i]] * tb.rhs(i);
  run_simplex(tb, red, obj, n + m);

  Solution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] < n) sol.x[tb.basis[i]] = tb.rhs(i);
  for (std::size_t j = 0; j < n; ++j) {
    double v = sol.x[j] + lo[j];
    sol.x[j] = v < lo[j] ? lo[j] : (v > hi[j] ? hi[j] : v);
    sol.value += p.objective[j] * sol.x[j];
  }
  return sol;
}

}  // namespace qkd::lp
