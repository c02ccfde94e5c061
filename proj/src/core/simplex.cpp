#include "core/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "core/errors.hpp"

namespace pfopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;

enum class VarState { basic, at_lower, at_upper, free_zero };

struct Tableau {
  Eigen::MatrixXd A;   // m x (n + m), structural then artificial columns
  Eigen::VectorXd lo, up, x;
  std::vector<VarState> state;
  std::vector<Eigen::Index> basis;  // length m
  Eigen::MatrixXd Binv;
  Eigen::Index n_struct = 0;

  Eigen::Index cols() const { return A.cols(); }
  Eigen::Index rows() const { return A.rows(); }

  void refactorize(const Eigen::VectorXd& b) {
    const Eigen::Index m = rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(basis[static_cast<std::size_t>(i)]);
    Binv = B.fullPivLu().inverse();
    // Recompute basic values from the nonbasic bound values.
    Eigen::VectorXd rhs = b;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (state[static_cast<std::size_t>(j)] == VarState::basic) continue;
      if (x[j] != 0.0) rhs -= A.col(j) * x[j];
    }
    const Eigen::VectorXd xb = Binv * rhs;
    for (Eigen::Index i = 0; i < m; ++i) x[basis[static_cast<std::size_t>(i)]] = xb[i];
  }
};

}  // namespace

LpResult solve_lp(const Lp& lp, int max_iter, double tol) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  require(lp.b.size() == m && lp.c.size() == n && lp.lo.size() == n && lp.up.size() == n,
          Errc::dimension_mismatch, "LP dimension mismatch");

  Tableau t;
  t.n_struct = n;
  t.A.setZero(m, n + m);
  t.A.leftCols(n) = lp.A;
  t.lo.resize(n + m);
  t.up.resize(n + m);
  t.x.setZero(n + m);
  t.state.assign(static_cast<std::size_t>(n + m), VarState::at_lower);
  t.lo.head(n) = lp.lo;
  t.up.head(n) = lp.up;

  // Nonbasic starting values at a finite bound (or zero for free columns).
  for (Eigen::Index j = 0; j < n; ++j) {
    require(lp.lo[j] <= lp.up[j], Errc::infeasible, "LP has lo > up");
    if (std::isfinite(lp.lo[j])) {
      t.x[j] = lp.lo[j];
      t.state[static_cast<std::size_t>(j)] = VarState::at_lower;
    } else if (std::isfinite(lp.up[j])) {
      t.x[j] = lp.up[j];
      t.state[static_cast<std::size_t>(j)] = VarState::at_upper;
    } else {
      t.x[j] = 0.0;
      t.state[static_cast<std::size_t>(j)] = VarState::free_zero;
    }
  }

  // Artificial basis absorbing the residual.
  Eigen::VectorXd residual = lp.b;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (t.x[j] != 0.0) residual -= lp.A.col(j) * t.x[j];
  }
  t.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index aj = n + i;
    t.A(i, aj) = residual[i] >= 0.0 ? 1.0 : -1.0;
    t.lo[aj] = 0.0;
    t.up[aj] = kInf;
    t.x[aj] = std::abs(residual[i]);
    t.state[static_cast<std::size_t>(aj)] = VarState::basic;
    t.basis[static_cast<std::size_t>(i)] = aj;
  }
  t.refactorize(lp.b);

  const double bscale = std::max(1.0, lp.b.cwiseAbs().maxCoeff());

  LpResult result;
  int total_iterations = 0;
  int since_refactor = 0;

  auto run_phase = [&](const Eigen::VectorXd& cost, int phase) -> LpStatus {
    int degenerate_run = 0;
    while (total_iterations < max_iter) {
      // Simplex multipliers and pricing.
      Eigen::VectorXd cb(m);
      for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost[t.basis[static_cast<std::size_t>(i)]];
      const Eigen::VectorXd y = t.Binv.transpose() * cb;

      const bool bland = degenerate_run > 2 * static_cast<int>(m) + 20;
      Eigen::Index entering = -1;
      double best_violation = tol;
      int enter_dir = 0;
      for (Eigen::Index j = 0; j < t.cols(); ++j) {
        const VarState st = t.state[static_cast<std::size_t>(j)];
        if (st == VarState::basic) continue;
        if (t.up[j] <= t.lo[j]) continue;  // fixed column, nothing to move
        if (phase == 2 && j >= n) continue;  // artificials may not re-enter
        const double d = cost[j] - y.dot(t.A.col(j));
        int dir = 0;
        double violation = 0.0;
        if (st == VarState::at_lower && d < -tol) {
          dir = +1;
          violation = -d;
        } else if (st == VarState::at_upper && d > tol) {
          dir = -1;
          violation = d;
        } else if (st == VarState::free_zero && std::abs(d) > tol) {
          dir = d < 0 ? +1 : -1;
          violation = std::abs(d);
        }
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          enter_dir = dir;
          break;
        }
        if (violation > best_violation) {
          best_violation = violation;
          entering = j;
          enter_dir = dir;
        }
      }
      if (entering < 0) return LpStatus::optimal;

      const Eigen::VectorXd u = t.Binv * t.A.col(entering);

      // Ratio test: step length before a basic variable (or the entering
      // variable itself) hits a bound.
      double step = kInf;
      Eigen::Index leave_pos = -1;
      double leave_bound = 0.0;
      const double range = t.up[entering] - t.lo[entering];
      if (std::isfinite(range)) step = range;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double flow = enter_dir * u[i];  // basic i decreases at this rate
        const Eigen::Index bj = t.basis[static_cast<std::size_t>(i)];
        if (flow > kPivotTol) {
          if (!std::isfinite(t.lo[bj])) continue;
          const double s = (t.x[bj] - t.lo[bj]) / flow;
          if (s < step - 1e-12 || (s < step + 1e-12 && leave_pos >= 0 &&
                                   bj < t.basis[static_cast<std::size_t>(leave_pos)])) {
            step = s;
            leave_pos = i;
            leave_bound = t.lo[bj];
          }
        } else if (flow < -kPivotTol) {
          if (!std::isfinite(t.up[bj])) continue;
          const double s = (t.x[bj] - t.up[bj]) / flow;
          if (s < step - 1e-12 || (s < step + 1e-12 && leave_pos >= 0 &&
                                   bj < t.basis[static_cast<std::size_t>(leave_pos)])) {
            step = s;
            leave_pos = i;
            leave_bound = t.up[bj];
          }
        }
      }
      if (!std::isfinite(step)) return LpStatus::unbounded;
      step = std::max(step, 0.0);
      degenerate_run = step < 1e-12 * bscale ? degenerate_run + 1 : 0;

      // Apply the move.
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index bj = t.basis[static_cast<std::size_t>(i)];
        t.x[bj] -= step * enter_dir * u[i];
      }
      t.x[entering] += enter_dir * step;
      ++total_iterations;

      if (leave_pos < 0) {
        // Bound flip: the entering variable traversed its whole range.
        t.state[static_cast<std::size_t>(entering)] =
            enter_dir > 0 ? VarState::at_upper : VarState::at_lower;
        continue;
      }

      const Eigen::Index leaving = t.basis[static_cast<std::size_t>(leave_pos)];
      t.x[leaving] = leave_bound;
      t.state[static_cast<std::size_t>(leaving)] =
          leave_bound == t.lo[leaving] && t.lo[leaving] == t.up[leaving]
              ? VarState::at_lower
              : (leave_bound == t.up[leaving] && std::isfinite(t.up[leaving]) &&
                         leave_bound != t.lo[leaving]
                     ? VarState::at_upper
                     : VarState::at_lower);
      t.state[static_cast<std::size_t>(entering)] = VarState::basic;
      t.basis[static_cast<std::size_t>(leave_pos)] = entering;

      // Product-form update of Binv; periodic refactorization for stability.
      const double pivot = u[leave_pos];
      if (std::abs(pivot) < kPivotTol || ++since_refactor >= 64) {
        since_refactor = 0;
        t.refactorize(lp.b);
      } else {
        t.Binv.row(leave_pos) /= pivot;
        for (Eigen::Index i = 0; i < m; ++i) {
          if (i == leave_pos) continue;
          const double f = u[i];
          if (f != 0.0) t.Binv.row(i) -= f * t.Binv.row(leave_pos);
        }
      }
    }
    return LpStatus::iteration_limit;
  };

  // Phase 1: drive the artificial infeasibility to zero.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + m);
  cost1.tail(m).setOnes();
  LpStatus st = run_phase(cost1, 1);
  if (st == LpStatus::iteration_limit) {
    result.status = st;
    result.iterations = total_iterations;
    return result;
  }
  double art_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) art_sum += t.x[n + i];
  if (art_sum > 1e-7 * bscale) {
    result.status = LpStatus::infeasible;
    result.iterations = total_iterations;
    return result;
  }

  // Pivot leftover zero-level artificials out of the basis when possible;
  // freeze them (redundant rows) otherwise.
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = t.basis[static_cast<std::size_t>(i)];
    if (bj < n) continue;
    Eigen::Index repl = -1;
    double best = kPivotTol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (t.state[static_cast<std::size_t>(j)] == VarState::basic) continue;
      const double val = t.Binv.row(i).dot(t.A.col(j));
      if (std::abs(val) > best) {
        best = std::abs(val);
        repl = j;
      }
    }
    if (repl >= 0) {
      const Eigen::VectorXd u = t.Binv * t.A.col(repl);
      const double pivot = u[i];
      t.state[static_cast<std::size_t>(bj)] = VarState::at_lower;
      t.x[bj] = 0.0;
      t.state[static_cast<std::size_t>(repl)] = VarState::basic;
      t.basis[static_cast<std::size_t>(i)] = repl;
      t.Binv.row(i) /= pivot;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (r != i && u[r] != 0.0) t.Binv.row(r) -= u[r] * t.Binv.row(i);
      }
      t.refactorize(lp.b);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index aj = n + i;
    if (t.state[static_cast<std::size_t>(aj)] != VarState::basic) {
      t.lo[aj] = 0.0;
      t.up[aj] = 0.0;
      t.x[aj] = 0.0;
    }
  }

  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n + m);
  cost2.head(n) = lp.c;
  st = run_phase(cost2, 2);
  result.status = st;
  result.iterations = total_iterations;
  if (st != LpStatus::optimal) return result;

  t.refactorize(lp.b);
  result.x = t.x.head(n);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost2[t.basis[static_cast<std::size_t>(i)]];
  result.y = t.Binv.transpose() * cb;
  result.objective = lp.c.dot(result.x);

  double comp = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (t.state[static_cast<std::size_t>(j)] == VarState::basic) continue;
    const double d = lp.c[j] - result.y.dot(lp.A.col(j));
    switch (t.state[static_cast<std::size_t>(j)]) {
      case VarState::at_lower:
        comp = std::max(comp, -d);
        break;
      case VarState::at_upper:
        comp = std::max(comp, d);
        break;
      case VarState::free_zero:
        comp = std::max(comp, std::abs(d));
        break;
      default:
        break;
    }
  }
  result.complementarity = comp;
  return result;
}

}  // namespace pfopt
