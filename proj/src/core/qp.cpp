#include "core/qp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace pfopt {

namespace {

// Solves the equality-constrained subproblem restricted to the free set:
//   min 1/2 xF' Q_FF xF + dF' xF   s.t.  A_F xF = b
// via the range-space form (Q_FF is PD).
void solve_eq_qp(const Eigen::MatrixXd& Qff, const Eigen::VectorXd& df,
                 const Eigen::MatrixXd& Af, const Eigen::VectorXd& b, Eigen::VectorXd& xf,
                 Eigen::VectorXd& lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(Qff);
  require(llt.info() == Eigen::Success, Errc::solver_failure,
          "QP subproblem matrix is not positive definite");
  const Eigen::VectorXd qinv_d = llt.solve(df);
  const Eigen::MatrixXd qinv_at = llt.solve(Af.transpose());
  const Eigen::MatrixXd s = Af * qinv_at;  // k x k, k <= 2
  const Eigen::VectorXd rhs = -(b + Af * qinv_d);
  lambda = s.fullPivLu().solve(rhs);
  xf = -qinv_d - qinv_at * lambda;
}

}  // namespace

QpResult solve_qp_nonneg(const Eigen::MatrixXd& Q, const Eigen::VectorXd& d,
                         const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x0, int max_iter, double tol) {
  const Eigen::Index n = Q.rows();
  require(Q.cols() == n && d.size() == n && A.cols() == n && A.rows() == b.size() &&
              x0.size() == n,
          Errc::dimension_mismatch, "QP dimension mismatch");

  Eigen::VectorXd x = x0;
  std::vector<bool> active(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] <= 0.0) {
      x[i] = 0.0;
      active[static_cast<std::size_t>(i)] = true;
    }
  }

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(A.rows());
  const double scale = std::max({1.0, Q.cwiseAbs().maxCoeff(), d.cwiseAbs().maxCoeff()});

  for (int iter = 1; iter <= max_iter; ++iter) {
    // Assemble the free set.
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    }
    require(!free_idx.empty(), Errc::solver_failure, "QP: working set fixed every variable");

    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd Qff(nf, nf);
    Eigen::VectorXd df(nf);
    Eigen::MatrixXd Af(A.rows(), nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      df[a] = d[free_idx[static_cast<std::size_t>(a)]];
      Af.col(a) = A.col(free_idx[static_cast<std::size_t>(a)]);
      for (Eigen::Index c = 0; c < nf; ++c) {
        Qff(a, c) = Q(free_idx[static_cast<std::size_t>(a)], free_idx[static_cast<std::size_t>(c)]);
      }
    }

    Eigen::VectorXd xf_target;
    solve_eq_qp(Qff, df, Af, b, xf_target, lambda);

    // Step from the current free components toward the subproblem optimum.
    Eigen::VectorXd xf_now(nf);
    for (Eigen::Index a = 0; a < nf; ++a) xf_now[a] = x[free_idx[static_cast<std::size_t>(a)]];
    const Eigen::VectorXd p = xf_target - xf_now;

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < nf; ++a) {
      if (p[a] < -1e-14 && xf_target[a] < -1e-14) {
        const double step = xf_now[a] / -p[a];
        if (step < alpha) {
          alpha = step;
          blocking = free_idx[static_cast<std::size_t>(a)];
        }
      }
    }

    for (Eigen::Index a = 0; a < nf; ++a) {
      const Eigen::Index i = free_idx[static_cast<std::size_t>(a)];
      x[i] = std::max(0.0, xf_now[a] + alpha * p[a]);
    }

    if (blocking >= 0) {
      x[blocking] = 0.0;
      active[static_cast<std::size_t>(blocking)] = true;
      continue;
    }

    // At the working-set optimum; check multipliers of the active bounds.
    const Eigen::VectorXd grad = Q * x + d + A.transpose() * lambda;
    Eigen::Index release = -1;
    double most_negative = -tol * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[static_cast<std::size_t>(i)] && grad[i] < most_negative) {
        most_negative = grad[i];
        if (release < 0) release = i;  // smallest index among violators (anti-cycling)
      }
    }
    if (release < 0) {
      QpResult res;
      res.x = x;
      res.eq_multipliers = lambda;
      res.iterations = iter;
      double kkt = (A * x - b).cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (active[static_cast<std::size_t>(i)]) {
          kkt = std::max(kkt, std::max(0.0, -grad[i]) / scale);
        } else {
          kkt = std::max(kkt, std::abs(grad[i]) / scale);
        }
      }
      res.kkt_residual = kkt;
      return res;
    }
    active[static_cast<std::size_t>(release)] = false;
  }
  raise(Errc::solver_failure,
        "QP active-set did not converge in " + std::to_string(max_iter) + " iterations");
}

}  // namespace pfopt
