#include "core/scenario.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/stats.hpp"

namespace pfopt {

ScenarioSet simulate_scenarios(const TCopula& copula, const std::vector<AgFitState>& states,
                               int count, std::uint64_t seed, Date window_end, int threads) {
  const auto n = static_cast<Eigen::Index>(states.size());
  require(n >= 1, Errc::zero_assets, "simulate_scenarios with no fitted assets");
  require(count >= 1000, Errc::invalid_argument, "scenario count must be >= 1000");
  require(copula.correlation.rows() == n, Errc::dimension_mismatch,
          "copula dimension != number of fitted assets");
  for (const auto& s : states) {
    require(s.sigma_forecast > 0.0 && std::isfinite(s.mean_forecast), Errc::invalid_seed_state,
            "fitted state carries a non-positive volatility forecast");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(copula.correlation);
  require(llt.info() == Eigen::Success, Errc::non_pd_projection,
          "copula correlation is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  std::vector<double> unit_scale(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double nu = states[static_cast<std::size_t>(j)].params.nu;
    unit_scale[static_cast<std::size_t>(j)] = std::sqrt(nu / (nu - 2.0));
  }

  ScenarioSet out;
  out.window_end = window_end;
  out.seed = seed;
  out.draws.resize(count, n);

  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t s) {
    CounterRng rng(seed, s);
    Eigen::VectorXd g(n);
    for (Eigen::Index j = 0; j < n; ++j) g[j] = rng.next_normal();
    const double w = rng.next_chisq(copula.df) / copula.df;
    const Eigen::VectorXd z = (chol * g) / std::sqrt(w);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& st = states[static_cast<std::size_t>(j)];
      const double u = std::clamp(stats::t_cdf(z[j], copula.df), 1e-10, 1.0 - 1e-10);
      const double t_draw = stats::t_quantile(u, st.params.nu);
      const double eps = t_draw / unit_scale[static_cast<std::size_t>(j)];
      out.draws(static_cast<Eigen::Index>(s), j) = st.mean_forecast + st.sigma_forecast * eps;
    }
  });
  require(out.draws.allFinite(), Errc::invalid_seed_state, "simulation produced non-finite draws");
  return out;
}

}  // namespace pfopt
