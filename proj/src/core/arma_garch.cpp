#include "core/arma_garch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace pfopt {

namespace {

constexpr double kNuLow = 2.1;
constexpr double kNuHigh = 50.0;
constexpr double kMaxPersistence = 0.9995;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates -> valid parameter set. The mean constant is
// scaled by the return stdev so every coordinate moves on a similar scale.
struct Transform {
  double ret_scale = 1.0;
  double ret_var = 1.0;

  AgParams decode(const double* x) const {
    AgParams p;
    p.delta0 = x[0] * ret_scale;
    p.ar1 = 0.999 * std::tanh(x[1]);
    p.ma1 = 0.999 * std::tanh(x[2]);
    p.alpha0 = std::exp(std::clamp(x[3], -40.0, 40.0)) * ret_var;
    const double persistence = kMaxPersistence * sigmoid(x[4]);
    const double ratio = sigmoid(x[5]);
    p.alpha1 = persistence * ratio;
    p.beta1 = persistence * (1.0 - ratio);
    p.nu = kNuLow + (kNuHigh - kNuLow) * sigmoid(x[6]);
    return p;
  }

  std::array<double, 7> encode(const AgParams& p) const {
    const auto atanh_c = [](double v) { return std::atanh(std::clamp(v / 0.999, -0.999999, 0.999999)); };
    std::array<double, 7> x{};
    x[0] = p.delta0 / ret_scale;
    x[1] = atanh_c(p.ar1);
    x[2] = atanh_c(p.ma1);
    x[3] = std::log(std::max(p.alpha0 / ret_var, 1e-30));
    const double persistence =
        std::clamp((p.alpha1 + p.beta1) / kMaxPersistence, 1e-6, 1.0 - 1e-6);
    const double ratio =
        std::clamp(p.alpha1 / std::max(p.alpha1 + p.beta1, 1e-12), 1e-6, 1.0 - 1e-6);
    x[4] = logit(persistence);
    x[5] = logit(ratio);
    x[6] = logit(std::clamp((p.nu - kNuLow) / (kNuHigh - kNuLow), 1e-6, 1.0 - 1e-6));
    return x;
  }
};

struct NmResult {
  std::array<double, 7> x{};
  double f = 0.0;
  bool converged = false;
};

// Nelder-Mead on R^7 with standard coefficients.
NmResult nelder_mead(const std::function<double(const double*)>& f,
                     const std::array<double, 7>& start, double step, int max_evals) {
  constexpr int kDim = 7;
  std::array<std::array<double, 7>, 8> simplex;
  std::array<double, 8> fv;
  int evals = 0;

  simplex[0] = start;
  fv[0] = f(start.data());
  ++evals;
  for (int i = 0; i < kDim; ++i) {
    simplex[static_cast<std::size_t>(i) + 1] = start;
    simplex[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(i)] += step;
    fv[static_cast<std::size_t>(i) + 1] = f(simplex[static_cast<std::size_t>(i) + 1].data());
    ++evals;
  }

  NmResult result;
  std::array<int, 8> order{};
  while (evals < max_evals) {
    for (int i = 0; i < 8; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)]; });
    const int best = order[0], worst = order[7], second_worst = order[6];
    if (std::abs(fv[static_cast<std::size_t>(worst)] - fv[static_cast<std::size_t>(best)]) <=
        1e-10 * (1.0 + std::abs(fv[static_cast<std::size_t>(best)]))) {
      result.converged = true;
      break;
    }

    std::array<double, 7> centroid{};
    for (int i = 0; i < 8; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < kDim; ++d) {
        centroid[static_cast<std::size_t>(d)] +=
            simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] / 7.0;
      }
    }

    const auto blend = [&](double coef) {
      std::array<double, 7> p{};
      for (int d = 0; d < kDim; ++d) {
        p[static_cast<std::size_t>(d)] =
            centroid[static_cast<std::size_t>(d)] +
            coef * (centroid[static_cast<std::size_t>(d)] -
                    simplex[static_cast<std::size_t>(worst)][static_cast<std::size_t>(d)]);
      }
      return p;
    };

    const auto reflected = blend(1.0);
    const double fr = f(reflected.data());
    ++evals;
    if (fr < fv[static_cast<std::size_t>(best)]) {
      const auto expanded = blend(2.0);
      const double fe = f(expanded.data());
      ++evals;
      if (fe < fr) {
        simplex[static_cast<std::size_t>(worst)] = expanded;
        fv[static_cast<std::size_t>(worst)] = fe;
      } else {
        simplex[static_cast<std::size_t>(worst)] = reflected;
        fv[static_cast<std::size_t>(worst)] = fr;
      }
      continue;
    }
    if (fr < fv[static_cast<std::size_t>(second_worst)]) {
      simplex[static_cast<std::size_t>(worst)] = reflected;
      fv[static_cast<std::size_t>(worst)] = fr;
      continue;
    }
    const auto contracted = blend(fr < fv[static_cast<std::size_t>(worst)] ? 0.5 : -0.5);
    const double fc = f(contracted.data());
    ++evals;
    if (fc < std::min(fr, fv[static_cast<std::size_t>(worst)])) {
      simplex[static_cast<std::size_t>(worst)] = contracted;
      fv[static_cast<std::size_t>(worst)] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i < 8; ++i) {
      if (i == best) continue;
      for (int d = 0; d < kDim; ++d) {
        simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
            0.5 * (simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] +
                   simplex[static_cast<std::size_t>(best)][static_cast<std::size_t>(d)]);
      }
      fv[static_cast<std::size_t>(i)] = f(simplex[static_cast<std::size_t>(i)].data());
      ++evals;
    }
  }

  int best = 0;
  for (int i = 1; i < 8; ++i) {
    if (fv[static_cast<std::size_t>(i)] < fv[static_cast<std::size_t>(best)]) best = i;
  }
  result.x = simplex[static_cast<std::size_t>(best)];
  result.f = fv[static_cast<std::size_t>(best)];
  return result;
}

}  // namespace

double ag_loglik(std::span<const double> returns, const AgParams& p) {
  const std::size_t t_len = returns.size();
  require(t_len >= 2, Errc::too_few_observations, "AG likelihood needs >= 2 observations");
  const double var0 = stats::variance(returns);
  const double c2 = p.nu / (p.nu - 2.0);
  const double c = std::sqrt(c2);
  const double log_c = 0.5 * std::log(c2);
  const double density_const = std::lgamma((p.nu + 1.0) / 2.0) - std::lgamma(p.nu / 2.0) -
                               0.5 * std::log(p.nu * M_PI);
  double a_prev = 0.0;
  double sig2_prev = var0;
  double ll = 0.0;
  for (std::size_t t = 1; t < t_len; ++t) {
    double sig2 = p.alpha0 + p.alpha1 * a_prev * a_prev + p.beta1 * sig2_prev;
    sig2 = std::max(sig2, 1e-300);
    const double a = returns[t] - p.delta0 - p.ar1 * returns[t - 1] - p.ma1 * a_prev;
    const double z = a * c / std::sqrt(sig2);
    ll += density_const - (p.nu + 1.0) / 2.0 * std::log1p(z * z / p.nu) + log_c -
          0.5 * std::log(sig2);
    a_prev = a;
    sig2_prev = sig2;
  }
  return ll;
}

void ag_filter(std::span<const double> returns, const AgParams& p, std::vector<double>& a,
               std::vector<double>& sigma2) {
  const std::size_t t_len = returns.size();
  a.assign(t_len, 0.0);
  sigma2.assign(t_len, 0.0);
  sigma2[0] = stats::variance(returns);
  for (std::size_t t = 1; t < t_len; ++t) {
    sigma2[t] = std::max(p.alpha0 + p.alpha1 * a[t - 1] * a[t - 1] + p.beta1 * sigma2[t - 1],
                         1e-300);
    a[t] = returns[t] - p.delta0 - p.ar1 * returns[t - 1] - p.ma1 * a[t - 1];
  }
}

AgFitState fit_ag(std::span<const double> returns, const AgFitOptions& options) {
  require(returns.size() >= 500, Errc::window_too_short,
          "AG fit needs >= 500 observations, have " + std::to_string(returns.size()));
  const double var0 = stats::variance(returns);
  require(var0 > 0.0, Errc::no_convergence, "constant return series: zero variance");

  Transform tf;
  tf.ret_var = var0;
  tf.ret_scale = std::sqrt(var0);

  const auto objective = [&](const double* x) {
    return -ag_loglik(returns, tf.decode(x));
  };

  AgParams base;
  base.delta0 = stats::mean(returns);
  base.ar1 = 0.0;
  base.ma1 = 0.0;
  base.alpha1 = 0.09;
  base.beta1 = 0.81;
  base.alpha0 = var0 * (1.0 - base.alpha1 - base.beta1);
  base.nu = 8.0;

  std::vector<std::array<double, 7>> starts;
  const int n_starts = options.warm ? std::max(2, options.warm_starts) : std::max(1, options.starts);
  CounterRng jitter_rng(options.seed, 0xA6F17ULL);
  if (options.warm) {
    starts.push_back(tf.encode(*options.warm));
    starts.push_back(tf.encode(base));
    while (static_cast<int>(starts.size()) < n_starts) {
      auto x = starts.front();
      for (double& v : x) v += 0.15 * jitter_rng.next_normal();
      starts.push_back(x);
    }
  } else {
    starts.push_back(tf.encode(base));
    // Spread the remaining starts over low/high persistence and tail weight.
    static constexpr double kPersistGrid[] = {0.2, 0.6, 0.9, 0.97};
    static constexpr double kNuGrid[] = {5.0, 12.0, 30.0};
    int gi = 0;
    while (static_cast<int>(starts.size()) < n_starts) {
      AgParams p = base;
      const double persistence = kPersistGrid[gi % 4];
      p.alpha1 = 0.1 * persistence;
      p.beta1 = 0.9 * persistence;
      p.alpha0 = var0 * (1.0 - persistence);
      p.nu = kNuGrid[gi % 3];
      ++gi;
      auto x = tf.encode(p);
      for (double& v : x) v += 0.15 * jitter_rng.next_normal();
      starts.push_back(x);
    }
  }

  NmResult best;
  best.f = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const NmResult r = nelder_mead(objective, s, 0.25, 2500);
    if (r.f < best.f) best = r;
  }
  // Polish from the winning vertex with a tighter simplex.
  const NmResult polished = nelder_mead(objective, best.x, 0.05, 1500);
  if (polished.f < best.f) best = polished;

  AgFitState state;
  state.params = tf.decode(best.x.data());
  state.params.loglik = -best.f;
  state.flags.converged = best.converged;
  state.flags.boundary_persistence = state.params.alpha1 + state.params.beta1 > 0.999;
  state.flags.boundary_nu = state.params.nu > kNuHigh - 2.0;

  std::vector<double> a, sig2;
  ag_filter(returns, state.params, a, sig2);
  state.std_residuals.resize(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) {
    state.std_residuals[t] = a[t] / std::sqrt(sig2[t]);
  }
  const std::size_t last = returns.size() - 1;
  state.mean_forecast =
      state.params.delta0 + state.params.ar1 * returns[last] + state.params.ma1 * a[last];
  state.sigma_forecast = std::sqrt(state.params.alpha0 + state.params.alpha1 * a[last] * a[last] +
                                   state.params.beta1 * sig2[last]);
  return state;
}

std::vector<double> simulate_ag_path(const AgParams& p, int n, CounterRng& rng, int burn_in) {
  require(n > 0, Errc::invalid_argument, "path length must be positive");
  require(p.alpha1 + p.beta1 < 1.0, Errc::invalid_argument, "non-stationary parameters");
  const double c = std::sqrt(p.nu / (p.nu - 2.0));
  const double uncond_var = p.alpha0 / (1.0 - p.alpha1 - p.beta1);
  double sig2 = uncond_var;
  double a_prev = 0.0;
  double r_prev = p.delta0 / (1.0 - p.ar1);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < burn_in + n; ++t) {
    sig2 = p.alpha0 + p.alpha1 * a_prev * a_prev + p.beta1 * sig2;
    const double eps = rng.next_student_t(p.nu) / c;
    const double a = std::sqrt(sig2) * eps;
    const double r = p.delta0 + p.ar1 * r_prev + a + p.ma1 * a_prev;
    if (t >= burn_in) out.push_back(r);
    a_prev = a;
    r_prev = r;
  }
  return out;
}

}  // namespace pfopt
