#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace pfopt::stats {

double mean(std::span<const double> x) {
  require(!x.empty(), Errc::empty_series, "mean of empty series");
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x, int ddof) {
  require(x.size() > static_cast<std::size_t>(ddof), Errc::too_few_observations,
          "variance needs more observations than ddof");
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - ddof);
}

double stdev(std::span<const double> x, int ddof) { return std::sqrt(variance(x, ddof)); }

double excess_kurtosis(std::span<const double> x) {
  const double m = mean(x);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

double quantile_hf7(std::span<const double> x, double p) {
  require(!x.empty(), Errc::empty_series, "quantile of empty series");
  require(p >= 0.0 && p <= 1.0, Errc::invalid_argument, "quantile level outside [0,1]");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= s.size()) return s.back();
  const double frac = h - std::floor(h);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

double mad_scale(std::span<const double> x) {
  const double med = quantile_hf7(x, 0.5);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
  return 1.4826 * quantile_hf7(dev, 0.5);
}

namespace {

// Counts swaps performed by a bottom-up merge sort; equals the number of
// discordant-ish inversions used in Knight's tau algorithm.
std::uint64_t merge_sort_swaps(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += mid - i;
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return swaps;
}

std::uint64_t tie_pairs(const std::vector<double>& sorted) {
  std::uint64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      total += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), Errc::dimension_mismatch, "kendall_tau length mismatch");
  const std::size_t n = x.size();
  require(n >= 2, Errc::too_few_observations, "kendall_tau needs >= 2 observations");

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Pairs tied in x (and jointly tied) counted from the sorted order.
  std::uint64_t n1 = 0, n3 = 0;
  {
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && x[idx[i]] == x[idx[i - 1]];
      const bool same_xy = same_x && y[idx[i]] == y[idx[i - 1]];
      if (same_x) {
        ++run_x;
      } else {
        n1 += static_cast<std::uint64_t>(run_x) * (run_x - 1) / 2;
        run_x = 1;
      }
      if (same_xy) {
        ++run_xy;
      } else {
        n3 += static_cast<std::uint64_t>(run_xy) * (run_xy - 1) / 2;
        run_xy = 1;
      }
    }
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::uint64_t swaps = merge_sort_swaps(ys);
  const std::uint64_t n2 = tie_pairs(ys);  // ys is now sorted

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const double num = static_cast<double>(n0) - static_cast<double>(n1) -
                     static_cast<double>(n2) + static_cast<double>(n3) -
                     2.0 * static_cast<double>(swaps);
  const double den = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
  if (den == 0.0) return 0.0;
  return num / den;
}

// ---- distributions ----

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, then one Halley refinement through the
// exact CDF. Accurate to ~1e-15 over (0,1).
double norm_quantile_acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r, x;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  return x;
}

}  // namespace

double norm_quantile(double p) {
  require(p > 0.0 && p < 1.0, Errc::invalid_argument, "normal quantile level outside (0,1)");
  double x = norm_quantile_acklam(p);
  const double e = norm_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
  require(a > 0 && b > 0, Errc::invalid_argument, "inc_beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double t_logpdf(double x, double nu) {
  require(nu > 0, Errc::invalid_argument, "t density requires nu > 0");
  return std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
         0.5 * std::log(nu * M_PI) - (nu + 1.0) / 2.0 * std::log1p(x * x / nu);
}

double t_pdf(double x, double nu) { return std::exp(t_logpdf(x, nu)); }

double t_cdf(double x, double nu) {
  require(nu > 0, Errc::invalid_argument, "t CDF requires nu > 0");
  if (x == 0.0) return 0.5;
  const double z = nu / (nu + x * x);
  const double p = 0.5 * inc_beta(nu / 2.0, 0.5, z);
  return x > 0 ? 1.0 - p : p;
}

double t_quantile(double p, double nu) {
  require(p > 0.0 && p < 1.0, Errc::invalid_argument, "t quantile level outside (0,1)");
  if (p == 0.5) return 0.0;

  // Initial guess from the normal quantile, then expand a bracket around it.
  double x = norm_quantile(p);
  if (nu < 30.0) x *= std::sqrt(nu / std::max(nu - 2.0, 0.5));
  double lo = x, hi = x;
  double step = std::max(1.0, std::abs(x));
  while (t_cdf(lo, nu) > p) {
    lo -= step;
    step *= 2.0;
  }
  step = std::max(1.0, std::abs(x));
  while (t_cdf(hi, nu) < p) {
    hi += step;
    step *= 2.0;
  }

  x = std::clamp(x, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = t_cdf(x, nu) - p;
    if (std::abs(f) <= 1e-15 * std::max(p, 1.0 - p) || hi - lo <= 1e-14 * std::max(1.0, std::abs(x))) break;
    if (f > 0) {
      hi = x;
    } else {
      lo = x;
    }
    const double dens = t_pdf(x, nu);
    double next = x - f / std::max(dens, 1e-300);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    if (next == x) break;
    x = next;
  }
  return x;
}

double ks_statistic_uniform(std::vector<double> sample) {
  require(!sample.empty(), Errc::empty_series, "KS statistic of empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = sample[i];
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - u));
    d = std::max(d, std::abs(u - static_cast<double>(i) / n));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace pfopt::stats
