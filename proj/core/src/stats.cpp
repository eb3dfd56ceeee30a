#include "sibm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sibm::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, then one Halley step against erfc.
double inverse_normal_raw(double p) {
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
  const double p_low = 0.02425;
  if (p < p_low) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p <= 1 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  double q = std::sqrt(-2 * std::log(1 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("inverse_normal_cdf: p must lie in (0,1)");
  }
  double x = inverse_normal_raw(p);
  // Halley refinement brings the seed approximation to full precision.
  for (int i = 0; i < 2; ++i) {
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
  }
  return x;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0 || x < 0) throw std::domain_error("gamma_p: need a > 0, x >= 0");
  if (x == 0) return 0;
  if (x < a + 1) return gamma_p_series(a, x);
  return 1 - gamma_q_contfrac(a, x);
}

double chi_square_quantile(double p, double df) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("chi_square_quantile: p must lie in (0,1)");
  }
  if (df <= 0) throw std::domain_error("chi_square_quantile: df must be positive");
  // Wilson-Hilferty start, then safeguarded Newton on P(df/2, x/2).
  double z = inverse_normal_cdf(p);
  double t = 1 - 2.0 / (9 * df) + z * std::sqrt(2.0 / (9 * df));
  double x = df * t * t * t;
  if (!(x > 0)) x = df * 1e-8;
  double lo = 0, hi = std::numeric_limits<double>::infinity();
  const double a = df / 2;
  for (int i = 0; i < 200; ++i) {
    double f = gamma_p(a, x / 2) - p;
    if (f > 0) {
      hi = x;
    } else {
      lo = x;
    }
    double pdf = 0.5 * std::exp(-x / 2 + (a - 1) * std::log(x / 2) - std::lgamma(a));
    double step = (pdf > 0) ? f / pdf : 0;
    double next = x - step;
    if (!(next > lo) || !(next < hi)) {
      next = std::isinf(hi) ? x * 2 : (lo + hi) / 2;
    }
    if (std::fabs(next - x) <= 1e-14 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double kolmogorov_cdf(double x) {
  if (x <= 0) return 0;
  if (x < 1.18) {
    // Theta-function form, rapid convergence for small x.
    double v = M_PI * M_PI / (8 * x * x);
    double sum = 0;
    for (int k = 1; k <= 21; k += 2) {
      sum += std::exp(-v * k * k);
    }
    return std::sqrt(2 * M_PI) / x * sum;
  }
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return 1 - 2 * sum;
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("kolmogorov_quantile: p must lie in (0,1)");
  }
  double lo = 1e-3, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    if (kolmogorov_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

double ks_distance_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks_distance_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = normal_cdf(sample[i]);
    double hi = (static_cast<double>(i) + 1) / n - f;
    double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_distance_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.n = values.size();
  s.min = values.front();
  s.max = values.back();
  auto quantile = [&](double q) {
    double pos = q * (static_cast<double>(values.size()) - 1);
    std::size_t k = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(k);
    if (k + 1 >= values.size()) return values.back();
    return values[k] * (1 - frac) + values[k + 1] * frac;
  };
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  double m = 0;
  for (double v : values) m += v;
  m /= static_cast<double>(values.size());
  s.mean = m;
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  s.sd = values.size() > 1 ? std::sqrt(ss / (static_cast<double>(values.size()) - 1)) : 0;
  return s;
}

double mean(std::span<const double> values) {
  double m = 0;
  for (double v : values) m += v;
  return values.empty() ? 0 : m / static_cast<double>(values.size());
}

double stderr_of_mean(std::span<const double> values) {
  if (values.size() < 2) return 0;
  double m = mean(values);
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  double var = ss / (static_cast<double>(values.size()) - 1);
  return std::sqrt(var / static_cast<double>(values.size()));
}

}  // namespace sibm::stats
