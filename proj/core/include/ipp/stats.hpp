#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ipp {

struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;  // normal-approximation half width, 1.96 s / sqrt(n)
  std::size_t n = 0;
};

inline MeanCi mean_ci95(const std::vector<double>& xs) {
  MeanCi out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

namespace detail {

// Regularized incomplete beta via Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
  const int max_iter = 300;
  const double eps = 3e-14, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

inline double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

/// P(T > t) for Student's t with df degrees of freedom.
inline double student_t_sf(double t, double df) {
  if (df <= 0.0) throw std::invalid_argument("student_t_sf: df must be > 0");
  const double x = df / (df + t * t);
  const double p = 0.5 * detail::ibeta(df / 2.0, 0.5, x);
  return t >= 0.0 ? p : 1.0 - p;
}

struct PairedTResult {
  double t = 0.0;
  double p_one_sided = 1.0;  // H1: mean(a) > mean(b)
  std::size_t n = 0;
};

inline PairedTResult paired_t_greater(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("paired_t_greater: need matched samples, n >= 2");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const MeanCi m = mean_ci95(d);
  double ss = 0.0;
  for (double x : d) ss += (x - m.mean) * (x - m.mean);
  const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
  PairedTResult out;
  out.n = d.size();
  if (sd == 0.0) {
    out.t = m.mean > 0.0 ? 1e9 : 0.0;
    out.p_one_sided = m.mean > 0.0 ? 0.0 : 1.0;
    return out;
  }
  out.t = m.mean / (sd / std::sqrt(static_cast<double>(d.size())));
  out.p_one_sided = student_t_sf(out.t, static_cast<double>(d.size() - 1));
  return out;
}

}  // namespace ipp
