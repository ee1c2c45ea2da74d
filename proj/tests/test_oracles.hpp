#pragma once

// Test-only oracles: quadrature, analytic distribution functions, and
// rejection samplers used to freeze expected values independently of the
// library code under test.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "csamp/bodies.hpp"
#include "csamp/rng.hpp"

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Recursive adaptive Simpson quadrature.
inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb, double whole,
                                    double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, eps, 40);
}

// Tabulated CDF of an unnormalized density on [a, b], with linear
// interpolation between a dense cumulative-trapezoid grid.
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& density, double a, double b,
               int n = 400001)
      : a_(a), b_(b), cum_(n, 0.0) {
    const double h = (b - a) / (n - 1);
    double prev = density(a);
    for (int i = 1; i < n; ++i) {
      const double x = a + h * i;
      const double cur = density(x);
      cum_[i] = cum_[i - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double total = cum_.back();
    if (!(total > 0.0)) throw std::runtime_error("degenerate density");
    for (auto& v : cum_) v /= total;
  }

  double operator()(double x) const {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    const double n = static_cast<double>(cum_.size() - 1);
    const double f = (x - a_) / (b_ - a_) * n;
    const auto i = static_cast<std::size_t>(f);
    const double w = f - static_cast<double>(i);
    return cum_[i] * (1.0 - w) + cum_[i + 1] * w;
  }

 private:
  double a_, b_;
  std::vector<double> cum_;
};

// Uniform sample on an arbitrary body by rejection from its circumball.
inline Eigen::VectorXd uniform_on_body(const csamp::ConvexBody& body, csamp::Rng& rng) {
  for (int i = 0; i < 1000000; ++i) {
    Eigen::VectorXd x = rng.uniform_ball(body.dimension(), body.circumradius());
    if (body.contains(x)) return x;
  }
  throw std::runtime_error("uniform_on_body: rejection sampler stalled");
}

// Mean and standard error of the mean from independent replicate means.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& replicate_means) {
  MeanSe r;
  const double n = static_cast<double>(replicate_means.size());
  for (double v : replicate_means) r.mean += v;
  r.mean /= n;
  double ss = 0.0;
  for (double v : replicate_means) ss += (v - r.mean) * (v - r.mean);
  r.se = std::sqrt(ss / (n - 1.0) / n);
  return r;
}

}  // namespace oracle
