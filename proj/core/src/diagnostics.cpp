#include "csamp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <gsl/gsl_cdf.h>
#include <json.hpp>

#include "csamp/errors.hpp"
#include "csamp/rng.hpp"

namespace csamp {

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form; accurate where the alternating series is slow.
    const double t = M_PI * M_PI / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double term = std::exp(-static_cast<double>((2 * j - 1) * (2 * j - 1)) * t);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    sign = -sign;
    if (std::abs(term) < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi2_sf(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return gsl_cdf_chisq_Q(statistic, dof);
}

GofResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                  const std::string& name) {
  if (samples.empty()) throw EmptySampleError("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double di = static_cast<double>(i);
    d_stat = std::max(d_stat, std::max((di + 1.0) / n - f, f - di / n));
  }
  GofResult r;
  r.test_name = name;
  r.statistic = d_stat;
  r.p_value = kolmogorov_sf(std::sqrt(n) * d_stat);
  r.sample_size = static_cast<long long>(samples.size());
  return r;
}

MarginalCatalogue analytic_marginals(const ConvexBody& body) {
  MarginalCatalogue cat;
  const int d = body.dimension();
  if (const auto* ball = dynamic_cast<const Ball*>(&body)) {
    const double R = ball->radius();
    cat.expected_sq_norm = d * R * R / (d + 2.0);
    Marginal1D m;
    m.name = "radial_pit";
    m.statistic = [R, d](const Eigen::VectorXd& x) {
      return std::pow(x.norm() / R, static_cast<double>(d));
    };
    m.cdf = [](double t) { return std::clamp(t, 0.0, 1.0); };
    cat.marginals.push_back(std::move(m));
    return cat;
  }
  if (const auto* box = dynamic_cast<const Box*>(&body)) {
    const Eigen::VectorXd& lo = box->lower();
    const Eigen::VectorXd& hi = box->upper();
    double esq = 0.0;
    for (int i = 0; i < d; ++i) {
      esq += (hi[i] * hi[i] + hi[i] * lo[i] + lo[i] * lo[i]) / 3.0;
      Marginal1D m;
      m.name = "coordinate_" + std::to_string(i);
      m.statistic = [i](const Eigen::VectorXd& x) { return x[i]; };
      m.cdf = [a = lo[i], b = hi[i]](double t) {
        return std::clamp((t - a) / (b - a), 0.0, 1.0);
      };
      cat.marginals.push_back(std::move(m));
    }
    cat.expected_sq_norm = esq;
    return cat;
  }
  throw UnsupportedBodyError("analytic marginals exist for ball and box only");
}

namespace {

struct Grid {
  Eigen::VectorXd lo, hi;
  int cells_per_axis = 0;
  int dim = 0;
  long long total_cells = 0;

  long long cell_of(const Eigen::VectorXd& x) const {
    long long idx = 0;
    for (int i = 0; i < dim; ++i) {
      const double f = (x[i] - lo[i]) / (hi[i] - lo[i]);
      auto c = static_cast<long long>(std::floor(f * cells_per_axis));
      c = std::clamp(c, 0LL, static_cast<long long>(cells_per_axis - 1));
      idx = idx * cells_per_axis + c;
    }
    return idx;
  }

  Eigen::VectorXd center_of(long long idx) const {
    Eigen::VectorXd c(dim);
    for (int i = dim - 1; i >= 0; --i) {
      const long long a = idx % cells_per_axis;
      idx /= cells_per_axis;
      c[i] = lo[i] + (a + 0.5) * (hi[i] - lo[i]) / cells_per_axis;
    }
    return c;
  }
};

Grid make_grid(const ConvexBody& body, int cells_per_axis) {
  if (cells_per_axis < 1) throw InvalidConfigError("cells_per_axis must be >= 1");
  Grid g;
  g.dim = body.dimension();
  g.cells_per_axis = cells_per_axis;
  g.total_cells = 1;
  for (int i = 0; i < g.dim; ++i) g.total_cells *= cells_per_axis;
  if (const auto* box = dynamic_cast<const Box*>(&body)) {
    g.lo = box->lower();
    g.hi = box->upper();
  } else {
    const double R = body.circumradius();
    g.lo = Eigen::VectorXd::Constant(g.dim, -R);
    g.hi = Eigen::VectorXd::Constant(g.dim, R);
  }
  return g;
}

// Cell probabilities under the uniform distribution on the body: exact for
// boxes, Monte Carlo clipped otherwise.
std::vector<double> cell_probabilities(const ConvexBody& body, const Grid& g,
                                       long long mc_points, std::uint64_t mc_seed) {
  std::vector<double> p(g.total_cells, 0.0);
  if (dynamic_cast<const Box*>(&body) != nullptr) {
    const double q = 1.0 / static_cast<double>(g.total_cells);
    std::fill(p.begin(), p.end(), q);
    return p;
  }
  if (g.dim != 2) {
    throw UnsupportedBodyError("grid uniformity needs a box or a 2-D body");
  }
  Rng rng(mc_seed);
  Eigen::VectorXd x(g.dim);
  long long inside = 0;
  for (long long i = 0; i < mc_points; ++i) {
    for (int k = 0; k < g.dim; ++k) x[k] = rng.uniform(g.lo[k], g.hi[k]);
    if (!body.contains(x)) continue;
    ++inside;
    p[g.cell_of(x)] += 1.0;
  }
  if (inside == 0) throw NumericalError("Monte Carlo clipping found no interior points");
  for (auto& v : p) v /= static_cast<double>(inside);
  return p;
}

}  // namespace

GofResult grid_chi2_uniformity(const std::vector<Eigen::VectorXd>& samples,
                               const ConvexBody& body, int cells_per_axis,
                               long long mc_points, std::uint64_t mc_seed) {
  if (samples.empty()) throw EmptySampleError("grid_chi2_uniformity: empty sample");
  const Grid g = make_grid(body, cells_per_axis);
  std::vector<double> p = cell_probabilities(body, g, mc_points, mc_seed);
  std::vector<double> observed(g.total_cells, 0.0);
  for (const auto& x : samples) observed[g.cell_of(x)] += 1.0;

  // Counts landing in zero-volume cells move to the nearest positive cell.
  for (long long i = 0; i < g.total_cells; ++i) {
    if (p[i] > 0.0 || observed[i] == 0.0) continue;
    long long best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd ci = g.center_of(i);
    for (long long j = 0; j < g.total_cells; ++j) {
      if (p[j] <= 0.0) continue;
      const double dist = (g.center_of(j) - ci).norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < 0) throw NumericalError("no positive-volume cell to merge into");
    observed[best] += observed[i];
    observed[i] = 0.0;
  }

  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  long long cells_used = 0;
  for (long long i = 0; i < g.total_cells; ++i) {
    if (p[i] <= 0.0) continue;
    const double expected = n * p[i];
    const double diff = observed[i] - expected;
    stat += diff * diff / expected;
    ++cells_used;
  }
  GofResult r;
  r.test_name = "grid_chi2_uniformity";
  r.statistic = stat;
  r.p_value = chi2_sf(stat, static_cast<double>(cells_used - 1));
  r.sample_size = static_cast<long long>(samples.size());
  return r;
}

GofResult grid_chi2_two_sample(const std::vector<Eigen::VectorXd>& a,
                               const std::vector<Eigen::VectorXd>& b,
                               const ConvexBody& body, int cells_per_axis,
                               const std::string& name) {
  if (a.empty() || b.empty()) throw EmptySampleError("grid_chi2_two_sample: empty sample");
  const Grid g = make_grid(body, cells_per_axis);
  std::vector<double> ca(g.total_cells, 0.0), cb(g.total_cells, 0.0);
  for (const auto& x : a) ca[g.cell_of(x)] += 1.0;
  for (const auto& x : b) cb[g.cell_of(x)] += 1.0;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = std::sqrt(nb / na);
  const double sb = std::sqrt(na / nb);
  double stat = 0.0;
  long long cells_used = 0;
  for (long long i = 0; i < g.total_cells; ++i) {
    const double tot = ca[i] + cb[i];
    if (tot == 0.0) continue;
    const double diff = sa * ca[i] - sb * cb[i];
    stat += diff * diff / tot;
    ++cells_used;
  }
  GofResult r;
  r.test_name = name;
  r.statistic = stat;
  r.p_value = chi2_sf(stat, static_cast<double>(cells_used - 1));
  r.sample_size = static_cast<long long>(a.size() + b.size());
  return r;
}

std::vector<double> divergence_trend(const std::vector<std::vector<Eigen::VectorXd>>& iterates_by_k,
                                     const ConvexBody& body, int cells_per_axis) {
  if (dynamic_cast<const Box*>(&body) == nullptr) {
    throw UnsupportedBodyError("divergence trend needs exact cell volumes (box body)");
  }
  const Grid g = make_grid(body, cells_per_axis);
  const double pi_cell = 1.0 / static_cast<double>(g.total_cells);
  std::vector<double> trend;
  trend.reserve(iterates_by_k.size());
  for (const auto& points : iterates_by_k) {
    if (points.size() < 500) {
      throw InsufficientChainsError("divergence trend needs >= 500 chains per iteration");
    }
    std::vector<double> counts(g.total_cells, 0.0);
    for (const auto& x : points) counts[g.cell_of(x)] += 1.0;
    const double n = static_cast<double>(points.size());
    double est = 0.0;
    for (long long i = 0; i < g.total_cells; ++i) {
      const double diff = counts[i] / n - pi_cell;
      est += diff * diff / pi_cell;
    }
    trend.push_back(est);
  }
  return trend;
}

double projection_rejection_bound(double M) {
  return M * (std::sqrt(2.0 * M_PI * M_E) + 1.0);
}

double separation_rejection_bound(double M, int d) {
  const double dd = static_cast<double>(d);
  return std::sqrt(2.0 * M_PI) * M * std::exp(13.0 / 4.0 + 20.0 / dd) +
         M * std::exp(9.0 / 4.0 + 12.0 / dd);
}

std::vector<BoundAudit> audit_rejection_bounds(const SamplerReport& report,
                                               const SamplerConfig& config, int d) {
  std::vector<BoundAudit> audits;
  if (config.backend == RgoBackend::inandout) return audits;

  BoundAudit a;
  const bool is_projection = config.backend == RgoBackend::projection;
  a.claim = is_projection ? "projection-path mean rejection-loop trials"
                          : "separation-path mean rejection-loop trials";

  const bool m_known = config.warmness.has_value();
  const double eta_star = default_eta(d);
  const bool eta_ok = config.eta <= 0.0 || std::abs(config.eta - eta_star) <= 1e-12 * eta_star;
  if (!m_known || !eta_ok || report.telemetry.empty()) {
    a.skipped = true;
    audits.push_back(std::move(a));
    return audits;
  }

  const double M = *config.warmness;
  a.bound_value =
      is_projection ? projection_rejection_bound(M) : separation_rejection_bound(M, d);
  // Telemetry counts rejections (loop trials minus one); the bound is on
  // the trial count, so compare mean rejections + 1.
  a.observed_value = report.mean_rejections + 1.0;
  a.pass = a.observed_value <= a.bound_value;
  audits.push_back(std::move(a));
  return audits;
}

std::string diagnostics_report_json(const std::vector<GofResult>& tests,
                                    const std::vector<BoundAudit>& audits,
                                    const std::vector<double>& trend) {
  nlohmann::json j;
  j["tests"] = nlohmann::json::array();
  for (const auto& t : tests) {
    j["tests"].push_back({{"test_name", t.test_name},
                          {"statistic", t.statistic},
                          {"p_value", t.p_value},
                          {"sample_size", t.sample_size}});
  }
  j["audits"] = nlohmann::json::array();
  for (const auto& a : audits) {
    j["audits"].push_back({{"claim", a.claim},
                           {"bound_value", a.bound_value},
                           {"observed_value", a.observed_value},
                           {"pass", a.pass},
                           {"skipped", a.skipped}});
  }
  j["trend"] = trend;
  return j.dump(2);
}

}  // namespace csamp
