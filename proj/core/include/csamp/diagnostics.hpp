#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "csamp/bodies.hpp"
#include "csamp/sampler.hpp"

namespace csamp {

struct GofResult {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 1.0;
  long long sample_size = 0;
};

struct BoundAudit {
  std::string claim;
  double bound_value = 0.0;
  double observed_value = 0.0;
  bool pass = false;
  bool skipped = false;
};

/// Survival function of the asymptotic Kolmogorov distribution.
double kolmogorov_sf(double lambda);

/// Upper-tail probability of the chi-square distribution.
double chi2_sf(double statistic, double dof);

/// One-sample Kolmogorov-Smirnov test of the samples against the given CDF.
GofResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                  const std::string& name = "ks");

struct Marginal1D {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> statistic;
  std::function<double(double)> cdf;
};

struct MarginalCatalogue {
  double expected_sq_norm = 0.0;
  std::vector<Marginal1D> marginals;
};

/// Analytic 1-D test statistics for ball and box bodies: the ball's radial
/// probability-integral transform (||X||/R)^d ~ U[0,1] and the box's
/// uniform coordinates, plus the closed-form E||X||^2.
MarginalCatalogue analytic_marginals(const ConvexBody& body);

/// Pearson chi-square of samples against uniformity on the body over a
/// cells_per_axis^d grid. Box cells carry exact probabilities; other bodies
/// get cell volumes clipped by Monte Carlo with mc_points draws. Cells with
/// zero estimated volume but nonzero counts are merged into the nearest
/// positive-volume cell.
GofResult grid_chi2_uniformity(const std::vector<Eigen::VectorXd>& samples,
                               const ConvexBody& body, int cells_per_axis,
                               long long mc_points = 100000,
                               std::uint64_t mc_seed = 20240901);

/// Two-sample chi-square over the same grid; used for cross-backend
/// distributional-equivalence checks.
GofResult grid_chi2_two_sample(const std::vector<Eigen::VectorXd>& a,
                               const std::vector<Eigen::VectorXd>& b,
                               const ConvexBody& body, int cells_per_axis,
                               const std::string& name = "grid_chi2_two_sample");

/// Histogram plug-in chi-square divergence estimates, one per iteration
/// index, from >= 500 independent chains on a box body. Checks trends, not
/// the contraction rate.
std::vector<double> divergence_trend(const std::vector<std::vector<Eigen::VectorXd>>& iterates_by_k,
                                     const ConvexBody& body, int cells_per_axis);

/// Mean rejection-loop trials bound for the projection-path RGO, M-warm
/// start and eta = 1/d^2: M (sqrt(2 pi e) + 1).
double projection_rejection_bound(double M);

/// Same for the separation path:
/// sqrt(2 pi) M exp(13/4 + 20/d) + M exp(9/4 + 12/d).
double separation_rejection_bound(double M, int d);

/// Compares observed mean rejection-loop trials against the applicable
/// bound. Skipped (not failed) when M is unknown or eta != 1/d^2.
std::vector<BoundAudit> audit_rejection_bounds(const SamplerReport& report,
                                               const SamplerConfig& config, int d);

/// {"tests": [...], "audits": [...], "trend": [...]} with stable field names.
std::string diagnostics_report_json(const std::vector<GofResult>& tests,
                                    const std::vector<BoundAudit>& audits,
                                    const std::vector<double>& trend);

}  // namespace csamp
