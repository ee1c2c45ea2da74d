#pragma once

#include <Eigen/Core>
#include <optional>

#include "csamp/bodies.hpp"
#include "csamp/cutting_plane.hpp"
#include "csamp/rng.hpp"

namespace csamp {

/// Result of one restricted-Gaussian-oracle invocation. The sample is in K;
/// rejections counts proposal loop iterations minus one.
struct RgoOutcome {
  Eigen::VectorXd sample;
  long long rejections = 0;
  long long projection_calls = 0;
  long long separation_calls = 0;
  long long membership_calls = 0;
  long long radial_envelope_rejections = 0;
};

/// The four potentials entering the acceptance tests. Theta is extended-real:
/// the quadratic part is stored and x_in_body flags finiteness (infeasible x
/// means Theta = +inf; no floating sentinel is used).
struct PotentialBundle {
  double theta_quadratic = 0.0;  // ||x - y||^2 / (2 eta)
  bool x_in_body = false;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;

  bool theta_finite() const { return x_in_body; }
};

/// Evaluates Theta, P1, P2, P3 at x for the given forward point y,
/// approximate minimizer xhat, and projection proj of y onto the body.
/// Whenever Theta is finite the ordering Theta >= P1 >= P2 >= P3 holds,
/// which makes both acceptance tests well-defined.
PotentialBundle potentials(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& xhat, const Eigen::VectorXd& proj,
                           double eta, bool x_in_body);

inline constexpr long long kDefaultRejectionCap = 1'000'000;

/// Projection-oracle RGO: proposes X ~ N(proj_K(y), eta I) and accepts with
/// probability exp(-<X - proj, proj - y>/eta) 1_K(X). Exactly one projection
/// query per invocation; the accepted sample follows N(y, eta I)|_K.
RgoOutcome rgo_projection(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                          Rng& rng, long long rejection_cap = kDefaultRejectionCap);

/// Stationary point of log p_r for p_r(r) ∝ r^{d-1} exp(-(r-b)^2/(2 eta))
/// with b = sqrt(2 eta / d): r* = (b + sqrt(b^2 + 4 eta (d-1))) / 2.
double radial_mode(int d, double eta);

struct RadialSample {
  double r = 0.0;
  long long envelope_rejections = 0;
};

/// Exact draw from p_r by rejection under the mode-centered Gaussian
/// envelope p_r(r*) exp(-(r - r*)^2/(2 eta)), valid since
/// (log p_r)'' <= -1/eta.
RadialSample sample_radial(int d, double eta, Rng& rng,
                           long long cap = kDefaultRejectionCap);

struct NuProposal {
  Eigen::VectorXd x;
  long long envelope_rejections = 0;
};

/// Draws X = xhat + r theta with r ~ p_r and theta uniform on the sphere;
/// X has density ∝ exp(-(||x-xhat||^2 - 2 sqrt(2 eta/d) ||x-xhat||)/(2 eta)).
NuProposal sample_proposal_nu(const Eigen::VectorXd& xhat, double eta, Rng& rng,
                              long long cap = kDefaultRejectionCap);

/// Separation-oracle RGO: one cutting-plane solve for the (1/d)-solution
/// xhat, then rejection sampling from the nu proposal with acceptance
/// exp(P2(X) - Theta(X)). The accepted sample follows N(y, eta I)|_K.
RgoOutcome rgo_separation(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                          Rng& rng, long long rejection_cap = kDefaultRejectionCap);

struct InAndOutOutcome {
  std::optional<Eigen::VectorXd> sample;  // empty on failure
  long long attempts = 0;
  long long membership_calls = 0;
};

/// Membership-only baseline: draws X ~ N(y, eta I) up to cap times and
/// returns the first X in K; failure is a value, not an error.
InAndOutOutcome rgo_inandout(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                             long long cap, Rng& rng);

}  // namespace csamp
