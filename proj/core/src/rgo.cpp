#include "csamp/rgo.hpp"

#include <cmath>
#include <sstream>

#include "csamp/errors.hpp"

namespace csamp {

namespace {

[[noreturn]] void throw_rejection_cap(const char* where, long long cap) {
  std::ostringstream os;
  os << where << ": rejection cap of " << cap
     << " proposals exhausted; this signals misconfiguration, not algorithmic failure";
  throw RejectionBudgetExceededError(os.str());
}

// log of the unnormalized radial density r^{d-1} exp(-(r-b)^2/(2 eta)).
inline double log_radial_density(double r, int d, double b, double eta) {
  return (d - 1) * std::log(r) - (r - b) * (r - b) / (2.0 * eta);
}

}  // namespace

PotentialBundle potentials(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& xhat, const Eigen::VectorXd& proj,
                           double eta, bool x_in_body) {
  const double d = static_cast<double>(x.size());
  const double inv_two_eta = 1.0 / (2.0 * eta);
  const double b = std::sqrt(2.0 * eta / d);

  const double x_proj = (x - proj).norm();
  const double proj_y = (proj - y).norm();
  const double x_xhat = (x - xhat).norm();
  const double xhat_y = (xhat - y).norm();

  PotentialBundle out;
  out.x_in_body = x_in_body;
  out.theta_quadratic = (x - y).squaredNorm() * inv_two_eta;
  out.p1 = (x_proj * x_proj + proj_y * proj_y) * inv_two_eta;
  out.p2 = (x_xhat * x_xhat + xhat_y * xhat_y - 2.0 * b * (x_xhat + xhat_y) -
            12.0 * eta / d) *
           inv_two_eta;
  const double u = x_xhat - b;
  const double v = proj_y - 2.0 * b;
  out.p3 = (u * u + v * v - 32.0 * eta / d) * inv_two_eta;
  return out;
}

RgoOutcome rgo_projection(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                          Rng& rng, long long rejection_cap) {
  if (eta <= 0.0) throw InvalidConfigError("eta must be positive");
  const int d = body.dimension();
  const double sqrt_eta = std::sqrt(eta);

  RgoOutcome out;
  const Eigen::VectorXd proj = body.project(y);
  out.projection_calls = 1;
  const Eigen::VectorXd drift = proj - y;  // exponent direction, fixed per y

  Eigen::VectorXd z(d), x(d);
  for (long long trial = 0; trial < rejection_cap; ++trial) {
    rng.fill_gaussian(z);
    x = proj + sqrt_eta * z;
    const double u = rng.uniform();
    ++out.membership_calls;
    if (!body.contains(x)) {
      ++out.rejections;
      continue;
    }
    // log acceptance ratio -(1/eta) <X - proj, proj - y>, with
    // X - proj = sqrt(eta) z by construction.
    const double log_ratio = -z.dot(drift) / sqrt_eta;
    if (std::log(u) <= log_ratio) {
      out.sample = std::move(x);
      return out;
    }
    ++out.rejections;
  }
  throw_rejection_cap("rgo_projection", rejection_cap);
}

double radial_mode(int d, double eta) {
  if (d < 1 || eta <= 0.0) throw InvalidConfigError("radial_mode needs d >= 1, eta > 0");
  const double b = std::sqrt(2.0 * eta / d);
  return 0.5 * (b + std::sqrt(b * b + 4.0 * eta * (d - 1)));
}

RadialSample sample_radial(int d, double eta, Rng& rng, long long cap) {
  if (d < 1 || eta <= 0.0) throw InvalidConfigError("sample_radial needs d >= 1, eta > 0");
  const double b = std::sqrt(2.0 * eta / d);
  const double rstar = radial_mode(d, eta);
  const double log_peak = log_radial_density(rstar, d, b, eta);
  const double sqrt_eta = std::sqrt(eta);

  RadialSample out;
  for (long long trial = 0; trial < cap; ++trial) {
    const double r = rstar + sqrt_eta * rng.gaussian();
    const double u = rng.uniform();
    if (r > 0.0) {
      const double log_env =
          log_peak - (r - rstar) * (r - rstar) / (2.0 * eta);
      if (std::log(u) <= log_radial_density(r, d, b, eta) - log_env) {
        out.r = r;
        return out;
      }
    }
    ++out.envelope_rejections;
  }
  throw_rejection_cap("sample_radial", cap);
}

NuProposal sample_proposal_nu(const Eigen::VectorXd& xhat, double eta, Rng& rng,
                              long long cap) {
  const int d = static_cast<int>(xhat.size());
  RadialSample rs = sample_radial(d, eta, rng, cap);
  NuProposal out;
  out.envelope_rejections = rs.envelope_rejections;
  out.x = xhat + rs.r * rng.unit_sphere(d);
  return out;
}

RgoOutcome rgo_separation(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                          Rng& rng, long long rejection_cap) {
  if (eta <= 0.0) throw InvalidConfigError("eta must be positive");
  const int d = body.dimension();
  const double dd = static_cast<double>(d);
  const double inv_two_eta = 1.0 / (2.0 * eta);
  const double b = std::sqrt(2.0 * eta / dd);

  // One (1/d)-solution per invocation; reused across the rejection loop.
  CuttingPlaneResult cp = minimize_quadratic(body, y, eta, 1.0 / dd);
  const Eigen::VectorXd xhat = std::move(cp.xhat);

  RgoOutcome out;
  out.separation_calls = cp.separation_calls;

  // x-independent part of P2.
  const double xhat_y = (xhat - y).norm();
  const double p2_const =
      (xhat_y * xhat_y - 2.0 * b * xhat_y - 12.0 * eta / dd) * inv_two_eta;

  for (long long trial = 0; trial < rejection_cap; ++trial) {
    RadialSample rs = sample_radial(d, eta, rng, rejection_cap);
    out.radial_envelope_rejections += rs.envelope_rejections;
    Eigen::VectorXd x = xhat + rs.r * rng.unit_sphere(d);
    const double u = rng.uniform();
    ++out.membership_calls;
    if (!body.contains(x)) {
      ++out.rejections;
      continue;
    }
    const double p2 = (rs.r * rs.r - 2.0 * b * rs.r) * inv_two_eta + p2_const;
    const double theta = (x - y).squaredNorm() * inv_two_eta;
    // Lemma-backed log ratio P2 - Theta <= 0 on K.
    if (std::log(u) <= p2 - theta) {
      out.sample = std::move(x);
      return out;
    }
    ++out.rejections;
  }
  throw_rejection_cap("rgo_separation", rejection_cap);
}

InAndOutOutcome rgo_inandout(const ConvexBody& body, const Eigen::VectorXd& y, double eta,
                             long long cap, Rng& rng) {
  if (eta <= 0.0) throw InvalidConfigError("eta must be positive");
  const int d = body.dimension();
  const double sqrt_eta = std::sqrt(eta);
  InAndOutOutcome out;
  Eigen::VectorXd x(d);
  for (long long attempt = 0; attempt < cap; ++attempt) {
    rng.fill_gaussian(x);
    x = y + sqrt_eta * x;
    ++out.attempts;
    ++out.membership_calls;
    if (body.contains(x)) {
      out.sample = x;
      return out;
    }
  }
  return out;  // failure after cap attempts
}

}  // namespace csamp
