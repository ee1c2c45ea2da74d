#include "csamp/cutting_plane.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "csamp/errors.hpp"

namespace csamp {

namespace detail {

// In-place central-cut update. Pg is a caller-provided buffer. Returns the
// additive change to log det(P).
double ellipsoid_step_inplace(Eigen::VectorXd& center, Eigen::MatrixXd& P,
                              const Eigen::VectorXd& g, Eigen::VectorXd& Pg) {
  const auto d = static_cast<double>(center.size());
  Pg.noalias() = P * g;
  const double gPg = g.dot(Pg);
  if (!(gPg > 0.0)) {
    throw NumericalError("ellipsoid update: g^T P g <= 0, shape lost positive definiteness");
  }
  if (center.size() == 1) {
    // One-dimensional ellipsoids are intervals; the central cut halves them.
    center[0] -= 0.5 * Pg[0] / std::sqrt(gPg);
    P(0, 0) *= 0.25;
    return std::log(0.25);
  }
  const double inv_d1 = 1.0 / (d + 1.0);
  center.noalias() -= (inv_d1 / std::sqrt(gPg)) * Pg;
  const double scale = d * d / (d * d - 1.0);
  P.noalias() -= (2.0 * inv_d1 / gPg) * (Pg * Pg.transpose());
  P *= scale;
  return d * std::log(scale) + std::log((d - 1.0) / (d + 1.0));
}

}  // namespace detail

EllipsoidState ellipsoid_step(const EllipsoidState& state, const Eigen::VectorXd& cut_normal) {
  if (cut_normal.size() != state.center.size()) {
    throw DimensionMismatchError("cut normal dimension mismatch");
  }
  if (cut_normal.norm() == 0.0) throw InvalidConfigError("cut normal must be nonzero");
  EllipsoidState next{state.center, state.shape};
  Eigen::VectorXd buf(state.center.size());
  detail::ellipsoid_step_inplace(next.center, next.shape, cut_normal, buf);
  return next;
}

CuttingPlaneResult minimize_quadratic(const ConvexBody& body, const Eigen::VectorXd& y,
                                      double eta, double gap_target, bool record_trace) {
  if (eta <= 0.0) throw InvalidConfigError("eta must be positive");
  if (gap_target <= 0.0) throw InvalidConfigError("gap_target must be positive");
  const int d = body.dimension();
  if (y.size() != d) throw DimensionMismatchError("y dimension mismatch");
  const double R = body.circumradius();
  const double inv_two_eta = 1.0 / (2.0 * eta);

  // Initial ellipsoid: ball of radius ||y|| + R around the origin. It
  // contains K and the unconstrained minimizer y.
  const double r0 = y.norm() + R;
  Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d, d) * (r0 * r0);
  double logdet = 2.0 * d * std::log(r0);

  // A-priori objective range over B(0,R) ⊇ K.
  const double obj_range = (y.norm() + R) * (y.norm() + R) * inv_two_eta;
  const double dd = static_cast<double>(d);
  const double cap_log = std::max(0.0, std::log(obj_range * dd / gap_target));
  const long long cap =
      static_cast<long long>(std::ceil(2.0 * dd * (dd + 1.0) * cap_log)) +
      static_cast<long long>(4.0 * dd * (dd + 1.0));

  // Lower bound on min_K f that needs no oracle: distance from y to B(0,R).
  const double dist_lb = [&] {
    const double excess = std::max(0.0, y.norm() - R);
    return excess * excess * inv_two_eta;
  }();

  CuttingPlaneResult result;
  double f_best = std::numeric_limits<double>::infinity();
  double f_lb = dist_lb;
  Eigen::VectorXd x_best(d);
  Eigen::VectorXd g(d), Pg(d);

  for (long long t = 0; t <= cap; ++t) {
    const SeparationAnswer ans = body.separate(center);
    ++result.separation_calls;

    if (ans.in_body) {
      const double fx = (center - y).squaredNorm() * inv_two_eta;
      if (fx < f_best) {
        f_best = fx;
        x_best = center;
      }
      g = (center - y) / eta;  // objective gradient
      const double gn = g.norm();
      if (gn == 0.0) {
        // Center equals y: the unconstrained minimizer is feasible.
        result.xhat = center;
        result.certified_gap = 0.0;
        result.total_iterations = t;
        if (record_trace) result.gap_trace.push_back(0.0);
        return result;
      }
      // Kelley-style bound: min over B(0,R) of the linearization at center.
      f_lb = std::max(f_lb, fx - g.dot(center) - R * gn);
      g /= gn;
    } else {
      g = ans.normal;
    }

    // Volume certificate: once vol(E_t) < lambda^d vol(B(0,1)) every
    // feasible point with gap below lambda * obj_range has survived all
    // cuts, so f_best - min_K f <= lambda * obj_range. Uses vol(K) >=
    // vol(B(0,1)) from condition (A1).
    const double lambda = std::exp(logdet / (2.0 * dd)) * (1.0 + 1e-12);
    const double gap_vol = obj_range * std::min(1.0, lambda);
    const double certified =
        std::max(0.0, std::min(f_best - f_lb, gap_vol));
    if (record_trace) result.gap_trace.push_back(certified);

    if (std::isfinite(f_best) && certified <= gap_target) {
      result.xhat = x_best;
      result.certified_gap = certified;
      result.total_iterations = t;
      return result;
    }

    logdet += detail::ellipsoid_step_inplace(center, P, g, Pg);
    if ((t + 1) % 50 == 0) {
      P = 0.5 * (P + P.transpose()).eval();
    }
  }

  std::ostringstream os;
  os << "cutting-plane budget of " << cap << " iterations exhausted before certifying gap "
     << gap_target;
  throw IterationBudgetExceededError(os.str());
}

}  // namespace csamp
