#include "csamp/bodies.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "csamp/errors.hpp"

namespace csamp {

namespace {

constexpr unsigned kMembership = capability_mask(Capability::membership);
constexpr unsigned kProjection = capability_mask(Capability::projection);
constexpr unsigned kSeparation = capability_mask(Capability::separation);
constexpr unsigned kExactUniform = capability_mask(Capability::exact_uniform);

}  // namespace

ConvexBody::ConvexBody(int dim, double inradius, double circumradius, unsigned caps,
                       std::optional<double> minwidth)
    : dim_(dim),
      inradius_(inradius),
      circumradius_(circumradius),
      caps_(caps),
      minwidth_(minwidth) {
  if (dim_ < 1) throw InvalidConfigError("body dimension must be >= 1");
  if (inradius_ < 1.0) {
    std::ostringstream os;
    os << "condition (A1) violated: certified inradius " << inradius_
       << " < 1; the body must contain the unit ball B(0,1)";
    throw A1ViolationError(os.str());
  }
  if (circumradius_ < inradius_) {
    throw InvalidConfigError("circumradius must be >= inradius");
  }
}

void ConvexBody::check_dimension(Eigen::Index n) const {
  if (n != dim_) {
    std::ostringstream os;
    os << "query has dimension " << n << ", body has dimension " << dim_;
    throw DimensionMismatchError(os.str());
  }
}

bool ConvexBody::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dimension(x.size());
  return do_contains(x);
}

Eigen::VectorXd ConvexBody::project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  check_dimension(y.size());
  if (!has(Capability::projection)) {
    throw CapabilityMissingError(type_name() + " body has no projection oracle");
  }
  return do_project(y);
}

SeparationAnswer ConvexBody::separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dimension(x.size());
  if (!has(Capability::separation)) {
    throw CapabilityMissingError(type_name() + " body has no separation oracle");
  }
  return do_separate(x);
}

Eigen::VectorXd ConvexBody::sample_exact_uniform(Rng& rng) const {
  if (!has(Capability::exact_uniform)) {
    throw CapabilityMissingError(type_name() + " body has no exact uniform sampler");
  }
  return do_exact_uniform(rng);
}

Eigen::VectorXd ConvexBody::do_project(const Eigen::Ref<const Eigen::VectorXd>&) const {
  throw CapabilityMissingError("projection not implemented");
}

SeparationAnswer ConvexBody::do_separate(const Eigen::Ref<const Eigen::VectorXd>&) const {
  throw CapabilityMissingError("separation not implemented");
}

Eigen::VectorXd ConvexBody::do_exact_uniform(Rng&) const {
  throw CapabilityMissingError("exact uniform sampling not implemented");
}

// ---------------------------------------------------------------------------
// Ball
// ---------------------------------------------------------------------------

Ball::Ball(int dim, double radius)
    : ConvexBody(dim, radius, radius,
                 kMembership | kProjection | kSeparation | kExactUniform,
                 2.0 * radius),
      radius_(radius) {}

bool Ball::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x.squaredNorm() <= radius_ * radius_;
}

Eigen::VectorXd Ball::do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const double n = y.norm();
  if (n <= radius_) return y;
  return y * (radius_ / n);
}

SeparationAnswer Ball::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double n = x.norm();
  if (n <= radius_) return SeparationAnswer::inside();
  return SeparationAnswer::cut(x / n);
}

Eigen::VectorXd Ball::do_exact_uniform(Rng& rng) const {
  return rng.uniform_ball(dimension(), radius_);
}

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

namespace {

void check_box_bounds(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    throw InvalidConfigError("box bounds size mismatch");
  }
}

double box_inradius(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  check_box_bounds(lo, hi);
  double r = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    r = std::min(r, std::min(hi[i], -lo[i]));
  }
  return r;  // negative when the origin is not interior; A1 check rejects it
}

double box_circumradius(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  check_box_bounds(lo, hi);
  double s = 0.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    const double m = std::max(std::abs(lo[i]), std::abs(hi[i]));
    s += m * m;
  }
  return std::sqrt(s);
}

double box_minwidth(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  check_box_bounds(lo, hi);
  return (hi - lo).minCoeff();
}

}  // namespace

Box::Box(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : ConvexBody(static_cast<int>(lower.size()), box_inradius(lower, upper),
                 box_circumradius(lower, upper),
                 kMembership | kProjection | kSeparation | kExactUniform,
                 box_minwidth(lower, upper)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {}

bool Box::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

Eigen::VectorXd Box::do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return y.cwiseMax(lower_).cwiseMin(upper_);
}

SeparationAnswer Box::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  // Most-violated facet, ties broken by lowest coordinate index.
  double worst = 0.0;
  Eigen::Index worst_i = -1;
  double worst_sign = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double over = x[i] - upper_[i];
    const double under = lower_[i] - x[i];
    if (over > worst) {
      worst = over;
      worst_i = i;
      worst_sign = 1.0;
    }
    if (under > worst) {
      worst = under;
      worst_i = i;
      worst_sign = -1.0;
    }
  }
  if (worst_i < 0) return SeparationAnswer::inside();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  g[worst_i] = worst_sign;
  return SeparationAnswer::cut(std::move(g));
}

Eigen::VectorXd Box::do_exact_uniform(Rng& rng) const {
  Eigen::VectorXd x(dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(lower_[i], upper_[i]);
  return x;
}

// ---------------------------------------------------------------------------
// Polytope
// ---------------------------------------------------------------------------

namespace {

double polytope_inradius(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size() || A.rows() == 0) {
    throw InvalidConfigError("polytope A/b size mismatch");
  }
  double r = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double an = A.row(i).norm();
    if (an == 0.0) throw InvalidConfigError("polytope has a zero row");
    if (b[i] <= 0.0) {
      throw A1ViolationError(
          "polytope inradius certificate requires b > 0 (origin interior)");
    }
    r = std::min(r, b[i] / an);
  }
  return r;
}

}  // namespace

Polytope::Polytope(Eigen::MatrixXd A, Eigen::VectorXd b, double circumradius)
    : ConvexBody(static_cast<int>(A.cols()), polytope_inradius(A, b), circumradius,
                 kMembership | kSeparation, std::nullopt),
      A_(std::move(A)),
      b_(std::move(b)) {
  row_norms_ = A_.rowwise().norm();
}

bool Polytope::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return ((A_ * x - b_).array() <= 0.0).all();
}

SeparationAnswer Polytope::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd slack = A_ * x - b_;
  double worst = 0.0;
  Eigen::Index worst_i = -1;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (slack[i] > worst) {
      worst = slack[i];
      worst_i = i;
    }
  }
  if (worst_i < 0) return SeparationAnswer::inside();
  return SeparationAnswer::cut(A_.row(worst_i).transpose() / row_norms_[worst_i]);
}

// ---------------------------------------------------------------------------
// Ellipsoid
// ---------------------------------------------------------------------------

Ellipsoid::Ellipsoid(Eigen::VectorXd semi_axes)
    : ConvexBody(static_cast<int>(semi_axes.size()), semi_axes.minCoeff(),
                 semi_axes.maxCoeff(), kMembership | kProjection | kSeparation,
                 2.0 * semi_axes.minCoeff()),
      semi_axes_(std::move(semi_axes)) {
  inv_axes_sq_ = semi_axes_.array().square().inverse();
}

double Ellipsoid::level(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return (x.array().square() * inv_axes_sq_.array()).sum();
}

bool Ellipsoid::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return level(x) <= 1.0;
}

Eigen::VectorXd Ellipsoid::do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (level(y) <= 1.0) return y;
  // Solve phi(t) = sum s_i^2 y_i^2 / (s_i^2 + t)^2 - 1 = 0 for the KKT
  // multiplier t > 0; phi is strictly decreasing with phi(0) > 0.
  const Eigen::ArrayXd s2 = semi_axes_.array().square();
  const Eigen::ArrayXd y2 = y.array().square();
  double lo = 0.0;
  double hi = semi_axes_.maxCoeff() * y.norm() + 1.0;
  auto phi = [&](double t) { return (s2 * y2 / (s2 + t).square()).sum() - 1.0; };
  while (phi(hi) > 0.0) hi *= 2.0;
  double t = 0.5 * hi;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::ArrayXd denom = s2 + t;
    const double f = (s2 * y2 / denom.square()).sum() - 1.0;
    const double df = -2.0 * (s2 * y2 / denom.cube()).sum();
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    double tn = t - f / df;  // Newton, bisection fallback
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::abs(tn - t) <= 1e-16 * (1.0 + t)) {
      t = tn;
      break;
    }
    t = tn;
  }
  return (s2 * y.array() / (s2 + t)).matrix();
}

SeparationAnswer Ellipsoid::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (level(x) <= 1.0) return SeparationAnswer::inside();
  Eigen::VectorXd g = (x.array() * inv_axes_sq_.array()).matrix();
  return SeparationAnswer::cut(g / g.norm());
}

// ---------------------------------------------------------------------------
// CountingBody / RestrictedBody
// ---------------------------------------------------------------------------

CountingBody::CountingBody(const ConvexBody& inner)
    : ConvexBody(inner.dimension(), inner.inradius(), inner.circumradius(),
                 inner.capabilities(), inner.minwidth()),
      inner_(inner) {}

void CountingBody::reset_counters() {
  membership_calls_ = 0;
  projection_calls_ = 0;
  separation_calls_ = 0;
}

bool CountingBody::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  membership_calls_.fetch_add(1, std::memory_order_relaxed);
  return inner_.contains(x);
}

Eigen::VectorXd CountingBody::do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  projection_calls_.fetch_add(1, std::memory_order_relaxed);
  return inner_.project(y);
}

SeparationAnswer CountingBody::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  separation_calls_.fetch_add(1, std::memory_order_relaxed);
  return inner_.separate(x);
}

Eigen::VectorXd CountingBody::do_exact_uniform(Rng& rng) const {
  return inner_.sample_exact_uniform(rng);
}

RestrictedBody::RestrictedBody(const ConvexBody& inner, unsigned caps)
    : ConvexBody(inner.dimension(), inner.inradius(), inner.circumradius(),
                 caps & inner.capabilities(), inner.minwidth()),
      inner_(inner) {}

bool RestrictedBody::do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return inner_.contains(x);
}

Eigen::VectorXd RestrictedBody::do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return inner_.project(y);
}

SeparationAnswer RestrictedBody::do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return inner_.separate(x);
}

Eigen::VectorXd RestrictedBody::do_exact_uniform(Rng& rng) const {
  return inner_.sample_exact_uniform(rng);
}

// ---------------------------------------------------------------------------
// Geometry summary and JSON loading
// ---------------------------------------------------------------------------

GeometrySummary validate_geometry(const ConvexBody& body) {
  if (body.inradius() < 1.0) {
    throw A1ViolationError("certified inradius below 1");
  }
  GeometrySummary g;
  g.dimension = body.dimension();
  g.inradius = body.inradius();
  g.circumradius = body.circumradius();
  g.diameter = 2.0 * body.circumradius();
  g.lsi_heuristic = g.diameter * g.diameter;
  g.pi_heuristic = g.diameter * g.diameter * std::log(static_cast<double>(g.dimension));
  g.minwidth = body.minwidth();
  if (g.minwidth) g.gamma = body.circumradius() / *g.minwidth;
  return g;
}

std::unique_ptr<ConvexBody> load_body_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  const std::string type = j.at("type").get<std::string>();
  const int d = j.at("d").get<int>();
  if (type == "ball") {
    return std::make_unique<Ball>(d, j.at("radius").get<double>());
  }
  if (type == "box") {
    const auto& bounds = j.at("bounds");
    if (static_cast<int>(bounds.size()) != d) {
      throw InvalidConfigError("box bounds do not match dimension");
    }
    Eigen::VectorXd lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = bounds[i][0].get<double>();
      hi[i] = bounds[i][1].get<double>();
      if (lo[i] >= hi[i]) throw InvalidConfigError("box bound with lo >= hi");
    }
    return std::make_unique<Box>(std::move(lo), std::move(hi));
  }
  if (type == "polytope") {
    const auto& ja = j.at("A");
    const int m = static_cast<int>(ja.size());
    Eigen::MatrixXd A(m, d);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(ja[i].size()) != d) {
        throw InvalidConfigError("polytope row does not match dimension");
      }
      for (int k = 0; k < d; ++k) A(i, k) = ja[i][k].get<double>();
    }
    const auto& jb = j.at("b");
    if (static_cast<int>(jb.size()) != m) throw InvalidConfigError("polytope A/b mismatch");
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b[i] = jb[i].get<double>();
    return std::make_unique<Polytope>(std::move(A), std::move(b),
                                      j.at("circumradius").get<double>());
  }
  if (type == "ellipsoid") {
    const auto& js = j.at("semi_axes");
    if (static_cast<int>(js.size()) != d) {
      throw InvalidConfigError("ellipsoid semi_axes do not match dimension");
    }
    Eigen::VectorXd s(d);
    for (int i = 0; i < d; ++i) s[i] = js[i].get<double>();
    return std::make_unique<Ellipsoid>(std::move(s));
  }
  throw InvalidConfigError("unknown body type: " + type);
}

std::unique_ptr<ConvexBody> load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open body file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_body_json(ss.str());
}

}  // namespace csamp
