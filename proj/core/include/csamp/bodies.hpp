#pragma once

#include <Eigen/Core>
#include <atomic>
#include <memory>
#include <optional>
#include <string>

#include "csamp/rng.hpp"

namespace csamp {

enum class Capability : unsigned {
  membership = 1u << 0,
  projection = 1u << 1,
  separation = 1u << 2,
  exact_uniform = 1u << 3,
};

constexpr unsigned capability_mask(Capability c) { return static_cast<unsigned>(c); }

/// Answer of the separation oracle: either "x is in the body" or a unit
/// normal g with <g, x - y> >= 0 for every y in the body.
struct SeparationAnswer {
  bool in_body = false;
  Eigen::VectorXd normal;  // unit length, meaningful only when !in_body

  static SeparationAnswer inside() { return SeparationAnswer{true, {}}; }
  static SeparationAnswer cut(Eigen::VectorXd g) { return SeparationAnswer{false, std::move(g)}; }
};

struct GeometrySummary {
  int dimension = 0;
  double inradius = 0.0;
  double circumradius = 0.0;
  double diameter = 0.0;       // 2R
  double lsi_heuristic = 0.0;  // (2R)^2
  double pi_heuristic = 0.0;   // (2R)^2 * ln d
  std::optional<double> minwidth;
  std::optional<double> gamma;  // R / minwidth
};

/// A convex body certified to satisfy B(0,1) ⊆ K ⊆ B(0,R), exposed through
/// capability-flagged oracles. Immutable after construction; oracle calls
/// are pure functions of (body, query) and safe to share across threads.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  int dimension() const { return dim_; }
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  std::optional<double> minwidth() const { return minwidth_; }
  bool has(Capability c) const { return (caps_ & capability_mask(c)) != 0; }
  unsigned capabilities() const { return caps_; }
  virtual std::string type_name() const = 0;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  SeparationAnswer separate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd sample_exact_uniform(Rng& rng) const;

 protected:
  ConvexBody(int dim, double inradius, double circumradius, unsigned caps,
             std::optional<double> minwidth);

  virtual bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  virtual SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  virtual Eigen::VectorXd do_exact_uniform(Rng& rng) const;

 private:
  void check_dimension(Eigen::Index n) const;

  int dim_;
  double inradius_;
  double circumradius_;
  unsigned caps_;
  std::optional<double> minwidth_;
};

/// Origin-centered Euclidean ball of radius R.
class Ball final : public ConvexBody {
 public:
  Ball(int dim, double radius);
  double radius() const { return radius_; }
  std::string type_name() const override { return "ball"; }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_exact_uniform(Rng& rng) const override;

 private:
  double radius_;
};

/// Axis-aligned box with per-coordinate bounds [lo_i, hi_i]; the origin must
/// be interior (lo_i < 0 < hi_i) for the inradius certificate.
class Box final : public ConvexBody {
 public:
  Box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  std::string type_name() const override { return "box"; }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_exact_uniform(Rng& rng) const override;

 private:
  Eigen::VectorXd lower_, upper_;
};

/// Halfspace polytope {x : Ax <= b}. Membership and separation only; the
/// inradius certificate min_i b_i / ||a_i|| needs b > 0 (origin interior)
/// and the circumradius is user-supplied.
class Polytope final : public ConvexBody {
 public:
  Polytope(Eigen::MatrixXd A, Eigen::VectorXd b, double circumradius);
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  std::string type_name() const override { return "polytope"; }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd row_norms_;
};

/// Origin-centered axis-aligned ellipsoid {x : sum x_i^2 / s_i^2 <= 1}.
class Ellipsoid final : public ConvexBody {
 public:
  explicit Ellipsoid(Eigen::VectorXd semi_axes);
  const Eigen::VectorXd& semi_axes() const { return semi_axes_; }
  std::string type_name() const override { return "ellipsoid"; }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

 private:
  double level(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Eigen::VectorXd semi_axes_;
  Eigen::VectorXd inv_axes_sq_;
};

/// Forwarding wrapper that counts oracle calls; used by telemetry audits.
class CountingBody final : public ConvexBody {
 public:
  explicit CountingBody(const ConvexBody& inner);

  long long membership_calls() const { return membership_calls_.load(); }
  long long projection_calls() const { return projection_calls_.load(); }
  long long separation_calls() const { return separation_calls_.load(); }
  void reset_counters();
  std::string type_name() const override { return inner_.type_name(); }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_exact_uniform(Rng& rng) const override;

 private:
  const ConvexBody& inner_;
  mutable std::atomic<long long> membership_calls_{0};
  mutable std::atomic<long long> projection_calls_{0};
  mutable std::atomic<long long> separation_calls_{0};
};

/// Restricts the advertised capabilities of a body (e.g. separation-only
/// views of a ball for exercising the cutting-plane path).
class RestrictedBody final : public ConvexBody {
 public:
  RestrictedBody(const ConvexBody& inner, unsigned caps);
  std::string type_name() const override { return inner_.type_name(); }

 protected:
  bool do_contains(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_project(const Eigen::Ref<const Eigen::VectorXd>& y) const override;
  SeparationAnswer do_separate(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd do_exact_uniform(Rng& rng) const override;

 private:
  const ConvexBody& inner_;
};

/// Summarizes certified geometry and the LSI/PI heuristics; throws
/// A1ViolationError when the certified inradius is below 1.
GeometrySummary validate_geometry(const ConvexBody& body);

/// Body file format: {"type": "ball"|"box"|"polytope"|"ellipsoid", "d": int,
/// "radius": number, "bounds": [[lo,hi],...], "A": [[...]], "b": [...],
/// "circumradius": number, "semi_axes": [...]}.
std::unique_ptr<ConvexBody> load_body_json(const std::string& json_text);
std::unique_ptr<ConvexBody> load_body_file(const std::string& path);

}  // namespace csamp
