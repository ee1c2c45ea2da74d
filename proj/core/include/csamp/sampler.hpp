#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csamp/bodies.hpp"
#include "csamp/rgo.hpp"
#include "csamp/rng.hpp"

namespace csamp {

enum class WarmStart { exact_uniform, unit_ball_uniform, fixed_point };
enum class Divergence { renyi, chi2 };
enum class RgoBackend { projection, separation, inandout };
enum class InAndOutPolicy { halt, restart };

struct SamplerConfig {
  double eta = -1.0;           // <= 0 resolves to 1/d^2
  long long iterations = -1;   // < 0 resolves via default_iterations
  WarmStart warm_start = WarmStart::exact_uniform;
  std::optional<double> warmness;  // M when known (exact_uniform gives 1)
  double epsilon = 0.1;
  double renyi_order = 2.0;
  Divergence divergence = Divergence::chi2;
  RgoBackend backend = RgoBackend::projection;
  std::uint64_t seed = 0;
  long long rejection_cap = kDefaultRejectionCap;
  long long inandout_cap = -1;  // < 0 resolves to ceil(d^2 ln d) + 10
  InAndOutPolicy inandout_policy = InAndOutPolicy::halt;
  std::optional<Eigen::VectorXd> warm_point;  // fixed_point start; origin if unset
  double complexity_constant = 1.0;           // c in the iteration formulas
};

struct IterationTelemetry {
  long long rejections = 0;
  long long projection_calls = 0;
  long long separation_calls = 0;
  long long membership_calls = 0;
  long long radial_envelope_rejections = 0;
};

struct ChainState {
  Eigen::VectorXd x;  // current iterate, in K at every iteration boundary
  Eigen::VectorXd y;  // last forward point
  long long iteration = 0;
  Rng rng;
};

struct SamplerReport {
  Eigen::VectorXd initial_point;
  std::vector<Eigen::VectorXd> samples;        // k iterates, x_1 .. x_k
  std::vector<IterationTelemetry> telemetry;   // one entry per iterate
  double mean_rejections = 0.0;
  long long max_rejections = 0;
  long long total_projection_calls = 0;
  long long total_separation_calls = 0;
  long long total_membership_calls = 0;
  double wall_clock_seconds = 0.0;
};

/// Default ASF step size 1/d^2.
double default_eta(int d);

/// Iteration schedule from the warm-start accuracy formulas:
/// Renyi:  ceil(c d^2 C_LSI q ln(2 ln M / epsilon)), needs M > 1;
/// chi^2:  ceil(c d^2 C_PI ln(2 (M^2 + 1) / epsilon)).
/// Clamped below at 1.
long long default_iterations(const GeometrySummary& geometry, const SamplerConfig& config);

/// Resolves defaults (eta, caps) against a body; validates invariants.
SamplerConfig resolve_config(const ConvexBody& body, SamplerConfig config);

/// Draws the warm start x_0 per config.
Eigen::VectorXd draw_warm_start(const ConvexBody& body, const SamplerConfig& config, Rng& rng);

/// One ASF iteration: y = x + sqrt(eta) Z, then x' via the configured RGO
/// backend. Mutates the state; telemetry for the step is appended if given.
void asf_step(ChainState& state, const ConvexBody& body, const SamplerConfig& config,
              IterationTelemetry* telemetry = nullptr);

/// Runs one chain of k ASF iterations; deterministic given (config.seed,
/// chain_index). With k = 0 the report carries only the warm-start point.
SamplerReport run_chain(const ConvexBody& body, const SamplerConfig& config,
                        std::uint64_t chain_index = 0);

/// Ball walk step: uniform proposal in B(x, delta), accepted iff in K.
Eigen::VectorXd ball_walk_step(const ConvexBody& body, const Eigen::VectorXd& x,
                               double delta, Rng& rng);

struct ChordEndpoints {
  double t_minus = 0.0;
  double t_plus = 0.0;
};

/// Endpoints {t : x + t theta in K} found by bisection on the membership
/// oracle (inner brackets, so both endpoints are in K).
ChordEndpoints chord_endpoints(const ConvexBody& body, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& theta,
                               long long* membership_calls = nullptr);

/// Hit-and-run step: uniform point on the chord through x in a uniform
/// random direction.
Eigen::VectorXd hit_and_run_step(const ConvexBody& body, const Eigen::VectorXd& x, Rng& rng,
                                 long long* membership_calls = nullptr);

}  // namespace csamp
