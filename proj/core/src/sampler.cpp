#include "csamp/sampler.hpp"

#include <chrono>
#include <cmath>

#include "csamp/errors.hpp"

namespace csamp {

double default_eta(int d) {
  if (d < 1) throw InvalidConfigError("dimension must be >= 1");
  return 1.0 / (static_cast<double>(d) * d);
}

long long default_iterations(const GeometrySummary& geometry, const SamplerConfig& config) {
  if (config.epsilon <= 0.0) throw InvalidConfigError("epsilon must be positive");
  const double M = config.warmness.value_or(1.0);
  if (M < 1.0) throw InvalidConfigError("warmness M must be >= 1");
  const double d2 = static_cast<double>(geometry.dimension) * geometry.dimension;
  const double c = config.complexity_constant;
  double k = 0.0;
  if (config.divergence == Divergence::renyi) {
    if (config.renyi_order < 1.0) throw InvalidConfigError("Renyi order must be >= 1");
    if (std::log(M) <= 0.0) {
      throw InvalidConfigError(
          "Renyi schedule needs M > 1: ln(2 ln M / epsilon) is undefined at M = 1");
    }
    k = c * d2 * geometry.lsi_heuristic * config.renyi_order *
        std::log(2.0 * std::log(M) / config.epsilon);
  } else {
    k = c * d2 * geometry.pi_heuristic * std::log(2.0 * (M * M + 1.0) / config.epsilon);
  }
  const double kc = std::ceil(k);
  return kc < 1.0 ? 1 : static_cast<long long>(kc);
}

SamplerConfig resolve_config(const ConvexBody& body, SamplerConfig config) {
  const int d = body.dimension();
  if (config.eta <= 0.0) config.eta = default_eta(d);
  if (config.inandout_cap < 0) {
    config.inandout_cap =
        static_cast<long long>(std::ceil(d * d * std::log(static_cast<double>(d)))) + 10;
  }
  if (config.iterations < 0) {
    config.iterations = default_iterations(validate_geometry(body), config);
  }
  if (config.rejection_cap < 1) throw InvalidConfigError("rejection cap must be >= 1");
  if (config.warm_start == WarmStart::exact_uniform &&
      !body.has(Capability::exact_uniform)) {
    throw CapabilityMissingError("exact-uniform warm start needs an exact-uniform body");
  }
  if (config.warm_point && config.warm_point->size() != d) {
    throw DimensionMismatchError("warm point dimension mismatch");
  }
  return config;
}

Eigen::VectorXd draw_warm_start(const ConvexBody& body, const SamplerConfig& config,
                                Rng& rng) {
  switch (config.warm_start) {
    case WarmStart::exact_uniform:
      return body.sample_exact_uniform(rng);
    case WarmStart::unit_ball_uniform:
      // B(0,1) ⊆ K by condition (A1).
      return rng.uniform_ball(body.dimension(), 1.0);
    case WarmStart::fixed_point: {
      Eigen::VectorXd x = config.warm_point.value_or(
          Eigen::VectorXd::Zero(body.dimension()));
      if (!body.contains(x)) throw InvalidConfigError("fixed warm-start point not in body");
      return x;
    }
  }
  throw InvalidConfigError("unknown warm start mode");
}

void asf_step(ChainState& state, const ConvexBody& body, const SamplerConfig& config,
              IterationTelemetry* telemetry) {
  const double sqrt_eta = std::sqrt(config.eta);
  IterationTelemetry t;

  auto backward = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    switch (config.backend) {
      case RgoBackend::projection: {
        RgoOutcome o = rgo_projection(body, y, config.eta, state.rng, config.rejection_cap);
        t.rejections += o.rejections;
        t.projection_calls += o.projection_calls;
        t.membership_calls += o.membership_calls;
        return std::move(o.sample);
      }
      case RgoBackend::separation: {
        RgoOutcome o = rgo_separation(body, y, config.eta, state.rng, config.rejection_cap);
        t.rejections += o.rejections;
        t.separation_calls += o.separation_calls;
        t.membership_calls += o.membership_calls;
        t.radial_envelope_rejections += o.radial_envelope_rejections;
        return std::move(o.sample);
      }
      case RgoBackend::inandout: {
        InAndOutOutcome o =
            rgo_inandout(body, y, config.eta, config.inandout_cap, state.rng);
        t.membership_calls += o.membership_calls;
        t.rejections += o.attempts - (o.sample ? 1 : 0);
        if (!o.sample) throw SamplingFailureError("In-and-Out declared failure");
        return std::move(*o.sample);
      }
    }
    throw InvalidConfigError("unknown RGO backend");
  };

  if (config.backend == RgoBackend::inandout &&
      config.inandout_policy == InAndOutPolicy::restart) {
    // Restart variant: on failure, return to the forward Gaussian step.
    for (;;) {
      state.y = state.x + sqrt_eta * state.rng.gaussian_vector(body.dimension());
      try {
        state.x = backward(state.y);
        break;
      } catch (const SamplingFailureError&) {
        continue;
      }
    }
  } else {
    state.y = state.x + sqrt_eta * state.rng.gaussian_vector(body.dimension());
    state.x = backward(state.y);
  }
  ++state.iteration;
  if (telemetry) *telemetry = t;
}

SamplerReport run_chain(const ConvexBody& body, const SamplerConfig& raw_config,
                        std::uint64_t chain_index) {
  const auto start = std::chrono::steady_clock::now();
  const SamplerConfig config = resolve_config(body, raw_config);

  ChainState state{Eigen::VectorXd(), Eigen::VectorXd(), 0,
                   Rng::for_chain(config.seed, chain_index)};
  state.x = draw_warm_start(body, config, state.rng);

  SamplerReport report;
  report.initial_point = state.x;
  report.samples.reserve(config.iterations);
  report.telemetry.reserve(config.iterations);

  for (long long k = 0; k < config.iterations; ++k) {
    IterationTelemetry t;
    asf_step(state, body, config, &t);
    report.samples.push_back(state.x);
    report.telemetry.push_back(t);
  }

  long long total_rej = 0;
  for (const auto& t : report.telemetry) {
    total_rej += t.rejections;
    report.max_rejections = std::max(report.max_rejections, t.rejections);
    report.total_projection_calls += t.projection_calls;
    report.total_separation_calls += t.separation_calls;
    report.total_membership_calls += t.membership_calls;
  }
  report.mean_rejections = report.telemetry.empty()
                               ? 0.0
                               : static_cast<double>(total_rej) /
                                     static_cast<double>(report.telemetry.size());
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Eigen::VectorXd ball_walk_step(const ConvexBody& body, const Eigen::VectorXd& x,
                               double delta, Rng& rng) {
  if (delta <= 0.0) throw InvalidConfigError("ball walk delta must be positive");
  Eigen::VectorXd y = x + rng.uniform_ball(body.dimension(), delta);
  return body.contains(y) ? y : x;
}

ChordEndpoints chord_endpoints(const ConvexBody& body, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& theta, long long* membership_calls) {
  long long calls = 0;
  auto inside = [&](double t) {
    ++calls;
    return body.contains(x + t * theta);
  };
  if (!inside(0.0)) {
    throw DegenerateChordError("hit-and-run: current point is not in the body");
  }
  const double R = body.circumradius();
  const double tol = 1e-10 * R;
  // K ⊆ B(0,R) and ||x|| <= R bound the chord by |t| <= 2R.
  const double hi0 = 2.0 * R + 1.0;

  auto boundary = [&](double sign) {
    double lo = 0.0, hi = hi0;
    for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (inside(sign * mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;  // inner bracket: x + sign*lo*theta is in K
  };

  ChordEndpoints c;
  c.t_plus = boundary(1.0);
  c.t_minus = -boundary(-1.0);
  if (membership_calls) *membership_calls += calls;
  return c;
}

Eigen::VectorXd hit_and_run_step(const ConvexBody& body, const Eigen::VectorXd& x, Rng& rng,
                                 long long* membership_calls) {
  const Eigen::VectorXd theta = rng.unit_sphere(body.dimension());
  const ChordEndpoints c = chord_endpoints(body, x, theta, membership_calls);
  const double t = rng.uniform(c.t_minus, c.t_plus);
  return x + t * theta;
}

}  // namespace csamp
