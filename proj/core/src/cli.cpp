#include "csamp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "csamp/diagnostics.hpp"
#include "csamp/errors.hpp"
#include "csamp/log.hpp"

namespace csamp {

namespace {

RgoBackend parse_backend(const std::string& s) {
  if (s == "projection") return RgoBackend::projection;
  if (s == "separation") return RgoBackend::separation;
  if (s == "inandout") return RgoBackend::inandout;
  throw UsageError("unknown --rgo backend: " + s);
}

WarmStart parse_warm(const std::string& s) {
  if (s == "exact") return WarmStart::exact_uniform;
  if (s == "unitball") return WarmStart::unit_ball_uniform;
  if (s == "point") return WarmStart::fixed_point;
  throw UsageError("unknown --warm mode: " + s);
}

RunMode parse_mode(const std::string& s) {
  if (s == "sample") return RunMode::sample;
  if (s == "diagnose") return RunMode::diagnose;
  if (s == "audit") return RunMode::audit;
  if (s == "baseline-compare") return RunMode::baseline_compare;
  throw UsageError("unknown --mode: " + s);
}

struct MultiChainRun {
  SamplerConfig resolved;
  std::vector<SamplerReport> reports;  // one per chain, in chain order
};

MultiChainRun run_chains(const ConvexBody& body, const SamplerConfig& config, int chains) {
  MultiChainRun out;
  out.resolved = resolve_config(body, config);
  out.reports.resize(chains);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(chains)));
  if (workers <= 1) {
    for (int c = 0; c < chains; ++c) {
      out.reports[c] = run_chain(body, out.resolved, static_cast<std::uint64_t>(c));
    }
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int c = next.fetch_add(1); c < chains; c = next.fetch_add(1)) {
          out.reports[c] = run_chain(body, out.resolved, static_cast<std::uint64_t>(c));
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_samples_jsonl(std::ostream& os, const MultiChainRun& run) {
  for (std::size_t chain = 0; chain < run.reports.size(); ++chain) {
    const SamplerReport& r = run.reports[chain];
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      nlohmann::json rec;
      rec["chain"] = static_cast<long long>(chain);
      rec["iter"] = static_cast<long long>(k + 1);
      rec["x"] = std::vector<double>(r.samples[k].data(),
                                     r.samples[k].data() + r.samples[k].size());
      rec["rejections"] = r.telemetry[k].rejections;
      rec["proj_calls"] = r.telemetry[k].projection_calls;
      rec["sep_calls"] = r.telemetry[k].separation_calls;
      rec["mem_calls"] = r.telemetry[k].membership_calls;
      os << rec.dump() << "\n";
    }
  }
}

nlohmann::json summary_json(const RunManifest& m, const MultiChainRun& run) {
  long long total_rej = 0, total_iters = 0, proj = 0, sep = 0, mem = 0;
  long long max_rej = 0;
  double wall = 0.0;
  for (const auto& r : run.reports) {
    total_iters += static_cast<long long>(r.telemetry.size());
    for (const auto& t : r.telemetry) total_rej += t.rejections;
    max_rej = std::max(max_rej, r.max_rejections);
    proj += r.total_projection_calls;
    sep += r.total_separation_calls;
    mem += r.total_membership_calls;
    wall += r.wall_clock_seconds;
  }
  nlohmann::json s;
  s["body"] = m.body_path;
  s["chains"] = static_cast<long long>(run.reports.size());
  s["iterations"] = run.resolved.iterations;
  s["eta"] = run.resolved.eta;
  s["seed"] = run.resolved.seed;
  s["mean_rejections"] =
      total_iters == 0 ? 0.0 : static_cast<double>(total_rej) / static_cast<double>(total_iters);
  s["max_rejections"] = max_rej;
  s["total_projection_calls"] = proj;
  s["total_separation_calls"] = sep;
  s["total_membership_calls"] = mem;
  s["wall_clock_seconds"] = wall;
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

int run_sample(const RunManifest& m, const ConvexBody& body) {
  MultiChainRun run = run_chains(body, m.config, m.chains);
  if (m.out_path.empty()) {
    write_samples_jsonl(std::cout, run);
    log_info("telemetry summary: " + summary_json(m, run).dump());
  } else {
    auto f = open_out(m.out_path);
    write_samples_jsonl(f, run);
    auto fs = open_out(m.out_path + ".summary.json");
    fs << summary_json(m, run).dump(2) << "\n";
  }
  return 0;
}

int run_diagnose(const RunManifest& m, const ConvexBody& body) {
  if (m.out_path.empty()) throw UsageError("--mode diagnose requires --out for the samples");
  MultiChainRun run = run_chains(body, m.config, m.chains);
  auto f = open_out(m.out_path);
  write_samples_jsonl(f, run);

  // Pooled second halves of each chain.
  std::vector<Eigen::VectorXd> pool;
  for (const auto& r : run.reports) {
    for (std::size_t k = r.samples.size() / 2; k < r.samples.size(); ++k) {
      pool.push_back(r.samples[k]);
    }
  }

  std::vector<GofResult> tests;
  try {
    const MarginalCatalogue cat = analytic_marginals(body);
    for (const auto& marg : cat.marginals) {
      std::vector<double> vals;
      vals.reserve(pool.size());
      for (const auto& x : pool) vals.push_back(marg.statistic(x));
      tests.push_back(ks_test(std::move(vals), marg.cdf, "ks_" + marg.name));
    }
  } catch (const UnsupportedBodyError&) {
    log_info("no analytic marginals for this body; skipping KS tests");
  }
  if (body.dimension() <= 3 && !pool.empty()) {
    try {
      const int cells = body.dimension() <= 2 ? 10 : 4;
      tests.push_back(grid_chi2_uniformity(pool, body, cells));
    } catch (const UnsupportedBodyError&) {
    }
  }

  std::vector<BoundAudit> audits;
  long long iters = 0;
  SamplerReport merged;  // aggregate view for the audit
  for (const auto& r : run.reports) {
    for (const auto& t : r.telemetry) {
      merged.telemetry.push_back(t);
      merged.mean_rejections += static_cast<double>(t.rejections);
      ++iters;
    }
  }
  if (iters > 0) merged.mean_rejections /= static_cast<double>(iters);
  audits = audit_rejection_bounds(merged, run.resolved, body.dimension());

  std::vector<double> trend;
  if (run.reports.size() >= 500 && dynamic_cast<const Box*>(&body) != nullptr &&
      body.dimension() <= 2) {
    const std::size_t k_max = std::min<std::size_t>(run.resolved.iterations, 500);
    std::vector<std::vector<Eigen::VectorXd>> by_k(k_max + 1);
    for (const auto& r : run.reports) {
      by_k[0].push_back(r.initial_point);
      for (std::size_t k = 0; k < k_max && k < r.samples.size(); ++k) {
        by_k[k + 1].push_back(r.samples[k]);
      }
    }
    trend = divergence_trend(by_k, body, 10);
  }

  std::cout << diagnostics_report_json(tests, audits, trend) << "\n";
  return 0;
}

int run_audit(const RunManifest& m, const ConvexBody& body) {
  MultiChainRun run = run_chains(body, m.config, m.chains);
  SamplerReport merged;
  long long total = 0, count = 0;
  for (const auto& r : run.reports) {
    for (const auto& t : r.telemetry) {
      merged.telemetry.push_back(t);
      total += t.rejections;
      ++count;
    }
  }
  merged.mean_rejections = count == 0 ? 0.0 : static_cast<double>(total) / count;
  const auto audits = audit_rejection_bounds(merged, run.resolved, body.dimension());
  const std::string report = diagnostics_report_json({}, audits, {});
  if (m.out_path.empty()) {
    std::cout << report << "\n";
  } else {
    open_out(m.out_path) << report << "\n";
  }
  for (const auto& a : audits) {
    if (!a.skipped && !a.pass) return 1;
  }
  return 0;
}

int run_baseline_compare(const RunManifest& m, const ConvexBody& body) {
  const MarginalCatalogue cat = analytic_marginals(body);  // ball/box only
  const SamplerConfig config = resolve_config(body, m.config);
  const long long steps = config.iterations;

  std::ostringstream csv;
  csv << "walk,steps,oracle_calls,moment_error\n";

  auto moment_error = [&](const std::vector<Eigen::VectorXd>& xs) {
    double s = 0.0;
    for (const auto& x : xs) s += x.squaredNorm();
    return std::abs(s / static_cast<double>(xs.size()) - cat.expected_sq_norm);
  };

  {
    MultiChainRun run = run_chains(body, config, m.chains);
    std::vector<Eigen::VectorXd> xs;
    long long calls = 0;
    for (const auto& r : run.reports) {
      xs.insert(xs.end(), r.samples.begin(), r.samples.end());
      calls += r.total_projection_calls + r.total_separation_calls + r.total_membership_calls;
    }
    csv << "asf," << steps << "," << calls << "," << moment_error(xs) << "\n";
  }

  const CountingBody counted(body);
  const double delta = 1.0 / std::sqrt(static_cast<double>(body.dimension()));
  {
    std::vector<Eigen::VectorXd> xs;
    for (int c = 0; c < m.chains; ++c) {
      Rng rng = Rng::for_chain(config.seed ^ 0x62616c6cULL, static_cast<std::uint64_t>(c));
      Eigen::VectorXd x = draw_warm_start(body, config, rng);
      for (long long k = 0; k < steps; ++k) {
        x = ball_walk_step(counted, x, delta, rng);
        xs.push_back(x);
      }
    }
    csv << "ball-walk," << steps << "," << counted.membership_calls() << ","
        << moment_error(xs) << "\n";
  }
  {
    const long long before = counted.membership_calls();
    std::vector<Eigen::VectorXd> xs;
    for (int c = 0; c < m.chains; ++c) {
      Rng rng = Rng::for_chain(config.seed ^ 0x686e72ULL, static_cast<std::uint64_t>(c));
      Eigen::VectorXd x = draw_warm_start(body, config, rng);
      for (long long k = 0; k < steps; ++k) {
        x = hit_and_run_step(counted, x, rng);
        xs.push_back(x);
      }
    }
    csv << "hit-and-run," << steps << "," << (counted.membership_calls() - before) << ","
        << moment_error(xs) << "\n";
  }

  if (m.out_path.empty()) {
    std::cout << csv.str();
  } else {
    open_out(m.out_path) << csv.str();
  }
  return 0;
}

}  // namespace

RunManifest parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Uniform sampling from convex bodies via the proximal sampler"};
  app.name("convex-sampler");

  RunManifest m;
  std::string rgo = "projection", warm, mode = "sample";
  double eta = -1.0;
  long long iters = -1, rejection_cap = kDefaultRejectionCap, inandout_cap = -1;
  std::string inandout_policy = "halt";
  std::uint64_t seed = 0;

  app.add_option("--body", m.body_path, "Body description JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--rgo", rgo, "RGO backend: projection|separation|inandout");
  app.add_option("--eta", eta, "Step size (default 1/d^2)")
      ->check(CLI::PositiveNumber);
  app.add_option("--iters", iters, "ASF iterations per chain (default from the schedule)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--chains", m.chains, "Number of independent chains")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "64-bit RNG seed");
  app.add_option("--warm", warm, "Warm start: exact|unitball|point (default: exact when available)");
  app.add_option("--out", m.out_path, "Output path (stdout when omitted)");
  app.add_option("--mode", mode, "sample|diagnose|audit|baseline-compare");
  app.add_option("--rejection-cap", rejection_cap, "Hard cap on RGO rejection loops")
      ->check(CLI::PositiveNumber);
  app.add_option("--inandout-cap", inandout_cap, "In-and-Out attempt cap");
  app.add_option("--inandout-policy", inandout_policy, "halt|restart");

  std::vector<const char*> argv;
  argv.push_back("convex-sampler");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  m.config.backend = parse_backend(rgo);
  m.mode = parse_mode(mode);
  m.config.eta = eta;
  m.config.iterations = iters;
  m.config.seed = seed;
  m.config.rejection_cap = rejection_cap;
  m.config.inandout_cap = inandout_cap;
  if (inandout_policy == "halt") {
    m.config.inandout_policy = InAndOutPolicy::halt;
  } else if (inandout_policy == "restart") {
    m.config.inandout_policy = InAndOutPolicy::restart;
  } else {
    throw UsageError("unknown --inandout-policy: " + inandout_policy);
  }
  if (!warm.empty()) {
    m.config.warm_start = parse_warm(warm);
    m.warm_explicit = true;
  }
  return m;
}

int run(const RunManifest& manifest) {
  RunManifest m = manifest;
  std::unique_ptr<ConvexBody> body = load_body_file(m.body_path);

  if (!m.warm_explicit) {
    m.config.warm_start = body->has(Capability::exact_uniform)
                              ? WarmStart::exact_uniform
                              : WarmStart::unit_ball_uniform;
  }
  // Warmness is known only for exact-uniform starts (M = 1).
  m.config.warmness = m.config.warm_start == WarmStart::exact_uniform
                          ? std::optional<double>(1.0)
                          : std::nullopt;

  validate_geometry(*body);
  log_info("body " + body->type_name() + " d=" + std::to_string(body->dimension()));

  switch (m.mode) {
    case RunMode::sample:
      return run_sample(m, *body);
    case RunMode::diagnose:
      return run_diagnose(m, *body);
    case RunMode::audit:
      return run_audit(m, *body);
    case RunMode::baseline_compare:
      return run_baseline_compare(m, *body);
  }
  throw UsageError("unknown mode");
}

int cli_main(const std::vector<std::string>& args) {
  try {
    return run(parse_args(args));
  } catch (const CLI::CallForHelp&) {
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const A1ViolationError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 3;
  } catch (const RejectionBudgetExceededError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 4;
  } catch (const IterationBudgetExceededError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 4;
  } catch (const SamplingFailureError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace csamp
