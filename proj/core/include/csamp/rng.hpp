#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace csamp {

/// Seeded pseudo-random source with the distributions the samplers need.
///
/// Per-chain streams are derived from (seed, chain_index) through a
/// splitmix64 scramble, so any number of chains is reproducible from a
/// single 64-bit seed independently of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng for_chain(std::uint64_t seed, std::uint64_t chain_index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal (Box-Muller, cached pair).
  double gaussian();

  void fill_gaussian(Eigen::VectorXd& out);
  Eigen::VectorXd gaussian_vector(int d);

  /// Uniform direction on the unit sphere in R^d.
  Eigen::VectorXd unit_sphere(int d);

  /// Uniform point in the centered ball of the given radius.
  Eigen::VectorXd uniform_ball(int d, double radius);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 step; used for seed derivation and cheap hashing.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace csamp
