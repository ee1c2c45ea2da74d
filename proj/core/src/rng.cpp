#include "csamp/rng.hpp"

#include <cmath>

namespace csamp {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  // Expand the seed so nearby seeds give unrelated streams.
  std::uint64_t s = seed;
  std::seed_seq seq{static_cast<unsigned>(splitmix64(s)),
                    static_cast<unsigned>(splitmix64(s) >> 32),
                    static_cast<unsigned>(splitmix64(s)),
                    static_cast<unsigned>(splitmix64(s) >> 32)};
  engine_.seed(seq);
}

Rng Rng::for_chain(std::uint64_t seed, std::uint64_t chain_index) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x6a09e667f3bcc909ULL + chain_index;
  return Rng(splitmix64(s));
}

double Rng::uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = mag * std::sin(ang);
  has_spare_ = true;
  return mag * std::cos(ang);
}

void Rng::fill_gaussian(Eigen::VectorXd& out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = gaussian();
}

Eigen::VectorXd Rng::gaussian_vector(int d) {
  Eigen::VectorXd v(d);
  fill_gaussian(v);
  return v;
}

Eigen::VectorXd Rng::unit_sphere(int d) {
  Eigen::VectorXd v(d);
  double n = 0.0;
  do {
    fill_gaussian(v);
    n = v.norm();
  } while (n == 0.0);
  v /= n;
  return v;
}

Eigen::VectorXd Rng::uniform_ball(int d, double radius) {
  Eigen::VectorXd v = unit_sphere(d);
  const double r = radius * std::pow(uniform(), 1.0 / d);
  v *= r;
  return v;
}

}  // namespace csamp
