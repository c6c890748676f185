#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "ipp/belief_map.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

struct GaussianPrior {
  Vec2 center;
  double sigma = 0.0;  // m
  double peak = 0.0;   // probability in (0, 1)
};

struct EnvSpec {
  Bounds bounds;
  double cell_size = 30.0;
  std::vector<GaussianPrior> clusters;
  std::uint64_t seed = 0;

  void save(std::ostream& os) const;
  static EnvSpec load(std::istream& is);
};

struct EnvDistribution {
  int min_clusters = 4;
  int max_clusters = 20;  // inclusive
  double sigma_min = 60.0;
  double sigma_max = 450.0;
  double peak_min = 0.05;
  double peak_max = 0.5;

  EnvDistribution scaled(double s) const {
    EnvDistribution d = *this;
    d.sigma_min *= s;
    d.sigma_max *= s;
    return d;
  }
};

EnvSpec generate_env_spec(const Bounds& bounds, double cell_size, const EnvDistribution& dist,
                          std::mt19937_64& rng);

/// p(cell) = clamp(sum_k peak_k * exp(-d_k^2 / (2 sigma_k^2)), 0, 0.5),
/// priorities all 1.
BeliefMap rasterize_env(const EnvSpec& spec);

}  // namespace ipp
