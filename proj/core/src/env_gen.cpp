#include "ipp/env_gen.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ipp {

EnvSpec generate_env_spec(const Bounds& bounds, double cell_size, const EnvDistribution& dist,
                          std::mt19937_64& rng) {
  if (dist.min_clusters < 0 || dist.max_clusters < dist.min_clusters) {
    throw std::invalid_argument("generate_env_spec: bad cluster range");
  }
  if (dist.sigma_min <= 0.0 || dist.sigma_max < dist.sigma_min) {
    throw std::invalid_argument("generate_env_spec: bad sigma range");
  }
  if (dist.peak_min <= 0.0 || dist.peak_max >= 1.0 || dist.peak_max < dist.peak_min) {
    throw std::invalid_argument("generate_env_spec: bad peak range");
  }
  EnvSpec spec;
  spec.bounds = bounds;
  spec.cell_size = cell_size;

  std::uniform_int_distribution<int> n_dist(dist.min_clusters, dist.max_clusters);
  std::uniform_real_distribution<double> ux(bounds.x_min, bounds.x_max);
  std::uniform_real_distribution<double> uy(bounds.y_min, bounds.y_max);
  std::uniform_real_distribution<double> usigma(dist.sigma_min, dist.sigma_max);
  std::uniform_real_distribution<double> upeak(dist.peak_min, dist.peak_max);

  const int n = n_dist(rng);
  spec.clusters.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    GaussianPrior g;
    g.center = {ux(rng), uy(rng)};
    g.sigma = usigma(rng);
    g.peak = upeak(rng);
    spec.clusters.push_back(g);
  }
  return spec;
}

BeliefMap rasterize_env(const EnvSpec& spec) {
  const int n_cols = std::max(1, static_cast<int>(std::ceil(spec.bounds.width() / spec.cell_size)));
  const int n_rows =
      std::max(1, static_cast<int>(std::ceil(spec.bounds.height() / spec.cell_size)));
  BeliefMap map({spec.bounds.x_min, spec.bounds.y_min}, spec.cell_size, n_rows, n_cols, 0.0);
  for (CellIndex idx = 0; idx < map.size(); ++idx) {
    const Vec2 c = map.cell_center(idx);
    double p = 0.0;
    for (const GaussianPrior& g : spec.clusters) {
      const double d2 = squared_norm(c - g.center);
      p += g.peak * std::exp(-d2 / (2.0 * g.sigma * g.sigma));
    }
    map.set_prob(idx, std::min(p, 0.5));
  }
  return map;
}

void EnvSpec::save(std::ostream& os) const {
  os << "env_spec 1\n";
  os << "bounds " << bounds.x_min << ' ' << bounds.y_min << ' ' << bounds.x_max << ' '
     << bounds.y_max << "\n";
  os << "cell_size " << cell_size << "\n";
  os << "seed " << seed << "\n";
  os << "clusters " << clusters.size() << "\n";
  for (const GaussianPrior& g : clusters) {
    os << g.center.x << ' ' << g.center.y << ' ' << g.sigma << ' ' << g.peak << "\n";
  }
}

EnvSpec EnvSpec::load(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "env_spec" || version != 1) throw std::runtime_error("EnvSpec::load: bad header");
  EnvSpec spec;
  std::string key;
  is >> key >> spec.bounds.x_min >> spec.bounds.y_min >> spec.bounds.x_max >> spec.bounds.y_max;
  if (key != "bounds") throw std::runtime_error("EnvSpec::load: expected bounds");
  is >> key >> spec.cell_size;
  if (key != "cell_size") throw std::runtime_error("EnvSpec::load: expected cell_size");
  is >> key >> spec.seed;
  if (key != "seed") throw std::runtime_error("EnvSpec::load: expected seed");
  std::size_t n = 0;
  is >> key >> n;
  if (key != "clusters") throw std::runtime_error("EnvSpec::load: expected clusters");
  spec.clusters.resize(n);
  for (GaussianPrior& g : spec.clusters) {
    is >> g.center.x >> g.center.y >> g.sigma >> g.peak;
  }
  if (!is) throw std::runtime_error("EnvSpec::load: truncated spec");
  return spec;
}

}  // namespace ipp
