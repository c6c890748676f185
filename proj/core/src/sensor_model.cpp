#include "ipp/sensor_model.hpp"

#include <stdexcept>

namespace ipp {

SensorModel::SensorModel(std::vector<RatePoint> breakpoints, double max_range)
    : breakpoints_(std::move(breakpoints)), max_range_(max_range) {
  if (breakpoints_.empty()) throw std::invalid_argument("SensorModel: empty table");
  if (breakpoints_.front().range != 0.0) {
    throw std::invalid_argument("SensorModel: table must start at range 0");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const RatePoint& b = breakpoints_[i];
    if (i > 0 && b.range <= breakpoints_[i - 1].range) {
      throw std::invalid_argument("SensorModel: ranges must be strictly increasing");
    }
    if (b.tpr < 0.5 || b.tpr > 1.0 || b.tnr < 0.5 || b.tnr > 1.0) {
      throw std::invalid_argument("SensorModel: rates must lie in [0.5, 1]");
    }
  }
  if (max_range_ < breakpoints_.back().range) {
    throw std::invalid_argument("SensorModel: max_range below last breakpoint");
  }
}

DetectionRates SensorModel::lookup(double range) const {
  if (range < 0.0) throw std::invalid_argument("SensorModel::lookup: negative range");
  if (range > max_range_) return {0.5, 0.5};
  if (range >= breakpoints_.back().range) {
    return {breakpoints_.back().tpr, breakpoints_.back().tnr};
  }
  std::size_t hi = 1;
  while (breakpoints_[hi].range < range) ++hi;
  const RatePoint& a = breakpoints_[hi - 1];
  const RatePoint& b = breakpoints_[hi];
  const double f = (range - a.range) / (b.range - a.range);
  return {a.tpr + f * (b.tpr - a.tpr), a.tnr + f * (b.tnr - a.tnr)};
}

SensorModel SensorModel::default_table() {
  return SensorModel({{0.0, 0.9, 0.9}, {200.0, 0.9, 0.9}, {600.0, 0.5, 0.5}}, 600.0);
}

SensorModel SensorModel::scaled_default(double scale) {
  return SensorModel({{0.0, 0.9, 0.9}, {200.0 * scale, 0.9, 0.9}, {600.0 * scale, 0.5, 0.5}},
                     600.0 * scale);
}

double bayes_posterior(double p, bool positive, double tpr, double tnr) {
  if (positive) {
    const double den = tpr * p + (1.0 - tnr) * (1.0 - p);
    if (den <= 0.0) return p;
    return tpr * p / den;
  }
  const double den = (1.0 - tpr) * p + tnr * (1.0 - p);
  if (den <= 0.0) return p;
  return (1.0 - tpr) * p / den;
}

double bayes_update(double p, const Measurement& z, const SensorModel& model) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("bayes_update: probability outside [0, 1]");
  }
  const DetectionRates r = model.lookup(z.range);
  return bayes_posterior(p, z.positive, r.tpr, r.tnr);
}

}  // namespace ipp
