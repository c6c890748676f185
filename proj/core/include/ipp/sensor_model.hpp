#pragma once

#include <utility>
#include <vector>

namespace ipp {

/// Binary detector observation at a given viewing range.
struct Measurement {
  bool positive = false;
  double range = 0.0;
};

struct RatePoint {
  double range = 0.0;
  double tpr = 0.5;
  double tnr = 0.5;
};

struct DetectionRates {
  double tpr = 0.5;
  double tnr = 0.5;
};

/// Range -> (TPR, TNR) lookup table with linear interpolation between
/// breakpoints. Beyond max_range the detector is uninformative (0.5, 0.5).
class SensorModel {
 public:
  SensorModel(std::vector<RatePoint> breakpoints, double max_range);

  DetectionRates lookup(double range) const;
  double max_range() const { return max_range_; }
  const std::vector<RatePoint>& breakpoints() const { return breakpoints_; }

  /// 0.9 on [0, 200] m, tapering linearly to 0.5 at 600 m.
  static SensorModel default_table();
  /// Scaled copy of the default table (ranges multiplied by `scale`).
  static SensorModel scaled_default(double scale);

 private:
  std::vector<RatePoint> breakpoints_;
  double max_range_ = 0.0;
};

/// Posterior for a binary cell given one measurement; pure Bayes rule with
/// no storage clamp. Degenerate denominators leave p unchanged.
double bayes_posterior(double p, bool positive, double tpr, double tnr);

double bayes_update(double p, const Measurement& z, const SensorModel& model);

}  // namespace ipp
