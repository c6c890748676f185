#include "ipp/rewards.hpp"

#include <stdexcept>

namespace ipp {

DecayFunction DecayFunction::make(double gamma, double beta) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("DecayFunction: gamma must lie in [0, 1]");
  }
  if (beta > 0.0) throw std::invalid_argument("DecayFunction: beta must be <= 0");
  if (beta == 0.0 && gamma != 1.0) {
    throw std::invalid_argument("DecayFunction: beta == 0 requires gamma == 1");
  }
  return {gamma, beta};
}

double decay_value(const DecayFunction& decay, double t) {
  if (t < 0.0) throw std::invalid_argument("decay_value: t must be >= 0");
  return decay.value(t);
}

CellReward optimistic_cell_reward(double p, double range, const SensorModel& model) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("optimistic_cell_reward: probability outside [0, 1]");
  }
  if (p <= kMinStoredProb || p >= kMaxStoredProb) {
    return {0.0, p};  // settled cell
  }
  const bool positive = p >= 0.5;
  const DetectionRates r = model.lookup(range);
  const double posterior = clamp_stored_prob(bayes_posterior(p, positive, r.tpr, r.tnr));
  return {entropy(p) - entropy(posterior), posterior};
}

double weighted_cell_reward(double p, double range, const SensorModel& model, double priority,
                            double t, const DecayFunction& decay) {
  if (priority < 0.0) throw std::invalid_argument("weighted_cell_reward: priority must be >= 0");
  return priority * decay_value(decay, t) * optimistic_cell_reward(p, range, model).reward;
}

}  // namespace ipp
