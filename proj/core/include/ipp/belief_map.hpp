#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

using CellIndex = std::int32_t;
inline constexpr CellIndex kInvalidCell = -1;

/// Stored probabilities are kept away from the absorbing states 0 and 1
/// so cells never become permanently unobservable.
inline constexpr double kMinStoredProb = 1e-6;
inline constexpr double kMaxStoredProb = 1.0 - 1e-6;

inline double clamp_stored_prob(double p) {
  if (p < kMinStoredProb) return kMinStoredProb;
  if (p > kMaxStoredProb) return kMaxStoredProb;
  return p;
}

/// Shannon entropy of a binary cell, in bits. Throws std::domain_error
/// outside [0, 1]; 0*log(0) is taken as 0.
double entropy(double p);

/// Uniform 2D grid of occupancy probabilities with per-cell priority
/// weights. Row-major storage, cell index = row * n_cols + col.
class BeliefMap {
 public:
  BeliefMap() = default;
  BeliefMap(Vec2 origin, double cell_size, int n_rows, int n_cols,
            double initial_prob = 0.5, double initial_priority = 1.0);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int size() const { return n_rows_ * n_cols_; }
  double cell_size() const { return cell_size_; }
  Vec2 origin() const { return origin_; }

  CellIndex cell_index(int row, int col) const {
    return static_cast<CellIndex>(row) * n_cols_ + col;
  }
  int row_of(CellIndex idx) const { return idx / n_cols_; }
  int col_of(CellIndex idx) const { return idx % n_cols_; }

  Vec2 cell_center(CellIndex idx) const {
    return {origin_.x + (col_of(idx) + 0.5) * cell_size_,
            origin_.y + (row_of(idx) + 0.5) * cell_size_};
  }

  bool valid_cell(CellIndex idx) const { return idx >= 0 && idx < size(); }

  /// Cell containing a point, or kInvalidCell when outside the grid.
  CellIndex cell_at(Vec2 p) const;

  Bounds extent() const {
    return {origin_.x, origin_.y, origin_.x + n_cols_ * cell_size_,
            origin_.y + n_rows_ * cell_size_};
  }

  double prob(CellIndex idx) const { return prob_[static_cast<std::size_t>(idx)]; }
  void set_prob(CellIndex idx, double p);  // validates [0, 1]
  /// Posterior write path: clamps into [kMinStoredProb, kMaxStoredProb].
  void update_prob(CellIndex idx, double p) {
    prob_[static_cast<std::size_t>(idx)] = clamp_stored_prob(p);
  }

  double priority(CellIndex idx) const { return priority_[static_cast<std::size_t>(idx)]; }
  void set_priority(CellIndex idx, double w);  // validates w >= 0

  const std::vector<double>& probabilities() const { return prob_; }
  const std::vector<double>& priorities() const { return priority_; }
  bool uniform_priority() const;

  /// Sum of per-cell entropies in bits (unweighted).
  double total_entropy() const;

  void save(std::ostream& os) const;
  static BeliefMap load(std::istream& is);

 private:
  Vec2 origin_;
  double cell_size_ = 1.0;
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<double> prob_;
  std::vector<double> priority_;
};

}  // namespace ipp
