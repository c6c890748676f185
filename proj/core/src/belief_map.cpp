#include "ipp/belief_map.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ipp {

double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("entropy: probability outside [0, 1]");
  }
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

BeliefMap::BeliefMap(Vec2 origin, double cell_size, int n_rows, int n_cols,
                     double initial_prob, double initial_priority)
    : origin_(origin), cell_size_(cell_size), n_rows_(n_rows), n_cols_(n_cols) {
  if (cell_size <= 0.0) throw std::invalid_argument("BeliefMap: cell_size must be > 0");
  if (n_rows < 1 || n_cols < 1) throw std::invalid_argument("BeliefMap: grid must be at least 1x1");
  if (!(initial_prob >= 0.0 && initial_prob <= 1.0)) {
    throw std::invalid_argument("BeliefMap: initial probability outside [0, 1]");
  }
  if (initial_priority < 0.0) throw std::invalid_argument("BeliefMap: priority must be >= 0");
  prob_.assign(static_cast<std::size_t>(n_rows) * n_cols, initial_prob);
  priority_.assign(prob_.size(), initial_priority);
}

CellIndex BeliefMap::cell_at(Vec2 p) const {
  const double fx = (p.x - origin_.x) / cell_size_;
  const double fy = (p.y - origin_.y) / cell_size_;
  const int col = static_cast<int>(std::floor(fx));
  const int row = static_cast<int>(std::floor(fy));
  if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) return kInvalidCell;
  return cell_index(row, col);
}

void BeliefMap::set_prob(CellIndex idx, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("BeliefMap::set_prob: probability outside [0, 1]");
  }
  prob_[static_cast<std::size_t>(idx)] = p;
}

void BeliefMap::set_priority(CellIndex idx, double w) {
  if (w < 0.0) throw std::invalid_argument("BeliefMap::set_priority: weight must be >= 0");
  priority_[static_cast<std::size_t>(idx)] = w;
}

bool BeliefMap::uniform_priority() const {
  for (double w : priority_) {
    if (w != 1.0) return false;
  }
  return true;
}

double BeliefMap::total_entropy() const {
  double sum = 0.0;
  for (double p : prob_) sum += entropy(p);
  return sum;
}

namespace {

void write_array(std::ostream& os, const std::vector<double>& v, int n_cols) {
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    os << buf;
    os << (((i + 1) % static_cast<std::size_t>(n_cols) == 0) ? '\n' : ' ');
  }
}

}  // namespace

void BeliefMap::save(std::ostream& os) const {
  os << "belief_map 1\n";
  os << "origin_x " << origin_.x << "\norigin_y " << origin_.y << "\n";
  os << "cell_size " << cell_size_ << "\n";
  os << "n_rows " << n_rows_ << "\nn_cols " << n_cols_ << "\n";
  os << "prob\n";
  write_array(os, prob_, n_cols_);
  if (!uniform_priority()) {
    os << "priority\n";
    write_array(os, priority_, n_cols_);
  }
}

BeliefMap BeliefMap::load(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "belief_map" || version != 1) {
    throw std::runtime_error("BeliefMap::load: bad header");
  }
  Vec2 origin;
  double cell_size = 0.0;
  int n_rows = 0, n_cols = 0;
  auto expect = [&is](const char* key) {
    std::string k;
    is >> k;
    if (k != key) throw std::runtime_error(std::string("BeliefMap::load: expected ") + key);
  };
  expect("origin_x");
  is >> origin.x;
  expect("origin_y");
  is >> origin.y;
  expect("cell_size");
  is >> cell_size;
  expect("n_rows");
  is >> n_rows;
  expect("n_cols");
  is >> n_cols;
  expect("prob");
  BeliefMap map(origin, cell_size, n_rows, n_cols);
  for (auto& p : map.prob_) {
    if (!(is >> p)) throw std::runtime_error("BeliefMap::load: truncated probability array");
  }
  std::string section;
  if (is >> section) {
    if (section != "priority") throw std::runtime_error("BeliefMap::load: unexpected section");
    for (auto& w : map.priority_) {
      if (!(is >> w)) throw std::runtime_error("BeliefMap::load: truncated priority array");
    }
  }
  return map;
}

}  // namespace ipp
