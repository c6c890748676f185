#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

namespace ipp {

/// Uniform hash grid over (x, y) for range-limited neighbor queries.
/// Distances are Euclidean over (x, y, z); only the bucketing is planar.
class SpatialHashGrid {
 public:
  explicit SpatialHashGrid(double bucket_size) : bucket_(bucket_size) {}

  void insert(int id, double x, double y, double z) {
    const std::int32_t cx = coord(x), cy = coord(y);
    cells_[pack(cx, cy)].push_back({id, x, y, z});
    ++count_;
    cx_min_ = std::min(cx_min_, cx);
    cx_max_ = std::max(cx_max_, cx);
    cy_min_ = std::min(cy_min_, cy);
    cy_max_ = std::max(cy_max_, cy);
  }

  void remove(int id, double x, double y) {
    auto it = cells_.find(key_of(x, y));
    if (it == cells_.end()) return;
    auto& v = it->second;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].id == id) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        --count_;
        break;
      }
    }
    if (v.empty()) cells_.erase(it);
  }

  std::size_t size() const { return count_; }
  void clear() {
    cells_.clear();
    count_ = 0;
    cx_min_ = cx_max_ = cy_min_ = cy_max_ = 0;
  }

  /// Ids within `radius` of (x, y, z), ascending by id.
  template <typename Pred>
  std::vector<int> near(double x, double y, double z, double radius, Pred&& accept) const {
    std::vector<int> out;
    const std::int32_t cx_lo = coord(x - radius), cx_hi = coord(x + radius);
    const std::int32_t cy_lo = coord(y - radius), cy_hi = coord(y + radius);
    const double r2 = radius * radius;
    for (std::int32_t cy = cy_lo; cy <= cy_hi; ++cy) {
      for (std::int32_t cx = cx_lo; cx <= cx_hi; ++cx) {
        auto it = cells_.find(pack(cx, cy));
        if (it == cells_.end()) continue;
        for (const Entry& e : it->second) {
          const double d2 = sq(e.x - x) + sq(e.y - y) + sq(e.z - z);
          if (d2 <= r2 && accept(e.id)) out.push_back(e.id);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Closest accepted id, or -1 when none exists. Expanding ring search.
  template <typename Pred>
  int nearest(double x, double y, double z, Pred&& accept) const {
    if (count_ == 0) return -1;
    const std::int32_t qx = coord(x), qy = coord(y);
    const std::int32_t max_ring =
        std::max({std::abs(qx - cx_min_), std::abs(qx - cx_max_), std::abs(qy - cy_min_),
                  std::abs(qy - cy_max_)});
    int best_id = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::int32_t ring = 0; ring <= max_ring; ++ring) {
      if (best_id >= 0) {
        const double safe = (ring - 1) * bucket_;
        if (safe > 0.0 && safe * safe > best_d2) break;
      }
      for (std::int32_t cy = qy - ring; cy <= qy + ring; ++cy) {
        for (std::int32_t cx = qx - ring; cx <= qx + ring; ++cx) {
          if (std::max(std::abs(cx - qx), std::abs(cy - qy)) != ring) continue;
          auto it = cells_.find(pack(cx, cy));
          if (it == cells_.end()) continue;
          for (const Entry& e : it->second) {
            if (!accept(e.id)) continue;
            const double d2 = sq(e.x - x) + sq(e.y - y) + sq(e.z - z);
            if (d2 < best_d2 || (d2 == best_d2 && e.id < best_id)) {
              best_d2 = d2;
              best_id = e.id;
            }
          }
        }
      }
    }
    return best_id;
  }

 private:
  struct Entry {
    int id;
    double x, y, z;
  };

  static double sq(double v) { return v * v; }

  std::int32_t coord(double v) const {
    return static_cast<std::int32_t>(std::floor(v / bucket_));
  }

  static std::uint64_t pack(std::int32_t cx, std::int32_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
  }

  std::uint64_t key_of(double x, double y) const { return pack(coord(x), coord(y)); }

  double bucket_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> cells_;
  std::size_t count_ = 0;
  // bucket-space bounding box of everything ever inserted
  std::int32_t cx_min_ = 0, cx_max_ = 0, cy_min_ = 0, cy_max_ = 0;
};

}  // namespace ipp
