#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace wai {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed axis-aligned box. Dimensions may be degenerate (lo == hi).
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> dims);
  Box(std::initializer_list<Interval> dims);

  /// Smallest box containing every point; throws on an empty point set.
  static Box bounding(std::span<const std::vector<double>> points);

  [[nodiscard]] std::size_t dim() const { return dims_.size(); }
  [[nodiscard]] const Interval& operator[](std::size_t i) const { return dims_[i]; }
  [[nodiscard]] Interval& operator[](std::size_t i) { return dims_[i]; }
  [[nodiscard]] const std::vector<Interval>& intervals() const { return dims_; }

  [[nodiscard]] double volume() const;
  [[nodiscard]] std::vector<double> center() const;
  [[nodiscard]] bool contains(std::span<const double> point) const;
  [[nodiscard]] bool contains(const Box& other) const;
  /// Closed intersection test: touching faces count.
  [[nodiscard]] bool intersects(const Box& other) const;
  /// Intersection with positive extent in every non-degenerate dimension.
  [[nodiscard]] bool overlaps(const Box& other) const;
  /// Clipped box; dimensions that do not meet collapse to an empty interval (lo > hi).
  [[nodiscard]] Box intersection(const Box& other) const;
  [[nodiscard]] bool empty() const;
  [[nodiscard]] Box hull(const Box& other) const;
  [[nodiscard]] std::pair<Box, Box> split(std::size_t d, double cut) const;
  /// Euclidean distance from point to the box; 0 inside.
  [[nodiscard]] double distance(std::span<const double> point) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> dims_;
};

/// Euclidean distance from point to the union of boxes (0 inside any box).
/// An empty union is infinitely far away.
double distance_to_union(std::span<const double> point, std::span<const Box> boxes);

}  // namespace wai
