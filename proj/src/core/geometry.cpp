#include "wai/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wai {

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {}

Box::Box(std::initializer_list<Interval> dims) : dims_(dims) {}

Box Box::bounding(std::span<const std::vector<double>> points) {
  if (points.empty()) throw std::invalid_argument("bounding box of an empty point set");
  std::vector<Interval> dims(points.front().size());
  for (std::size_t d = 0; d < dims.size(); ++d) dims[d] = {points.front()[d], points.front()[d]};
  for (const auto& p : points) {
    if (p.size() != dims.size()) throw std::invalid_argument("bounding box of mixed-dimension points");
    for (std::size_t d = 0; d < dims.size(); ++d) {
      dims[d].lo = std::min(dims[d].lo, p[d]);
      dims[d].hi = std::max(dims[d].hi, p[d]);
    }
  }
  return Box(std::move(dims));
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& i : dims_) v *= std::max(0.0, i.width());
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c;
  c.reserve(dims_.size());
  for (const auto& i : dims_) c.push_back(i.mid());
  return c;
}

bool Box::contains(std::span<const double> point) const {
  if (point.size() != dims_.size()) return false;
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (!dims_[d].contains(point[d])) return false;
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (other[d].lo < dims_[d].lo || other[d].hi > dims_[d].hi) return false;
  return true;
}

bool Box::intersects(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t d = 0; d < dims_.size(); ++d)
    if (other[d].lo > dims_[d].hi || other[d].hi < dims_[d].lo) return false;
  return true;
}

bool Box::overlaps(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const double lo = std::max(dims_[d].lo, other[d].lo);
    const double hi = std::min(dims_[d].hi, other[d].hi);
    const bool degenerate = dims_[d].width() == 0.0 || other[d].width() == 0.0;
    if (degenerate ? lo > hi : lo >= hi) return false;
  }
  return true;
}

Box Box::intersection(const Box& other) const {
  std::vector<Interval> dims(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d)
    dims[d] = {std::max(dims_[d].lo, other[d].lo), std::min(dims_[d].hi, other[d].hi)};
  return Box(std::move(dims));
}

bool Box::empty() const {
  return std::any_of(dims_.begin(), dims_.end(), [](const Interval& i) { return i.lo > i.hi; });
}

Box Box::hull(const Box& other) const {
  std::vector<Interval> dims(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d)
    dims[d] = {std::min(dims_[d].lo, other[d].lo), std::max(dims_[d].hi, other[d].hi)};
  return Box(std::move(dims));
}

std::pair<Box, Box> Box::split(std::size_t d, double cut) const {
  Box lower = *this;
  Box upper = *this;
  lower[d].hi = cut;
  upper[d].lo = cut;
  return {std::move(lower), std::move(upper)};
}

double Box::distance(std::span<const double> point) const {
  double sq = 0.0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const double x = point[d];
    double gap = 0.0;
    if (x < dims_[d].lo) gap = dims_[d].lo - x;
    else if (x > dims_[d].hi) gap = x - dims_[d].hi;
    sq += gap * gap;
  }
  return std::sqrt(sq);
}

double distance_to_union(std::span<const double> point, std::span<const Box> boxes) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) {
    best = std::min(best, b.distance(point));
    if (best == 0.0) break;
  }
  return best;
}

}  // namespace wai
