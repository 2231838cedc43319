#include "wai/shepherd/shepherd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wai {

namespace {

bool fraction(double x) { return x >= 0.0 && x <= 1.0; }

// Volume over the dimensions where the global box has extent.
double extent_volume(const Box& b, const Box& global) {
  double v = 1.0;
  for (std::size_t d = 0; d < b.dim(); ++d)
    if (global[d].width() > 0.0) v *= std::max(0.0, b[d].width());
  return v;
}

void split(const Box& box, std::size_t first, std::size_t count, const Box& global,
           std::span<const PerformanceIndicators> ind, const RegionAssignment* prev, std::vector<Box>& out) {
  if (count == 1) {
    out[first] = box;
    return;
  }
  std::size_t dim = 0;
  double best = -1.0;
  for (std::size_t d = 0; d < box.dim(); ++d) {
    if (global[d].width() <= 0.0) continue;
    const double w = box[d].width() / global[d].width();
    if (w > best) {
      best = w;
      dim = d;
    }
  }
  const std::size_t lower_n = count / 2;
  const double share = static_cast<double>(lower_n) / static_cast<double>(count);
  const double lo = box[dim].lo, hi = box[dim].hi;
  double cut = lo + share * (hi - lo);
  if (prev && !ind.empty()) {
    const double total = unsettled_mass(box, *prev, ind);
    if (total > 0.0) {
      double a = lo, b = hi;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        Box lower = box;
        lower[dim].hi = m;
        (unsettled_mass(lower, *prev, ind) < share * total ? a : b) = m;
      }
      cut = 0.5 * (a + b);
    }
  }
  auto [lower, upper] = box.split(dim, cut);
  split(lower, first, lower_n, global, ind, prev, out);
  split(upper, first + lower_n, count - lower_n, global, ind, prev, out);
}

}  // namespace

void PerformanceIndicators::validate() const {
  auto fail = [](const char* field, double v) {
    throw std::invalid_argument(fmt::format("PerformanceIndicators.{} = {} outside [0, 1]", field, v));
  };
  if (!fraction(settled_volume)) fail("settled_volume", settled_volume);
  if (!fraction(h_prime_volume)) fail("h_prime_volume", h_prime_volume);
  if (!fraction(purity_mean)) fail("purity_mean", purity_mean);
  if (!fraction(inversion_success_rate)) fail("inversion_success_rate", inversion_success_rate);
  if (stagnation < 0) throw std::invalid_argument("PerformanceIndicators.stagnation is negative");
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::CostRelief: return "R1";
    case Rule::InversionBudget: return "R2";
    case Rule::Exploration: return "R3";
    case Rule::Tighten: return "R4";
  }
  return "?";
}

Shepherd::Shepherd(std::vector<BssnParams> initial, ShepherdConfig config)
    : initial_(std::move(initial)), config_(config) {
  for (const auto& p : initial_) p.validate();
}

InfluenceResult Shepherd::influence(std::span<const BssnParams> params,
                                    std::span<const PerformanceIndicators> indicators) const {
  if (params.size() != indicators.size() || params.size() != initial_.size())
    throw std::invalid_argument(fmt::format("influence: {} parameter sets, {} indicator sets, {} agents", params.size(),
                                            indicators.size(), initial_.size()));
  const auto& c = config_;
  InfluenceResult out;
  out.params.assign(params.begin(), params.end());
  out.fired.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = out.params[i];
    const auto& ind = indicators[i];
    auto& fired = out.fired[i];
    // Each rule only moves a value towards its bound, never past it, and never drags it back in from outside.
    const bool pressure = ind.compute_spend > c.cost_threshold;
    if (pressure) {
      fired.push_back(Rule::CostRelief);
      if (p.epsilon > c.epsilon_floor) p.epsilon = std::max(c.epsilon_floor, p.epsilon * c.relief_factor);
    }
    if (ind.inversion_success_rate < c.min_inversion_rate) {
      fired.push_back(Rule::InversionBudget);
      const std::size_t cap = initial_[i].inversion_budget * c.budget_cap_factor;
      if (p.inversion_budget < cap) p.inversion_budget = std::min(cap, p.inversion_budget * 2);
    }
    if (ind.stagnation > c.stagnation_limit) {
      fired.push_back(Rule::Exploration);
      if (p.explore_temperature < c.temperature_cap)
        p.explore_temperature = std::min(c.temperature_cap, p.explore_temperature + c.temperature_step);
    }
    if (!pressure && ind.purity_mean > c.tighten_purity && ind.stagnation == 0) {
      fired.push_back(Rule::Tighten);
      if (p.epsilon < c.epsilon_cap) p.epsilon = std::min(c.epsilon_cap, p.epsilon * c.tighten_factor);
    }
  }
  return out;
}

double unsettled_mass(const Box& box, const RegionAssignment& previous,
                      std::span<const PerformanceIndicators> indicators) {
  double m = 0.0;
  const std::size_t n = std::min(previous.boxes.size(), indicators.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Box cut = box.intersection(previous.boxes[i]);
    if (cut.empty()) continue;
    m += (1.0 - indicators[i].settled_volume) * extent_volume(cut, box);
  }
  return m;
}

RegionAssignment assign_regions(std::size_t agents, const Box& global,
                                std::span<const PerformanceIndicators> indicators, const RegionAssignment* previous) {
  if (agents == 0) throw std::invalid_argument("assign_regions: at least one agent is required");
  RegionAssignment a;
  a.boxes.resize(agents);
  split(global, 0, agents, global, indicators, previous, a.boxes);
  return a;
}

bool is_exact_cover(const RegionAssignment& a, const Box& global, double tol) {
  double vol = 0.0;
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    if (!global.contains(a.boxes[i]) || a.boxes[i].empty()) return false;
    vol += extent_volume(a.boxes[i], global);
    for (std::size_t j = i + 1; j < a.boxes.size(); ++j)
      if (a.boxes[i].overlaps(a.boxes[j])) return false;
  }
  return std::fabs(vol - extent_volume(global, global)) <= tol * std::max(1.0, extent_volume(global, global));
}

}  // namespace wai
