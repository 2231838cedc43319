#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wai/bssn/operators.hpp"

namespace wai {

std::string_view to_string(InversionStatus s) {
  switch (s) {
    case InversionStatus::Success: return "success";
    case InversionStatus::BudgetExhausted: return "budget_exhausted";
    case InversionStatus::SutFault: return "sut_fault";
  }
  return "?";
}

namespace {

constexpr std::size_t kMu = 5;
constexpr std::size_t kLambda = 20;
constexpr int kRestarts = 5;
constexpr int kStallGenerations = 15;
constexpr double kReprobeTolerance = 1e-6;

struct Individual {
  std::vector<double> x;
  double scale = 1.0;  // self-adapted multiplier on the per-dimension base step
  double fitness = std::numeric_limits<double>::infinity();
};

class Search {
 public:
  Search(Prober& prober, const Box& target, std::optional<Category> label, const BssnParams& params, Rng& rng,
         const std::optional<Box>& region)
      : prober_(prober), space_(*prober.input_space()), target_(target), label_(label), rng_(rng) {
    region_ = space_.bounds();
    if (region) region_ = region_.intersection(*region);
    for (std::size_t d = 0; d < region_.dim(); ++d) {
      if (region_[d].lo > region_[d].hi) region_[d].hi = region_[d].lo;  // keep a point when the clip misses
      base_step_.push_back(space_[d].kind == VarKind::Real ? 0.25 * region_[d].width()
                                                           : std::max(1.0, 0.25 * region_[d].width()));
    }
    tau_ = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, space_.size())));
    // One evaluation is held back for the confirming re-probe.
    budget_ = params.inversion_budget > 1 ? params.inversion_budget - 1 : params.inversion_budget;
    reprobe_ = params.inversion_budget > 1;
  }

  InversionResult run() {
    result_.best_distance = std::numeric_limits<double>::infinity();
    for (int r = 0; r < kRestarts && !done_; ++r) {
      const std::size_t left = budget_ - result_.evaluations;
      const std::size_t run_budget = left / static_cast<std::size_t>(kRestarts - r);
      if (run_budget == 0) continue;
      restart(result_.evaluations + run_budget);
    }
    if (!done_) {
      result_.status = any_action_ ? InversionStatus::BudgetExhausted : InversionStatus::SutFault;
      if (result_.evaluations == 0) result_.status = InversionStatus::BudgetExhausted;
    }
    return std::move(result_);
  }

 private:
  void restart(std::size_t stop_at) {
    std::vector<Individual> pop;
    for (std::size_t i = 0; i < kMu && result_.evaluations < stop_at && !done_; ++i) {
      Individual ind{sample_point(space_, region_, rng_), 1.0};
      evaluate(ind);
      pop.push_back(std::move(ind));
    }
    if (pop.empty() || done_) return;
    auto by_fitness = [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; };
    std::stable_sort(pop.begin(), pop.end(), by_fitness);
    double best = pop.front().fitness;
    int stall = 0;
    while (result_.evaluations < stop_at && !done_ && stall < kStallGenerations) {
      const std::size_t parents = pop.size();
      for (std::size_t k = 0; k < kLambda && result_.evaluations < stop_at && !done_; ++k) {
        const auto& p = pop[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(parents) - 1))];
        Individual child = mutate(p);
        evaluate(child);
        pop.push_back(std::move(child));
      }
      std::stable_sort(pop.begin(), pop.end(), by_fitness);
      pop.resize(std::min(pop.size(), kMu));
      if (pop.front().fitness < best) {
        best = pop.front().fitness;
        stall = 0;
      } else {
        ++stall;
      }
    }
  }

  Individual mutate(const Individual& p) {
    Individual c;
    c.scale = std::clamp(p.scale * std::exp(tau_ * rng_.normal()), 1e-6, 4.0);
    c.x = p.x;
    const double flip = 1.0 / static_cast<double>(std::max<std::size_t>(1, space_.size()));
    for (std::size_t d = 0; d < c.x.size(); ++d) {
      const auto& var = space_[d];
      const auto& iv = region_[d];
      if (var.kind == VarKind::Real) {
        c.x[d] = std::clamp(c.x[d] + c.scale * base_step_[d] * rng_.normal(), iv.lo, iv.hi);
      } else if (var.kind == VarKind::Bool) {
        if (iv.lo < iv.hi && rng_.bernoulli(flip)) c.x[d] = 1.0 - c.x[d];
      } else {
        const double step = std::round(c.scale * base_step_[d] * rng_.normal());
        const double moved = std::clamp(c.x[d] + step, std::ceil(iv.lo), std::floor(iv.hi));
        if (var.admits(moved)) c.x[d] = moved;
      }
    }
    return c;
  }

  void evaluate(Individual& ind) {
    ++result_.evaluations;
    const auto s = prober_.probe(ind.x, ProbeKind::Inversion);
    if (s.fault) {
      ind.fitness = std::numeric_limits<double>::infinity();
      return;
    }
    any_action_ = true;
    ind.fitness = target_.distance(s.v);
    result_.best_distance = std::min(result_.best_distance, ind.fitness);
    if (ind.fitness > 0.0 || (label_ && s.category != *label_)) return;
    done_ = true;
    result_.status = InversionStatus::Success;
    result_.x = Assignment(prober_.input_space(), ind.x);
    result_.v = s.v;
    result_.category = s.category;
    if (reprobe_) {
      ++result_.evaluations;
      const auto again = prober_.probe(ind.x, ProbeKind::Inversion);
      result_.reconfirmed = !again.fault && target_.distance(again.v) <= kReprobeTolerance;
    }
  }

  Prober& prober_;
  const VariableSpace& space_;
  Box target_;
  std::optional<Category> label_;
  Rng& rng_;
  Box region_;
  std::vector<double> base_step_;
  double tau_ = 1.0;
  std::size_t budget_ = 0;
  bool reprobe_ = false;
  bool done_ = false;
  bool any_action_ = false;
  InversionResult result_;
};

}  // namespace

InversionResult invert(Prober& prober, const Box& target, const BssnParams& params, Rng& rng,
                       const std::optional<Box>& region) {
  if (target.empty()) throw std::invalid_argument("invert: empty target box");
  return Search(prober, target, std::nullopt, params, rng, region).run();
}

InversionResult invert(Prober& prober, const Cluster& target, const BssnParams& params, Rng& rng,
                       const std::optional<Box>& region) {
  if (target.space != SpaceTag::Action) throw std::invalid_argument("invert: target must be an action-space cluster");
  if (target.box.empty()) throw std::invalid_argument("invert: empty target box");
  return Search(prober, target.box, target.label, params, rng, region).run();
}

}  // namespace wai
