#pragma once

// Rule checks for the shepherd, shared by the unit tests and the acceptance runner.

#include <string>
#include <vector>

#include "wai/random.hpp"
#include "wai/shepherd/shepherd.hpp"

namespace wai::testing {

struct Check {
  std::string name;
  bool ok = false;
};

inline PerformanceIndicators nominal() {
  PerformanceIndicators i;
  i.settled_volume = 0.6;
  i.h_prime_volume = 0.2;
  i.purity_mean = 0.95;
  i.inversion_success_rate = 0.8;
  i.compute_spend = 1000;
  return i;
}

inline bool params_in_range(const BssnParams& p, const BssnParams& initial, const ShepherdConfig& c) {
  try {
    p.validate();
  } catch (...) {
    return false;
  }
  return p.inversion_budget <= initial.inversion_budget * c.budget_cap_factor && p.explore_temperature <= 1.0;
}

inline std::vector<Check> run_shepherd_suite(std::uint64_t seed, std::size_t random_cases) {
  std::vector<Check> out;
  const BssnParams base;
  const Shepherd sh({base});
  const auto& cfg = sh.config();
  auto one = [&](const BssnParams& p, const PerformanceIndicators& i) {
    const auto r = sh.influence(std::vector<BssnParams>{p}, std::vector<PerformanceIndicators>{i});
    return std::make_pair(r.params[0], r.fired[0]);
  };
  auto fired_only = [](const std::vector<Rule>& f, Rule r) { return f.size() == 1 && f[0] == r; };

  {
    auto i = nominal();
    i.compute_spend = cfg.cost_threshold + 1;
    const auto [p, f] = one(base, i);
    out.push_back({"R1 multiplies epsilon by 0.95", fired_only(f, Rule::CostRelief) && p.epsilon == base.epsilon * 0.95});
    auto low = base;
    low.epsilon = 0.56;
    out.push_back({"R1 floors epsilon at 0.55", one(low, i).first.epsilon == 0.55});
    i.compute_spend = cfg.cost_threshold;
    out.push_back({"R1 needs spend above the threshold", one(base, i).second.empty()});
  }
  {
    auto i = nominal();
    i.inversion_success_rate = 0.1;
    const auto [p, f] = one(base, i);
    out.push_back({"R2 doubles the inversion budget",
                   fired_only(f, Rule::InversionBudget) && p.inversion_budget == 2 * base.inversion_budget});
    auto q = base;
    for (int k = 0; k < 10; ++k) q = one(q, i).first;
    out.push_back({"R2 caps the budget at 10x initial", q.inversion_budget == 10 * base.inversion_budget});
    i.inversion_success_rate = 0.2;
    out.push_back({"R2 needs a rate below 0.2", one(base, i).second.empty()});
  }
  {
    auto i = nominal();
    i.stagnation = 6;
    const auto [p, f] = one(base, i);
    out.push_back({"R3 raises the temperature by 0.1",
                   fired_only(f, Rule::Exploration) && p.explore_temperature == base.explore_temperature + 0.1});
    auto q = base;
    for (int k = 0; k < 20; ++k) q = one(q, i).first;
    out.push_back({"R3 caps the temperature at 1", q.explore_temperature == 1.0});
    i.stagnation = 5;
    out.push_back({"R3 needs more than 5 stagnant rounds", one(base, i).second.empty()});
  }
  {
    auto i = nominal();
    i.purity_mean = 0.995;
    const auto [p, f] = one(base, i);
    out.push_back({"R4 multiplies epsilon by 1.02", fired_only(f, Rule::Tighten) && p.epsilon == base.epsilon * 1.02});
    auto q = base;
    for (int k = 0; k < 20; ++k) q = one(q, i).first;
    out.push_back({"R4 caps epsilon at 0.99", q.epsilon == 0.99});
    i.stagnation = 1;
    out.push_back({"R4 is held back by stagnation", one(base, i).second.empty()});
    i.stagnation = 0;
    i.compute_spend = cfg.cost_threshold + 1;
    const auto [p2, f2] = one(base, i);
    out.push_back({"R4 is held back under cost pressure", fired_only(f2, Rule::CostRelief) && p2.epsilon < base.epsilon});
  }
  {
    const auto [p, f] = one(base, nominal());
    out.push_back({"nominal indicators leave parameters unchanged", f.empty() && p == base});
    const auto twice = one(p, nominal()).first;
    out.push_back({"influence is idempotent under nominal indicators", twice == p});
  }
  {
    // Agents are handled independently.
    const Shepherd three({base, base, base});
    auto busy = nominal();
    busy.compute_spend = cfg.cost_threshold * 2;
    const auto r = three.influence(std::vector<BssnParams>(3, base), std::vector<PerformanceIndicators>{nominal(), busy, nominal()});
    out.push_back({"rules act per agent", r.params[0] == base && r.params[2] == base && r.params[1].epsilon < base.epsilon});
  }

  Rng rng(seed);
  bool ranges = true, relief = true;
  for (std::size_t n = 0; n < random_cases; ++n) {
    BssnParams p = base;
    p.epsilon = rng.uniform(0.51, 0.999);
    p.explore_temperature = rng.uniform(0.0, 1.0);
    p.inversion_budget = static_cast<std::size_t>(rng.uniform_int(1, 10)) * base.inversion_budget;
    const bool pressure = rng.bernoulli(0.5);
    double prev_eps = p.epsilon;
    for (int k = 0; k < 12; ++k) {
      PerformanceIndicators i;
      i.settled_volume = rng.uniform();
      i.h_prime_volume = rng.uniform();
      i.purity_mean = rng.bernoulli(0.5) ? rng.uniform(0.99, 1.0) : rng.uniform();
      i.inversion_success_rate = rng.uniform();
      i.compute_spend = pressure ? cfg.cost_threshold + 1 + static_cast<std::uint64_t>(rng.uniform_int(0, 100000))
                                 : static_cast<std::uint64_t>(rng.uniform_int(0, 2 * static_cast<std::int64_t>(cfg.cost_threshold)));
      i.gate_blocks = static_cast<std::uint64_t>(rng.uniform_int(0, 50));
      i.stagnation = static_cast<int>(rng.uniform_int(0, 10));
      p = one(p, i).first;
      ranges = ranges && params_in_range(p, base, cfg);
      if (pressure) {
        relief = relief && p.epsilon <= prev_eps;
        prev_eps = p.epsilon;
      }
    }
  }
  out.push_back({"parameters stay in range under arbitrary indicators", ranges});
  out.push_back({"epsilon is non-increasing under sustained cost pressure", relief});
  return out;
}

}  // namespace wai::testing
