#pragma once

// Small SUT + checker pairs with closed-form ground truth.

#include <fmt/format.h>

#include <memory>
#include <string>

#include "wai/bssn/agent.hpp"
#include "wai/constraint/parser.hpp"
#include "wai/sut/reference.hpp"

namespace wai::testing {

struct Rig {
  std::unique_ptr<Sut> sut;
  std::shared_ptr<const ConstraintSystem> checker;
  std::unique_ptr<Prober> prober;
};

inline Rig make_rig(const SutSpec& spec, const std::string& constraints) {
  Rig r;
  r.sut = make_reference_sut(spec);
  std::string text;
  const auto& vars = r.sut->action_space().variables();
  for (const auto& v : vars) text += fmt::format("var {} : real {}..{}\n", v.name, v.lo, v.hi);
  r.checker = std::make_shared<const ConstraintSystem>(parse_constraint_system(text + constraints));
  r.prober = std::make_unique<Prober>(*r.sut, *r.checker);
  return r;
}

/// v = 2x over `input`.
inline SutSpec doubling(double lo, double hi) {
  SutSpec s;
  s.kind = SutKind::Linear;
  s.input_box = Box{{lo, hi}};
  s.A = {{2.0}};
  s.b = {0.0};
  return s;
}

/// v = x on the unit square.
inline SutSpec identity_square() {
  SutSpec s;
  s.kind = SutKind::Linear;
  s.input_box = Box{{0.0, 1.0}, {0.0, 1.0}};
  s.A = {{1.0, 0.0}, {0.0, 1.0}};
  s.b = {0.0, 0.0};
  return s;
}

/// Identity square with everything left of x0 = boundary unpermissible.
inline Rig half_split_rig(double boundary) {
  return make_rig(identity_square(), fmt::format("lr hard -v0 <= {}\n", -boundary));
}

/// Ground truth of the half split, mirroring the checker's hard tolerance.
inline Category half_split_truth(double x0, double boundary) {
  return boundary - x0 > kHardTolerance ? Category::HPrime : Category::HS;
}

struct LeafAudit {
  std::size_t leaves = 0;
  std::size_t flagged = 0;
  std::size_t impure_settled = 0;    // settled leaves whose grid purity is below epsilon
  std::size_t misplaced_flagged = 0; // flagged leaves away from the boundary or above minimum size
  double volume = 0.0;
  double worst_purity = 1.0;
};

/// Scores partition leaves against the half split on a 200 x 200 grid of cell centres.
inline LeafAudit audit_half_split(const std::vector<Cluster>& leaves, double boundary, const BssnParams& params) {
  LeafAudit a;
  constexpr int kGrid = 200;
  for (const auto& leaf : leaves) {
    ++a.leaves;
    a.volume += leaf.box.volume();
    if (leaf.unsettled) {
      ++a.flagged;
      const bool straddles = leaf.box[0].lo <= boundary && boundary <= leaf.box[0].hi;
      const bool minimal = leaf.box[0].width() <= params.min_box_fraction || leaf.box[1].width() <= params.min_box_fraction;
      if (!straddles || !minimal) ++a.misplaced_flagged;
      continue;
    }
    std::size_t in = 0, agree = 0;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const double p[2] = {(i + 0.5) / kGrid, (j + 0.5) / kGrid};
        if (!leaf.box.contains(p)) continue;
        ++in;
        agree += half_split_truth(p[0], boundary) == leaf.label;
      }
    }
    const double purity = in ? static_cast<double>(agree) / static_cast<double>(in) : 1.0;
    a.worst_purity = std::min(a.worst_purity, purity);
    if (purity < params.epsilon) ++a.impure_settled;
  }
  return a;
}

}  // namespace wai::testing
