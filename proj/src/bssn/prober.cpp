#include "wai/bssn/prober.hpp"

#include <stdexcept>

namespace wai {

std::string_view to_string(ProbeKind k) {
  switch (k) {
    case ProbeKind::Round: return "round";
    case ProbeKind::Partition: return "partition";
    case ProbeKind::Confidence: return "confidence";
    case ProbeKind::Inversion: return "inversion";
  }
  return "?";
}

Prober::Prober(Sut& sut, const ConstraintSystem& checker) : sut_(sut), checker_(checker) {
  if (!(sut.action_space() == checker.space()))
    throw std::invalid_argument("prober: SUT action space differs from the constraint system's space");
}

Sample Prober::probe(const Assignment& x, ProbeKind kind) {
  ++counts_[static_cast<std::size_t>(kind)];
  Sample s;
  s.x.assign(x.values().begin(), x.values().end());
  const auto r = sut_.probe(x);
  if (!r.ok()) {
    // Unknown behaviour is treated as the worst case.
    s.fault = true;
    s.category = Category::HPrime;
  } else {
    const auto c = classify(checker_, *r.action);
    s.v.assign(r.action->values().begin(), r.action->values().end());
    s.category = c.category;
    s.psi = c.psi;
  }
  if (sink_) sink_(t_, kind, s);
  return s;
}

Sample Prober::probe(std::span<const double> x, ProbeKind kind) {
  return probe(Assignment(sut_.input_space_ptr(), std::vector<double>(x.begin(), x.end())), kind);
}

std::uint64_t Prober::total() const {
  std::uint64_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

}  // namespace wai
