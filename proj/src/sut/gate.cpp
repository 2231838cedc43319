#include "wai/sut/gate.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wai {

std::string_view to_string(Verdict v) { return v == Verdict::Released ? "released" : "blocked"; }

struct GateAccess {
  static std::size_t record(GateState& g, GateEvent ev) {
    (ev.verdict == Verdict::Released ? g.released_ : g.blocked_) += 1;
    g.log_.push_back(std::move(ev));
    return g.log_.size() - 1;
  }
  static void add_latency(GateState& g, std::uint64_t ns) { g.latency_ns_ += ns; }
  static void close(GateState& g) { g.open_ = false; }
};

GateOutcome act(Sut& sut, const Assignment& x, GateState& gate, const ConstraintSystem& checker, int t) {
  if (checker.space().size() != sut.action_space().size())
    throw std::invalid_argument("checker and SUT action space differ in arity");
  GateEvent ev;
  ev.t = t;
  ev.input.assign(x.values().begin(), x.values().end());

  SutResponse proposal = sut.propose(x);
  if (!proposal.ok()) {
    ev.classification.category = Category::HPrime;
    ev.classification.v_hard = std::numeric_limits<double>::infinity();
    ev.classification.fault = proposal.fault;
    ev.verdict = Verdict::Blocked;
    ev.reason = fmt::format("sut fault: {}", proposal.fault);
    return {Verdict::Blocked, std::nullopt, GateAccess::record(gate, std::move(ev))};
  }

  const auto start = std::chrono::steady_clock::now();
  ev.classification = classify(checker, *proposal.action);
  GateAccess::add_latency(gate, static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                                               std::chrono::steady_clock::now() - start)
                                                               .count()));
  ev.action.emplace(proposal.action->values().begin(), proposal.action->values().end());

  const auto& c = ev.classification;
  if (!gate.open()) {
    ev.verdict = Verdict::Blocked;
    ev.reason = "gate closed";
  } else if (c.category == Category::HPrime) {
    ev.verdict = Verdict::Blocked;
    ev.reason = c.fault ? fmt::format("classification fault: {}", *c.fault) : "unpermissible";
  } else if (c.category == Category::HSPrime) {
    ev.verdict = gate.block_soft() ? Verdict::Blocked : Verdict::Released;
    ev.reason = fmt::format("inefficient (psi={})", c.psi);
  } else {
    ev.verdict = Verdict::Released;
  }
  const Verdict verdict = ev.verdict;
  const std::size_t index = GateAccess::record(gate, std::move(ev));
  if (verdict == Verdict::Released) return {verdict, std::move(proposal.action), index};
  return {verdict, std::nullopt, index};
}

GateState& shutdown(Sut& /*sut*/, GateState& gate) {
  GateAccess::close(gate);
  return gate;
}

}  // namespace wai
