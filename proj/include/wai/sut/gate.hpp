#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wai/constraint/checker.hpp"
#include "wai/sut/sut.hpp"

namespace wai {

enum class Verdict { Released, Blocked };

std::string_view to_string(Verdict v);

struct GateEvent {
  int t = 0;
  std::vector<double> input;
  std::optional<std::vector<double>> action;  // absent when the SUT faulted
  ActionClassification classification;
  Verdict verdict = Verdict::Blocked;
  std::string reason;
};

/// Output gate of one SUT handle. Once closed it stays closed.
class GateState {
 public:
  explicit GateState(bool block_soft = false) : block_soft_(block_soft) {}

  [[nodiscard]] bool open() const { return open_; }
  [[nodiscard]] bool block_soft() const { return block_soft_; }
  [[nodiscard]] const std::vector<GateEvent>& log() const { return log_; }
  [[nodiscard]] std::uint64_t released() const { return released_; }
  [[nodiscard]] std::uint64_t blocked() const { return blocked_; }
  /// Wall-clock nanoseconds spent classifying on the gate path.
  [[nodiscard]] std::uint64_t latency_ns() const { return latency_ns_; }

 private:
  friend struct GateAccess;

  bool open_ = true;
  bool block_soft_ = false;
  std::vector<GateEvent> log_;
  std::uint64_t released_ = 0;
  std::uint64_t blocked_ = 0;
  std::uint64_t latency_ns_ = 0;
};

struct GateOutcome {
  Verdict verdict = Verdict::Blocked;
  std::optional<Assignment> action;  // set only when released
  std::size_t event = 0;             // index into the gate log
};

/// Live actuation through the gate: H' and faults are blocked, HS released,
/// HS' released unless the gate blocks soft violations, everything blocked
/// once the gate is closed. Only the checker is consulted.
GateOutcome act(Sut& sut, const Assignment& x, GateState& gate, const ConstraintSystem& checker, int t);

/// Closes the output gate permanently. Idempotent.
GateState& shutdown(Sut& sut, GateState& gate);

}  // namespace wai
