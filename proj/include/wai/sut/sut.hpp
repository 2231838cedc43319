#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "wai/constraint/variable_space.hpp"

namespace wai {

/// What the SUT produced for one input: an action, or a fault description.
struct SutResponse {
  std::optional<Assignment> action;
  std::string fault;

  [[nodiscard]] bool ok() const { return action.has_value(); }
};

/// Opaque system under test. Callers see the declared spaces, the what-if
/// probe channel and the live proposal channel; internal state stays behind
/// `respond`. A handle is single-owner and not thread-safe.
class Sut {
 public:
  Sut(SpacePtr input_space, SpacePtr action_space);
  virtual ~Sut() = default;
  Sut(const Sut&) = delete;
  Sut& operator=(const Sut&) = delete;

  [[nodiscard]] const VariableSpace& input_space() const { return *input_; }
  [[nodiscard]] const VariableSpace& action_space() const { return *action_; }
  [[nodiscard]] const SpacePtr& input_space_ptr() const { return input_; }
  [[nodiscard]] const SpacePtr& action_space_ptr() const { return action_; }

  [[nodiscard]] bool what_if_enabled() const { return what_if_; }
  void set_what_if(bool enabled) { what_if_ = enabled; }

  /// What-if query: the action is returned for inspection and never actuated.
  /// Probes are interactions with a live system and may advance hidden state.
  /// Throws std::logic_error when what-if mode is off.
  SutResponse probe(const Assignment& x);

  /// Live decision destined for the output gate.
  SutResponse propose(const Assignment& x);

  /// Round clock, advanced by the campaign before each round.
  void begin_round(int t);
  [[nodiscard]] int round() const { return round_; }

  [[nodiscard]] std::uint64_t probe_count() const { return probes_; }
  [[nodiscard]] std::uint64_t proposal_count() const { return proposals_; }
  [[nodiscard]] std::uint64_t interactions() const { return probes_ + proposals_; }

 protected:
  /// `interaction` is the 1-based index of this call among all probes and proposals.
  virtual SutResponse respond(const Assignment& x, std::uint64_t interaction) = 0;
  virtual void on_round(int /*t*/) {}

 private:
  SutResponse checked(SutResponse r) const;
  void require_input(const Assignment& x) const;

  SpacePtr input_;
  SpacePtr action_;
  bool what_if_ = true;
  int round_ = 0;
  std::uint64_t probes_ = 0;
  std::uint64_t proposals_ = 0;
};

}  // namespace wai
