#include "wai/sut/sut.hpp"

#include <stdexcept>

namespace wai {

Sut::Sut(SpacePtr input_space, SpacePtr action_space)
    : input_(std::move(input_space)), action_(std::move(action_space)) {
  if (!input_ || !action_) throw std::invalid_argument("SUT needs input and action spaces");
}

SutResponse Sut::probe(const Assignment& x) {
  if (!what_if_) throw std::logic_error("what-if probing is disabled on this SUT");
  require_input(x);
  ++probes_;
  return checked(respond(x, interactions()));
}

SutResponse Sut::propose(const Assignment& x) {
  require_input(x);
  ++proposals_;
  return checked(respond(x, interactions()));
}

void Sut::require_input(const Assignment& x) const {
  if (x.size() != input_->size()) throw std::invalid_argument("input arity differs from the SUT input space");
}

void Sut::begin_round(int t) {
  round_ = t;
  on_round(t);
}

// A SUT may misbehave semantically but never structurally: anything that is
// not an action over the declared space is reported as a fault.
SutResponse Sut::checked(SutResponse r) const {
  if (r.action && !(r.action->space_ptr() == action_ || r.action->space() == *action_)) {
    return {std::nullopt, "action outside the declared action space"};
  }
  if (!r.action && r.fault.empty()) r.fault = "no action produced";
  return r;
}

}  // namespace wai
