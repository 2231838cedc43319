#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "wai/bssn/types.hpp"
#include "wai/constraint/checker.hpp"
#include "wai/sut/sut.hpp"

namespace wai {

enum class ProbeKind { Round = 0, Partition = 1, Confidence = 2, Inversion = 3 };
inline constexpr std::size_t kProbeKindCount = 4;

std::string_view to_string(ProbeKind k);

/// Receives every probe as it happens: round index, purpose, outcome.
using ProbeSink = std::function<void(int, ProbeKind, const Sample&)>;

/// Metered what-if access to one SUT handle. Every SUT evaluation made by
/// the operators goes through here, so the per-kind counters are the full
/// account of SUT use.
class Prober {
 public:
  /// Throws std::invalid_argument when the SUT's action space is not the checker's space.
  Prober(Sut& sut, const ConstraintSystem& checker);

  Sample probe(const Assignment& x, ProbeKind kind);
  /// `x` must already be admissible in the input space.
  Sample probe(std::span<const double> x, ProbeKind kind);

  [[nodiscard]] std::uint64_t count(ProbeKind k) const { return counts_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] std::uint64_t total() const;

  /// Streams every subsequent probe to `sink` (an empty function stops tracing).
  void set_sink(ProbeSink sink) { sink_ = std::move(sink); }
  void set_round(int t) { t_ = t; }

  [[nodiscard]] Sut& sut() { return sut_; }
  [[nodiscard]] const ConstraintSystem& checker() const { return checker_; }
  [[nodiscard]] const SpacePtr& input_space() const { return sut_.input_space_ptr(); }

 private:
  Sut& sut_;
  const ConstraintSystem& checker_;
  std::array<std::uint64_t, kProbeKindCount> counts_{};
  ProbeSink sink_;
  int t_ = 0;
};

}  // namespace wai
