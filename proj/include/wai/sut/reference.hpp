#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wai/geometry.hpp"
#include "wai/sut/sut.hpp"

namespace wai {

enum class SutKind { Linear, PiecewiseRugged, Stateful, Learning };

std::string_view to_string(SutKind k);
std::optional<SutKind> sut_kind_from_string(std::string_view s);

/// Input box mapped affinely onto an output box.
struct SutCell {
  Box input;
  Box output;
};

struct SutSpec {
  SutKind kind = SutKind::Linear;
  Box input_box;
  /// Declared action space; defaults to the image bounds of the map.
  std::optional<Box> action_box;

  // linear and stateful: v = A x + b
  std::vector<std::vector<double>> A;
  std::vector<double> b;

  // piecewise_rugged
  std::vector<SutCell> cells;

  // stateful: v += coupling * (mean of the last `memory_depth` inputs - box centre), per matching dimension
  std::size_t memory_depth = 1;
  double coupling = 0.5;

  // learning: `pre` answers interactions 1..K, `post` from K+1 on. With
  // `trigger_round` set the switch happens instead when round trigger_round begins.
  std::shared_ptr<const SutSpec> pre;
  std::shared_ptr<const SutSpec> post;
  std::uint64_t trigger_interactions = 0;
  std::optional<int> trigger_round;

  /// Probability that an interaction returns a fault instead of an action.
  double fault_rate = 0.0;
  std::uint64_t seed = 0;

  /// Variable names; default x0.. and v0..
  std::vector<std::string> input_names;
  std::vector<std::string> action_names;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
  [[nodiscard]] std::size_t input_dim() const { return input_box.dim(); }
  [[nodiscard]] std::size_t action_dim() const;
  /// Declared action box, or the image bounds when none was given.
  [[nodiscard]] Box resolved_action_box() const;
};

/// Deterministic handle for a reference SUT: identical (spec, interaction
/// sequence) gives identical outputs. Outputs are clamped to the action box.
std::unique_ptr<Sut> make_reference_sut(const SutSpec& spec);

/// `count` cells tiling `input` in equal strips along dimension 0, each mapped
/// onto a random sub-box of `action` (side lengths between 10% and 40% of the span).
std::vector<SutCell> generate_rugged_cells(const Box& input, const Box& action, std::size_t count, std::uint64_t seed);

/// Affine image of x under a cell; x need not lie in the cell.
std::vector<double> map_through_cell(const SutCell& cell, std::span<const double> x);

/// First cell containing x, else the nearest one.
std::size_t locate_cell(const std::vector<SutCell>& cells, std::span<const double> x);

}  // namespace wai
