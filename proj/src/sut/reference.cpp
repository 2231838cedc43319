#include "wai/sut/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "wai/random.hpp"

namespace wai {

std::string_view to_string(SutKind k) {
  switch (k) {
    case SutKind::Linear: return "linear";
    case SutKind::PiecewiseRugged: return "piecewise_rugged";
    case SutKind::Stateful: return "stateful";
    case SutKind::Learning: return "learning";
  }
  return "?";
}

std::optional<SutKind> sut_kind_from_string(std::string_view s) {
  if (s == "linear") return SutKind::Linear;
  if (s == "piecewise_rugged") return SutKind::PiecewiseRugged;
  if (s == "stateful") return SutKind::Stateful;
  if (s == "learning") return SutKind::Learning;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("SUT spec: " + what); }

void check_box(const Box& b, const char* what) {
  if (b.dim() == 0) bad(fmt::format("{} has no dimensions", what));
  for (const auto& iv : b.intervals())
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) bad(fmt::format("{} is malformed", what));
}

Box linear_image(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const Box& in) {
  std::vector<Interval> out;
  for (std::size_t r = 0; r < A.size(); ++r) {
    double lo = b[r], hi = b[r];
    for (std::size_t c = 0; c < A[r].size(); ++c) {
      const double p = A[r][c] * in[c].lo, q = A[r][c] * in[c].hi;
      lo += std::min(p, q);
      hi += std::max(p, q);
    }
    out.push_back({lo, hi});
  }
  return Box(std::move(out));
}

}  // namespace

std::size_t SutSpec::action_dim() const {
  switch (kind) {
    case SutKind::Linear: return b.size();
    case SutKind::PiecewiseRugged: return cells.empty() ? 0 : cells.front().output.dim();
    case SutKind::Stateful: return !A.empty() ? b.size() : (cells.empty() ? 0 : cells.front().output.dim());
    case SutKind::Learning: return pre ? pre->action_dim() : 0;
  }
  return 0;
}

void SutSpec::validate() const {
  check_box(input_box, "input box");
  if (!(fault_rate >= 0.0 && fault_rate <= 1.0)) bad("fault_rate must lie in [0, 1]");
  const std::size_t in = input_dim();
  auto check_linear = [&] {
    if (A.size() != b.size() || A.empty()) bad("A and b must have the same, non-zero number of rows");
    for (const auto& row : A) {
      if (row.size() != in) bad(fmt::format("A rows need {} columns", in));
      for (double v : row)
        if (!std::isfinite(v)) bad("A has a non-finite entry");
    }
    for (double v : b)
      if (!std::isfinite(v)) bad("b has a non-finite entry");
  };
  auto check_cells = [&] {
    if (cells.empty()) bad("piecewise map without cells");
    for (const auto& c : cells) {
      check_box(c.input, "cell input box");
      check_box(c.output, "cell output box");
      if (c.input.dim() != in) bad("cell input box dimension differs from the input box");
      if (c.output.dim() != cells.front().output.dim()) bad("cell output boxes differ in dimension");
    }
  };
  switch (kind) {
    case SutKind::Linear: check_linear(); break;
    case SutKind::PiecewiseRugged: check_cells(); break;
    case SutKind::Stateful:
      if (memory_depth == 0) bad("memory_depth must be >= 1");
      if (!std::isfinite(coupling)) bad("coupling must be finite");
      if (!A.empty() || !b.empty()) check_linear();
      else check_cells();
      break;
    case SutKind::Learning:
      if (!pre || !post) bad("learning SUT needs pre and post maps");
      if (pre->kind == SutKind::Learning || post->kind == SutKind::Learning) bad("learning maps cannot nest");
      pre->validate();
      post->validate();
      if (pre->input_dim() != in || post->input_dim() != in) bad("pre/post maps must share the input dimension");
      if (pre->action_dim() != post->action_dim()) bad("pre/post maps must share the action dimension");
      if (trigger_interactions == 0 && !trigger_round) bad("learning SUT needs trigger_interactions > 0 or trigger_round");
      break;
  }
  const std::size_t out = action_dim();
  if (action_box) {
    check_box(*action_box, "action box");
    if (action_box->dim() != out) bad("action box dimension differs from the map's output");
  }
  if (!input_names.empty() && input_names.size() != in) bad("input_names size differs from the input dimension");
  if (!action_names.empty() && action_names.size() != out) bad("action_names size differs from the action dimension");
}

Box SutSpec::resolved_action_box() const {
  if (action_box) return *action_box;
  switch (kind) {
    case SutKind::Linear: return linear_image(A, b, input_box);
    case SutKind::PiecewiseRugged: {
      Box h = cells.front().output;
      for (const auto& c : cells) h = h.hull(c.output);
      return h;
    }
    case SutKind::Stateful: {
      Box h;
      if (!A.empty()) {
        h = linear_image(A, b, input_box);
      } else {
        h = cells.front().output;
        for (const auto& c : cells) h = h.hull(c.output);
      }
      for (std::size_t d = 0; d < h.dim() && d < input_box.dim(); ++d) {
        const double reach = std::fabs(coupling) * 0.5 * input_box[d].width();
        h[d].lo -= reach;
        h[d].hi += reach;
      }
      return h;
    }
    case SutKind::Learning: return pre->resolved_action_box().hull(post->resolved_action_box());
  }
  return {};
}

std::vector<SutCell> generate_rugged_cells(const Box& input, const Box& action, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("generate_rugged_cells: count must be positive");
  std::vector<SutCell> cells;
  const double w = input[0].width() / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    Box in = input;
    in[0] = {input[0].lo + w * static_cast<double>(i),
             i + 1 == count ? input[0].hi : input[0].lo + w * static_cast<double>(i + 1)};
    Rng rng(derive_seed(seed, {i}));
    std::vector<Interval> out;
    for (const auto& iv : action.intervals()) {
      const double side = iv.width() * rng.uniform(0.1, 0.4);
      const double lo = iv.lo + rng.uniform() * (iv.width() - side);
      out.push_back({lo, lo + side});
    }
    cells.push_back({std::move(in), Box(std::move(out))});
  }
  return cells;
}

std::vector<double> map_through_cell(const SutCell& cell, std::span<const double> x) {
  const std::size_t in = cell.input.dim();
  std::vector<double> v(cell.output.dim());
  for (std::size_t d = 0; d < v.size(); ++d) {
    const auto& src = cell.input[d % in];
    const double t = src.width() > 0.0 ? std::clamp((x[d % in] - src.lo) / src.width(), 0.0, 1.0) : 0.5;
    v[d] = cell.output[d].lo + t * cell.output[d].width();
  }
  return v;
}

std::size_t locate_cell(const std::vector<SutCell>& cells, std::span<const double> x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double d = cells[i].input.distance(x);
    if (d == 0.0) return i;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace {

class Mapper {
 public:
  virtual ~Mapper() = default;
  virtual std::vector<double> map(std::span<const double> x) = 0;
};

class LinearMapper final : public Mapper {
 public:
  LinearMapper(std::vector<std::vector<double>> A, std::vector<double> b) : A_(std::move(A)), b_(std::move(b)) {}
  std::vector<double> map(std::span<const double> x) override {
    std::vector<double> v(b_);
    for (std::size_t r = 0; r < A_.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) v[r] += A_[r][c] * x[c];
    return v;
  }

 private:
  std::vector<std::vector<double>> A_;
  std::vector<double> b_;
};

class CellMapper final : public Mapper {
 public:
  explicit CellMapper(std::vector<SutCell> cells) : cells_(std::move(cells)) {}
  std::vector<double> map(std::span<const double> x) override {
    return map_through_cell(cells_[locate_cell(cells_, x)], x);
  }

 private:
  std::vector<SutCell> cells_;
};

// Output drifts with the recent input history, so equal inputs can give
// different actions.
class StatefulMapper final : public Mapper {
 public:
  StatefulMapper(std::unique_ptr<Mapper> base, std::size_t depth, double coupling, std::vector<double> centre)
      : base_(std::move(base)), depth_(depth), coupling_(coupling), centre_(std::move(centre)) {}
  std::vector<double> map(std::span<const double> x) override {
    auto v = base_->map(x);
    if (!history_.empty()) {
      for (std::size_t d = 0; d < v.size() && d < x.size(); ++d) {
        double mean = 0.0;
        for (const auto& h : history_) mean += h[d];
        mean /= static_cast<double>(history_.size());
        v[d] += coupling_ * (mean - centre_[d]);
      }
    }
    history_.emplace_back(x.begin(), x.end());
    if (history_.size() > depth_) history_.pop_front();
    return v;
  }

 private:
  std::unique_ptr<Mapper> base_;
  std::size_t depth_;
  double coupling_;
  std::vector<double> centre_;
  std::deque<std::vector<double>> history_;
};

std::unique_ptr<Mapper> make_mapper(const SutSpec& s) {
  switch (s.kind) {
    case SutKind::Linear: return std::make_unique<LinearMapper>(s.A, s.b);
    case SutKind::PiecewiseRugged: return std::make_unique<CellMapper>(s.cells);
    case SutKind::Stateful: {
      std::unique_ptr<Mapper> base;
      if (!s.A.empty()) base = std::make_unique<LinearMapper>(s.A, s.b);
      else base = std::make_unique<CellMapper>(s.cells);
      return std::make_unique<StatefulMapper>(std::move(base), s.memory_depth, s.coupling, s.input_box.center());
    }
    case SutKind::Learning: break;
  }
  throw std::invalid_argument("SUT spec: no direct mapper for a learning SUT");
}

SpacePtr space_from_box(const Box& box, const std::vector<std::string>& names, char prefix) {
  std::vector<Variable> vars;
  for (std::size_t d = 0; d < box.dim(); ++d)
    vars.push_back(Variable::real(names.empty() ? fmt::format("{}{}", prefix, d) : names[d], box[d].lo, box[d].hi));
  return std::make_shared<const VariableSpace>(std::move(vars));
}

class ReferenceSut final : public Sut {
 public:
  explicit ReferenceSut(const SutSpec& spec)
      : Sut(space_from_box(spec.input_box, spec.input_names, 'x'),
            space_from_box(spec.resolved_action_box(), spec.action_names, 'v')),
        fault_rate_(spec.fault_rate),
        seed_(spec.seed) {
    if (spec.kind == SutKind::Learning) {
      current_ = make_mapper(*spec.pre);
      post_ = make_mapper(*spec.post);
      trigger_interactions_ = spec.trigger_interactions;
      trigger_round_ = spec.trigger_round;
    } else {
      current_ = make_mapper(spec);
    }
  }

 protected:
  SutResponse respond(const Assignment& x, std::uint64_t interaction) override {
    if (post_ && !trigger_round_ && interaction > trigger_interactions_) learn();
    if (fault_rate_ > 0.0) {
      const double u = static_cast<double>(mix64(seed_ ^ mix64(interaction)) >> 11) * 0x1.0p-53;
      if (u < fault_rate_) return {std::nullopt, fmt::format("internal fault at interaction {}", interaction)};
    }
    const auto v = current_->map(x.values());
    return {snap_to_space(action_space_ptr(), v), {}};
  }

  void on_round(int t) override {
    if (post_ && trigger_round_ && t >= *trigger_round_) learn();
  }

 private:
  void learn() { current_ = std::move(post_); }

  std::unique_ptr<Mapper> current_;
  std::unique_ptr<Mapper> post_;
  std::uint64_t trigger_interactions_ = 0;
  std::optional<int> trigger_round_;
  double fault_rate_;
  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<Sut> make_reference_sut(const SutSpec& spec) {
  spec.validate();
  return std::make_unique<ReferenceSut>(spec);
}

}  // namespace wai
