#include "mblab/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include <boost/functional/hash.hpp>

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"

namespace mblab {

std::size_t default_solver_budget() {
  if (const char* env = std::getenv("MBLAB_BUDGET"); env != nullptr && *env != '\0') {
    try {
      return parse_uint(env, "MBLAB_BUDGET");
    } catch (const ParseError&) {
      throw ConfigError(std::string("MBLAB_BUDGET must be a nonnegative integer, got '") + env + "'");
    }
  }
  return 4'000'000;
}

std::size_t ExactSolver::LiesHash::operator()(const Lies& l) const {
  return boost::hash_range(l.begin(), l.end());
}

ExactSolver::ExactSolver(const ExplicitFamily& family, const FeedbackModel& model,
                         std::size_t budget)
    : family_(family), model_(model), budget_(budget), inner_memo_(model.r() + 1) {
  if (model.kind() == FeedbackModel::Kind::AgnosticBandit && model.eta() > 250) {
    throw CapacityError("lie budgets above 250 are not supported by the exact solver");
  }
}

void ExactSolver::count_state() {
  if (++explored_ > budget_) {
    throw CapacityError("exact solver exceeded its budget of " + std::to_string(budget_) + " states");
  }
}

std::uint32_t ExactSolver::value() {
  if (model_.kind() == FeedbackModel::Kind::AgnosticBandit) {
    return static_cast<std::uint32_t>(std::max(0, solve_lies(Lies(family_.size(), 0))));
  }
  return static_cast<std::uint32_t>(solve(family_.all_members()));
}

std::uint32_t ExactSolver::value(const VersionSpace& v) {
  if (model_.kind() == FeedbackModel::Kind::AgnosticBandit) {
    return static_cast<std::uint32_t>(std::max(0, solve_lies(lies_of(v))));
  }
  return static_cast<std::uint32_t>(solve(v.members()));
}

// ---------------------------------------------------------------------------
// Value recursion

int ExactSolver::solve(const Bitset& v) {
  if (v.count() <= 1) return 0;
  if (auto it = memo_.find(v); it != memo_.end()) return it->second;
  count_state();
  // Every mistake removes at least one function, so |V| - 1 is an upper bound.
  const int ceiling = static_cast<int>(v.count()) - 1;
  int best = 0;
  if (model_.kind() == FeedbackModel::Kind::Ambiguous) {
    best = std::max(0, inner(v, 0, v));
  } else {
    for (InputId x = 0; x < family_.num_inputs() && best < ceiling; ++x) {
      best = std::max(best, input_value(v, x));
    }
  }
  memo_.emplace(v, best);
  return best;
}

int ExactSolver::input_value(const Bitset& v, InputId x) {
  int worst = kStall;
  bool first = true;
  std::size_t realized = 0;
  for (const auto& c : family_.classes(x)) realized += c.members.intersects(v) ? 1 : 0;
  if (realized < 2) return kStall;  // unanimous input: cannot force anything
  for (const auto& c : family_.classes(x)) {
    if (!c.members.intersects(v)) continue;
    const int g = guess_value(v, x, c.value);
    worst = first ? g : std::min(worst, g);
    first = false;
  }
  return worst;
}

int ExactSolver::guess_value(const Bitset& v, InputId x, Value y) {
  const Bitset hit = v & family_.members_with(x, y);
  if (model_.kind() == FeedbackModel::Kind::Standard) {
    int best = hit.any() ? solve(hit) : kStall;
    for (const auto& c : family_.classes(x)) {
      if (c.value == y) continue;
      const Bitset part = v & c.members;
      if (part.any()) best = std::max(best, 1 + solve(part));
    }
    return best;
  }
  // Bandit
  const Bitset miss = v - hit;
  int best = kStall;
  if (hit.any()) best = std::max(best, solve(hit));
  if (miss.any()) best = std::max(best, 1 + solve(miss));
  return best;
}

int ExactSolver::inner(const Bitset& v, std::size_t position, const Bitset& agree) {
  if (position == model_.r()) {
    const Bitset no = v - agree;
    if (no.none()) return kStall;  // YES is forced and nothing is learned
    return std::max(agree.any() ? solve(agree) : kStall, 1 + solve(no));
  }
  auto& memo = inner_memo_[position];
  Bitset key(2 * v.size());
  for_each_member(v, [&](std::size_t i) { key.set(i); });
  for_each_member(agree, [&](std::size_t i) { key.set(v.size() + i); });
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  count_state();
  int best = kStall;
  for (InputId x = 0; x < family_.num_inputs(); ++x) {
    int worst = 0;
    bool first = true;
    for (const auto& c : family_.classes(x)) {
      const Bitset next = agree & c.members;
      if (next.none()) continue;
      const int g = inner(v, position + 1, next);
      worst = first ? g : std::min(worst, g);
      first = false;
    }
    if (!first) best = std::max(best, worst);
  }
  memo.emplace(std::move(key), best);
  return best;
}

// ---------------------------------------------------------------------------
// Agnostic recursion

ExactSolver::Lies ExactSolver::lies_of(const VersionSpace& v) const {
  Lies out(family_.size(), static_cast<std::uint8_t>(model_.eta() + 1));
  if (!v.agnostic()) {
    for_each_member(v.members(), [&](std::size_t f) { out[f] = 0; });
    return out;
  }
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f] = static_cast<std::uint8_t>(std::min<std::uint32_t>(v.lie_counts()[f], model_.eta() + 1));
  }
  return out;
}

Bitset ExactSolver::members_of(const Lies& lies) const {
  Bitset out(lies.size());
  for (std::size_t f = 0; f < lies.size(); ++f) out[f] = lies[f] <= model_.eta();
  return out;
}

std::optional<ExactSolver::Lies> ExactSolver::after(const Lies& lies, InputId x, Value y,
                                                    bool yes) const {
  Lies out = lies;
  bool alive = false;
  for (std::size_t f = 0; f < out.size(); ++f) {
    if (out[f] > model_.eta()) continue;
    const bool agrees = family_.output(static_cast<FunctionId>(f), x) == y;
    if (agrees != yes) ++out[f];
    alive = alive || out[f] <= model_.eta();
  }
  if (!alive) return std::nullopt;
  return out;
}

int ExactSolver::solve_lies(const Lies& lies) {
  if (auto it = lie_memo_.find(lies); it != lie_memo_.end()) return it->second;
  count_state();
  int best = 0;
  for (InputId x = 0; x < family_.num_inputs(); ++x) best = std::max(best, input_value_lies(lies, x));
  lie_memo_.emplace(lies, best);
  return best;
}

int ExactSolver::input_value_lies(const Lies& lies, InputId x) {
  const Bitset alive = members_of(lies);
  int worst = kStall;
  bool first = true;
  for (const auto& c : family_.classes(x)) {
    if (!c.members.intersects(alive)) continue;
    const int g = guess_value_lies(lies, x, c.value);
    worst = first ? g : std::min(worst, g);
    first = false;
  }
  return worst;
}

int ExactSolver::guess_value_lies(const Lies& lies, InputId x, Value y) {
  int best = kStall;
  if (auto yes = after(lies, x, y, true); yes && *yes != lies) best = std::max(best, solve_lies(*yes));
  // A NO always charges the members predicting y, so it always makes progress.
  if (auto no = after(lies, x, y, false)) best = std::max(best, 1 + solve_lies(*no));
  return best;
}

// ---------------------------------------------------------------------------
// Policies

Bitset ExactSolver::agreeing(const Bitset& v, std::span<const InputId> inputs,
                             std::span<const Value> guesses) const {
  Bitset out = v;
  for (std::size_t j = 0; j < guesses.size(); ++j) out &= family_.members_with(inputs[j], guesses[j]);
  return out;
}

std::optional<InputId> ExactSolver::best_input(const VersionSpace& v,
                                               std::span<const InputId> inputs,
                                               std::span<const Value> guesses) {
  const std::size_t position = guesses.size();
  if (model_.kind() == FeedbackModel::Kind::AgnosticBandit) {
    const Lies lies = lies_of(v);
    int best = 0;
    std::optional<InputId> choice;
    for (InputId x = 0; x < family_.num_inputs(); ++x) {
      const int val = input_value_lies(lies, x);
      if (val > best) best = val, choice = x;
    }
    return choice;
  }
  if (model_.kind() != FeedbackModel::Kind::Ambiguous) {
    int best = 0;
    std::optional<InputId> choice;
    for (InputId x = 0; x < family_.num_inputs(); ++x) {
      const int val = input_value(v.members(), x);
      if (val > best) best = val, choice = x;
    }
    return choice;
  }
  const Bitset agree = agreeing(v.members(), inputs, guesses);
  if (position == 0 && solve(v.members()) == 0) return std::nullopt;
  int best = kStall;
  std::optional<InputId> choice;
  for (InputId x = 0; x < family_.num_inputs(); ++x) {
    int worst = 0;
    bool first = true;
    for (const auto& c : family_.classes(x)) {
      const Bitset next = agree & c.members;
      if (next.none()) continue;
      const int g = inner(v.members(), position + 1, next);
      worst = first ? g : std::min(worst, g);
      first = false;
    }
    if (!first && (!choice || worst > best)) best = worst, choice = x;
  }
  return choice;
}

Value ExactSolver::best_guess(const VersionSpace& v, std::span<const InputId> inputs,
                              std::span<const Value> guesses) {
  const InputId x = inputs.back();
  std::optional<Value> choice;
  int best = 0;
  auto consider = [&](Value y, int val) {
    if (!choice || val < best) best = val, choice = y;
  };
  if (model_.kind() == FeedbackModel::Kind::AgnosticBandit) {
    const Lies lies = lies_of(v);
    const Bitset alive = members_of(lies);
    for (const auto& c : family_.classes(x)) {
      if (c.members.intersects(alive)) consider(c.value, guess_value_lies(lies, x, c.value));
    }
  } else if (model_.kind() == FeedbackModel::Kind::Ambiguous) {
    const Bitset agree = agreeing(v.members(), inputs.first(guesses.size()), guesses);
    for (const auto& c : family_.classes(x)) {
      const Bitset next = agree & c.members;
      if (next.any()) consider(c.value, inner(v.members(), guesses.size() + 1, next));
    }
  } else {
    for (const auto& c : family_.classes(x)) {
      if (c.members.intersects(v.members())) consider(c.value, guess_value(v.members(), x, c.value));
    }
  }
  return choice.value_or(0);
}

Feedback ExactSolver::best_feedback(const VersionSpace& v, std::span<const InputId> inputs,
                                    std::span<const Value> guesses) {
  const InputId x = inputs.front();
  const Value y = guesses.front();
  switch (model_.kind()) {
    case FeedbackModel::Kind::Standard: {
      std::optional<Value> choice;
      int best = kStall;
      for (const auto& c : family_.classes(x)) {
        const Bitset part = v.members() & c.members;
        if (part.none()) continue;
        const int val = (c.value != y ? 1 : 0) + solve(part);
        // Ties go to a mistake now rather than later.
        if (!choice || val > best || (val == best && *choice == y)) best = val, choice = c.value;
      }
      return Feedback::reveal(choice.value_or(y));
    }
    case FeedbackModel::Kind::AgnosticBandit: {
      const Lies lies = lies_of(v);
      const auto yes = after(lies, x, y, true);
      const auto no = after(lies, x, y, false);
      const int yes_val = yes && *yes != lies ? solve_lies(*yes) : kStall;
      const int no_val = no ? 1 + solve_lies(*no) : kStall;
      if (!no) return Feedback::yes();
      return no_val >= yes_val ? Feedback::no() : Feedback::yes();
    }
    default: {
      const Bitset agree = agreeing(v.members(), inputs, guesses);
      const Bitset miss = v.members() - agree;
      if (miss.none()) return Feedback::yes();
      if (agree.none()) return Feedback::no();
      return 1 + solve(miss) >= solve(agree) ? Feedback::no() : Feedback::yes();
    }
  }
}

std::uint32_t opt_exact(const ExplicitFamily& family, const FeedbackModel& model,
                        std::optional<std::size_t> budget) {
  ExactSolver solver(family, model, budget.value_or(default_solver_budget()));
  return solver.value();
}

}  // namespace mblab
