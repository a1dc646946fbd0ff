#include "mblab/version_space.hpp"

#include "mblab/errors.hpp"

namespace mblab {

VersionSpace VersionSpace::full(const ExplicitFamily& family) {
  return from_members(family.all_members());
}

VersionSpace VersionSpace::full_agnostic(const ExplicitFamily& family, std::uint32_t eta) {
  VersionSpace v = full(family);
  v.agnostic_ = true;
  v.eta_ = eta;
  v.lies_.assign(family.size(), 0);
  return v;
}

VersionSpace VersionSpace::from_members(Bitset members) {
  VersionSpace v;
  v.members_ = std::move(members);
  return v;
}

Bitset agreeing_rows(const ExplicitFamily& family, std::span<const InputId> inputs,
                     std::span<const Value> guesses) {
  if (inputs.size() != guesses.size()) throw StructuralError("inputs and guesses differ in length");
  Bitset rows = family.all_members();
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j] >= family.num_inputs()) throw StructuralError("input index out of range");
    rows &= family.members_with(inputs[j], guesses[j]);
  }
  return rows;
}

Bitset consistent_rows(const ExplicitFamily& family, std::span<const InputId> inputs,
                       std::span<const Value> guesses, Feedback feedback) {
  switch (feedback.kind) {
    case Feedback::Kind::Value:
      if (inputs.size() != 1) throw StructuralError("a revealed value covers exactly one input");
      if (inputs[0] >= family.num_inputs()) throw StructuralError("input index out of range");
      return family.members_with(inputs[0], feedback.value);
    case Feedback::Kind::Yes:
      return agreeing_rows(family, inputs, guesses);
    case Feedback::Kind::No:
      return ~agreeing_rows(family, inputs, guesses);
  }
  throw StructuralError("unknown feedback kind");
}

VersionSpace vs_restrict_unchecked(const VersionSpace& v, const ExplicitFamily& family,
                                   std::span<const InputId> inputs,
                                   std::span<const Value> guesses, Feedback feedback) {
  const Bitset ok = consistent_rows(family, inputs, guesses, feedback);
  VersionSpace out = v;
  if (!v.agnostic_) {
    out.members_ &= ok;
    return out;
  }
  for (FunctionId f = 0; f < family.size(); ++f) {
    if (!ok.test(f) && out.lies_[f] <= out.eta_) ++out.lies_[f];
    out.members_[f] = out.lies_[f] <= out.eta_;
  }
  return out;
}

VersionSpace vs_restrict(const VersionSpace& v, const ExplicitFamily& family,
                         std::span<const InputId> inputs, std::span<const Value> guesses,
                         Feedback feedback) {
  if (v.empty()) throw PreconditionError("vs_restrict on an empty version space");
  auto out = vs_restrict_unchecked(v, family, inputs, guesses, feedback);
  if (out.empty()) {
    throw InconsistencyError(v.agnostic_ ? "feedback exceeds every function's lie budget"
                                         : "feedback contradicts every remaining function");
  }
  return out;
}

std::vector<Value> realized_values(const Bitset& members, const ExplicitFamily& family, InputId x) {
  std::vector<Value> out;
  for (const auto& c : family.classes(x)) {
    if (c.members.intersects(members)) out.push_back(c.value);
  }
  return out;
}

// ---------------------------------------------------------------------------

ComposedVersionSpace::ComposedVersionSpace(const Family::Composition& composition)
    : comp_(&composition) {}

Value ComposedVersionSpace::evaluate(const std::vector<FunctionId>& tuple, InputId x) const {
  std::uint32_t packed = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) packed |= comp_->parts[i]->output(tuple[i], x) << i;
  return comp_->g(packed);
}

std::optional<std::vector<FunctionId>> ComposedVersionSpace::witness(
    std::span<const std::pair<InputId, Value>> extra) const {
  std::vector<std::pair<InputId, Value>> facts = facts_;
  facts.insert(facts.end(), extra.begin(), extra.end());
  const std::size_t k = comp_->parts.size();

  // possible[j] bit c set means part c can output both/any value at fact j's input;
  // fixed bits are collected separately.
  struct FactInfo {
    InputId x;
    Value v;
    std::uint32_t can0 = 0;
    std::uint32_t can1 = 0;
  };
  std::vector<FactInfo> info;
  for (auto [x, v] : facts) {
    FactInfo fi{x, v};
    for (std::size_t c = 0; c < k; ++c) {
      for (const auto& cls : comp_->parts[c]->classes(x)) {
        (cls.value ? fi.can1 : fi.can0) |= 1u << c;
      }
    }
    info.push_back(fi);
  }

  std::vector<FunctionId> tuple(k);
  std::vector<std::uint32_t> packed(info.size(), 0);

  auto completable = [&](std::size_t depth) {
    const std::uint32_t free_mask = ((1u << k) - 1) & ~((1u << depth) - 1);
    for (std::size_t j = 0; j < info.size(); ++j) {
      const auto& fi = info[j];
      const std::uint32_t forced_one = free_mask & fi.can1 & ~fi.can0;
      const std::uint32_t open = free_mask & fi.can1 & fi.can0;
      bool ok = false;
      // Enumerate assignments of the open coordinates.
      for (std::uint32_t sub = open;; sub = (sub - 1) & open) {
        if (comp_->g(packed[j] | forced_one | sub) == fi.v) {
          ok = true;
          break;
        }
        if (sub == 0) break;
      }
      if (!ok) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (!completable(depth)) return false;
    if (depth == k) return true;
    const auto& part = *comp_->parts[depth];
    for (FunctionId f = 0; f < part.size(); ++f) {
      tuple[depth] = f;
      for (std::size_t j = 0; j < info.size(); ++j) packed[j] |= part.output(f, info[j].x) << depth;
      if (self(self, depth + 1)) return true;
      for (std::size_t j = 0; j < info.size(); ++j) packed[j] &= ~(1u << depth);
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return tuple;
}

bool ComposedVersionSpace::feasible_with(InputId x, Value v) const {
  const std::pair<InputId, Value> extra[] = {{x, v}};
  return witness(extra).has_value();
}

std::vector<Value> ComposedVersionSpace::realized(InputId x) const {
  std::vector<Value> out;
  for (Value v = 0; v < 2; ++v) {
    if (feasible_with(x, v)) out.push_back(v);
  }
  return out;
}

}  // namespace mblab
