#include "mblab/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mblab/errors.hpp"

namespace mblab {

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("Rng::below(0)");
  ++draws_;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

// ---------------------------------------------------------------------------

void check_round_shape(const Round& round, const FeedbackModel& model, std::uint32_t codomain,
                       std::size_t num_inputs) {
  if (round.inputs.size() != model.r() || round.guesses.size() != model.r()) {
    throw StructuralError("round carries " + std::to_string(round.inputs.size()) + " inputs and " +
                          std::to_string(round.guesses.size()) + " guesses, model needs " +
                          std::to_string(model.r()));
  }
  for (auto x : round.inputs) {
    if (x >= num_inputs) throw StructuralError("input index out of range");
  }
  for (auto y : round.guesses) {
    if (y >= codomain) throw StructuralError("guess outside the codomain");
  }
  const bool reveal = round.feedback.kind == Feedback::Kind::Value;
  if (reveal != (model.kind() == FeedbackModel::Kind::Standard)) {
    throw StructuralError(reveal ? "revealed value in a yes/no model"
                                 : "yes/no feedback in the standard model");
  }
  if (reveal && round.feedback.value >= codomain) {
    throw StructuralError("revealed value outside the codomain");
  }
}

VersionSpace referee_check(const VersionSpace& v, const ExplicitFamily& family,
                           const FeedbackModel& model, const Round& round) {
  check_round_shape(round, model, family.codomain(), family.num_inputs());
  return vs_restrict(v, family, round.inputs, round.guesses, round.feedback);
}

namespace {

class ExplicitReferee final : public Referee {
 public:
  ExplicitReferee(const ExplicitFamily& family, const FeedbackModel& model)
      : family_(family),
        model_(model),
        space_(model.kind() == FeedbackModel::Kind::AgnosticBandit
                   ? VersionSpace::full_agnostic(family, model.eta())
                   : VersionSpace::full(family)) {}

  bool legal(const Round& round) const override {
    try {
      check_round_shape(round, model_, family_.codomain(), family_.num_inputs());
    } catch (const StructuralError&) {
      return false;
    }
    return !vs_restrict_unchecked(space_, family_, round.inputs, round.guesses, round.feedback)
                .empty();
  }

  void apply(const Round& round) override { space_ = referee_check(space_, family_, model_, round); }

  std::vector<Value> realized(InputId x) const override {
    return realized_values(space_.members(), family_, x);
  }

  const VersionSpace* version_space() const override { return &space_; }

  std::string witness_description() const override {
    return "f" + std::to_string(space_.members().find_first());
  }

 private:
  const ExplicitFamily& family_;
  FeedbackModel model_;
  VersionSpace space_;
};

/// Referee for compositions that are only available in factorized form.
/// Every delivered feedback becomes a fact (x, g(f_1(x)..f_k(x))).
class ComposedReferee final : public Referee {
 public:
  ComposedReferee(const Family& family, const FeedbackModel& model)
      : family_(family), model_(model), space_(*family.composition()) {}

  bool legal(const Round& round) const override {
    try {
      check_round_shape(round, model_, 2, family_.num_inputs());
    } catch (const StructuralError&) {
      return false;
    }
    const std::pair<InputId, Value> fact[] = {as_fact(round)};
    return space_.witness(fact).has_value();
  }

  void apply(const Round& round) override {
    check_round_shape(round, model_, 2, family_.num_inputs());
    const auto fact = as_fact(round);
    if (!space_.feasible_with(fact.first, fact.second)) {
      throw InconsistencyError("feedback contradicts every remaining composed function");
    }
    space_.add_fact(fact.first, fact.second);
  }

  std::vector<Value> realized(InputId x) const override { return space_.realized(x); }

  std::string witness_description() const override {
    const auto w = space_.witness();
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; w && i < w->size(); ++i) out << (i ? "," : "") << "f" << (*w)[i];
    out << ")";
    return out.str();
  }

 private:
  static std::pair<InputId, Value> as_fact(const Round& round) {
    const auto x = round.inputs[0];
    switch (round.feedback.kind) {
      case Feedback::Kind::Value: return {x, round.feedback.value};
      case Feedback::Kind::Yes: return {x, round.guesses[0]};
      case Feedback::Kind::No: return {x, 1 - round.guesses[0]};
    }
    return {x, 0};
  }

  const Family& family_;
  FeedbackModel model_;
  ComposedVersionSpace space_;
};

}  // namespace

std::unique_ptr<Referee> make_referee(const Family& family, const FeedbackModel& model) {
  if (const auto* table = family.table()) return std::make_unique<ExplicitReferee>(*table, model);
  if (model.kind() != FeedbackModel::Kind::Standard && model.kind() != FeedbackModel::Kind::Bandit) {
    throw CapacityError("factorized compositions support only the standard and bandit models");
  }
  return std::make_unique<ComposedReferee>(family, model);
}

// ---------------------------------------------------------------------------

std::size_t default_round_cap(const Learner& learner) {
  if (const auto bound = learner.mistake_bound()) {
    return static_cast<std::size_t>(std::ceil(10.0 * std::max(*bound, 1.0)));
  }
  return 100'000;
}

Transcript run_game(const Family& family, const FeedbackModel& model, Learner& learner,
                    Adversary& adversary, std::optional<std::size_t> round_cap,
                    std::uint64_t seed, const RoundObserver& observer) {
  auto referee = make_referee(family, model);
  const std::size_t cap = round_cap.value_or(default_round_cap(learner));
  Transcript t;
  t.family = family.descriptor();
  t.model = model;
  t.seed = seed;
  t.terminal_reason = TerminalReason::RoundCap;

  while (t.rounds.size() < cap) {
    const GameState state{family, model, *referee, seed, t.rounds.size(), t.mistake_count};
    Round round;
    Rng rng(seed, kLearnerStream, t.rounds.size());
    bool done = false;
    for (std::size_t pos = 0; pos < model.r(); ++pos) {
      const auto x = adversary.next_input(state, pos, round.guesses);
      if (!x) {
        if (pos != 0) throw StructuralError("adversary stopped in the middle of a round");
        done = true;
        break;
      }
      round.inputs.push_back(*x);
      round.guesses.push_back(learner.guess(*x, pos, rng));
    }
    if (done) {
      t.terminal_reason = TerminalReason::AdversaryDone;
      break;
    }
    round.feedback = adversary.respond(state, round.inputs, round.guesses);
    round.mistake = is_mistake(round);
    try {
      referee->apply(round);
    } catch (const InconsistencyError& e) {
      throw InconsistencyError("round " + std::to_string(t.rounds.size()) + ": " + e.what());
    }
    learner.update(round);
    adversary.observe(round);
    if (observer) observer(round, t.rounds.size());
    t.mistake_count += round.mistake ? 1 : 0;
    t.rounds.push_back(std::move(round));
    if (learner.converged()) {
      t.terminal_reason = TerminalReason::LearnerConverged;
      break;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json model_to_json(const FeedbackModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = model.kind_name();
  if (model.kind() == FeedbackModel::Kind::Ambiguous) j["r"] = model.r();
  if (model.kind() == FeedbackModel::Kind::AgnosticBandit) j["eta"] = model.eta();
  return j;
}

FeedbackModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw StructuralError("model must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  auto uint_field = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      throw StructuralError(std::string("model '") + kind + "' needs unsigned '" + key + "'");
    }
    return j[key].get<std::uint32_t>();
  };
  if (kind == "standard") return FeedbackModel::standard();
  if (kind == "bandit") return FeedbackModel::bandit();
  if (kind == "ambiguous") {
    const auto r = uint_field("r");
    if (r == 0) throw StructuralError("ambiguous model needs r >= 1");
    return FeedbackModel::ambiguous(r);
  }
  if (kind == "agnostic") return FeedbackModel::agnostic(uint_field("eta"));
  throw StructuralError("unknown model kind '" + kind + "'");
}

nlohmann::ordered_json to_json(const Transcript& t, const Family& family) {
  nlohmann::ordered_json j;
  j["family"] = t.family;
  j["model"] = model_to_json(t.model);
  j["seed"] = t.seed;
  auto rounds = nlohmann::ordered_json::array();
  for (const auto& r : t.rounds) {
    nlohmann::ordered_json jr;
    auto inputs = nlohmann::ordered_json::array();
    for (auto x : r.inputs) inputs.push_back(family.label(x));
    jr["inputs"] = std::move(inputs);
    jr["guesses"] = r.guesses;
    switch (r.feedback.kind) {
      case Feedback::Kind::Value: jr["feedback"] = r.feedback.value; break;
      case Feedback::Kind::Yes: jr["feedback"] = "YES"; break;
      case Feedback::Kind::No: jr["feedback"] = "NO"; break;
    }
    jr["mistake"] = r.mistake;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  j["mistake_count"] = t.mistake_count;
  j["terminal_reason"] = to_string(t.terminal_reason);
  return j;
}

std::string serialize(const Transcript& t, const Family& family) { return to_json(t, family).dump(); }

Transcript transcript_from_json(const nlohmann::json& j, const Family& family) {
  auto need = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key)) {
      throw StructuralError(std::string("transcript is missing '") + key + "'");
    }
    return obj[key];
  };
  Transcript t;
  const auto& fam = need(j, "family");
  if (!fam.is_string()) throw StructuralError("'family' must be a string");
  t.family = fam.get<std::string>();
  t.model = model_from_json(need(j, "model"));
  const auto& seed = need(j, "seed");
  if (!seed.is_number_unsigned()) throw StructuralError("'seed' must be an unsigned integer");
  t.seed = seed.get<std::uint64_t>();
  const auto& rounds = need(j, "rounds");
  if (!rounds.is_array()) throw StructuralError("'rounds' must be an array");
  for (const auto& jr : rounds) {
    Round r;
    const auto& inputs = need(jr, "inputs");
    const auto& guesses = need(jr, "guesses");
    if (!inputs.is_array() || !guesses.is_array()) {
      throw StructuralError("'inputs' and 'guesses' must be arrays");
    }
    for (const auto& label : inputs) {
      if (!label.is_string()) throw StructuralError("input labels must be strings");
      const auto x = family.find_input(label.get<std::string>());
      if (!x) throw StructuralError("unknown input label '" + label.get<std::string>() + "'");
      r.inputs.push_back(*x);
    }
    for (const auto& g : guesses) {
      if (!g.is_number_unsigned()) throw StructuralError("guesses must be unsigned integers");
      r.guesses.push_back(g.get<Value>());
    }
    const auto& fb = need(jr, "feedback");
    if (fb.is_string() && fb == "YES") {
      r.feedback = Feedback::yes();
    } else if (fb.is_string() && fb == "NO") {
      r.feedback = Feedback::no();
    } else if (fb.is_number_unsigned()) {
      r.feedback = Feedback::reveal(fb.get<Value>());
    } else {
      throw StructuralError("feedback must be \"YES\", \"NO\" or a value");
    }
    const auto& mistake = need(jr, "mistake");
    if (!mistake.is_boolean()) throw StructuralError("'mistake' must be a boolean");
    r.mistake = mistake.get<bool>();
    t.rounds.push_back(std::move(r));
  }
  const auto& count = need(j, "mistake_count");
  if (!count.is_number_unsigned()) throw StructuralError("'mistake_count' must be unsigned");
  t.mistake_count = count.get<std::size_t>();
  const auto& reason = need(j, "terminal_reason");
  if (!reason.is_string()) throw StructuralError("'terminal_reason' must be a string");
  const auto rs = reason.get<std::string>();
  if (rs == "adversary_done") {
    t.terminal_reason = TerminalReason::AdversaryDone;
  } else if (rs == "round_cap") {
    t.terminal_reason = TerminalReason::RoundCap;
  } else if (rs == "learner_converged") {
    t.terminal_reason = TerminalReason::LearnerConverged;
  } else {
    throw StructuralError("unknown terminal_reason '" + rs + "'");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify_transcript(const Transcript& t, const Family& family) {
  VerificationReport report;
  report.claimed_mistakes = t.mistake_count;
  if (t.family != family.descriptor()) {
    report.failure = "transcript family '" + t.family + "' does not match '" + family.descriptor() + "'";
    return report;
  }
  auto referee = make_referee(family, t.model);
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const auto& r = t.rounds[i];
    check_round_shape(r, t.model, family.codomain(), family.num_inputs());
    if (r.mistake != is_mistake(r)) {
      report.failure = "round " + std::to_string(i) + ": mistake flag disagrees with feedback";
      return report;
    }
    report.recomputed_mistakes += is_mistake(r) ? 1 : 0;
    try {
      referee->apply(r);
    } catch (const InconsistencyError& e) {
      report.failure = "round " + std::to_string(i) + ": " + e.what();
      return report;
    }
  }
  if (const auto* space = referee->version_space()) {
    if (space->agnostic()) {
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      for_each_member(space->members(), [&](std::size_t f) { best = std::min(best, space->lie_counts()[f]); });
      report.minimal_lies = best;
      for_each_member(space->members(), [&](std::size_t f) {
        if (space->lie_counts()[f] == best) report.witnesses.push_back(static_cast<FunctionId>(f));
      });
    } else {
      for_each_member(space->members(),
                      [&](std::size_t f) { report.witnesses.push_back(static_cast<FunctionId>(f)); });
    }
    report.witness_count = report.witnesses.size();
  } else {
    // Factorized family: the referee holds at least one witness tuple by construction.
    report.witness_count = 1;
  }
  if (report.recomputed_mistakes != report.claimed_mistakes) {
    report.failure = "mistake_count " + std::to_string(report.claimed_mistakes) +
                     " but the rounds contain " + std::to_string(report.recomputed_mistakes);
    return report;
  }
  report.passed = report.witness_count > 0;
  return report;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed;
  j["recomputed_mistakes"] = report.recomputed_mistakes;
  j["claimed_mistakes"] = report.claimed_mistakes;
  j["witness_count"] = report.witness_count;
  j["witnesses"] = report.witnesses;
  if (report.minimal_lies) j["minimal_lies"] = *report.minimal_lies;
  if (!report.failure.empty()) j["failure"] = report.failure;
  return j;
}

}  // namespace mblab
