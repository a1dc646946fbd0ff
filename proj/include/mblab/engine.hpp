#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mblab/family.hpp"
#include "mblab/model.hpp"
#include "mblab/version_space.hpp"

namespace mblab {

/// Deterministic random stream derived from (seed, stream, index).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  /// Uniform in [0, n) by rejection sampling (portable across standard libraries).
  std::uint64_t below(std::uint64_t n);
  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

inline constexpr std::uint64_t kLearnerStream = 1;
inline constexpr std::uint64_t kAdversaryStream = 2;

// ---------------------------------------------------------------------------
// Referee

/// Tracks the functions consistent with every delivered feedback and rejects
/// feedback that would leave none.
class Referee {
 public:
  virtual ~Referee() = default;

  /// Structural validation (lengths, value ranges, feedback kind) then consistency.
  virtual bool legal(const Round& round) const = 0;
  /// Throws InconsistencyError (or StructuralError) and leaves state unchanged on rejection.
  virtual void apply(const Round& round) = 0;
  /// Values at x realized by some consistent function.
  virtual std::vector<Value> realized(InputId x) const = 0;
  /// Null for factorized families.
  virtual const VersionSpace* version_space() const { return nullptr; }
  /// Some consistent function (row index, or packed tuple for factorized families).
  virtual std::string witness_description() const = 0;
};

std::unique_ptr<Referee> make_referee(const Family& family, const FeedbackModel& model);

/// Structural checks shared by all referees; throws StructuralError.
void check_round_shape(const Round& round, const FeedbackModel& model, std::uint32_t codomain,
                       std::size_t num_inputs);

/// One referee step on an explicit family: vs_restrict plus model checks.
VersionSpace referee_check(const VersionSpace& v, const ExplicitFamily& family,
                           const FeedbackModel& model, const Round& round);

// ---------------------------------------------------------------------------
// Participants

struct GameState {
  const Family& family;
  const FeedbackModel& model;
  const Referee& referee;
  std::uint64_t seed;
  std::size_t round_index;
  std::size_t mistakes;
};

class Learner {
 public:
  virtual ~Learner() = default;
  /// Guess for `position` of the current round (position < r). Inputs of
  /// later positions are not yet known.
  virtual Value guess(InputId x, std::size_t position, Rng& rng) = 0;
  /// Feedback for the whole round.
  virtual void update(const Round& round) = 0;
  /// True once every future guess is certain to be correct.
  virtual bool converged() const { return false; }
  /// Worst-case mistake bound when the configuration has one.
  virtual std::optional<double> mistake_bound() const { return std::nullopt; }
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  /// Input for `position` given this round's guesses so far. Returning
  /// nullopt at position 0 ends the game.
  virtual std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                            std::span<const Value> guesses) = 0;
  virtual Feedback respond(const GameState& state, std::span<const InputId> inputs,
                           std::span<const Value> guesses) = 0;
  /// Called after the referee accepted the round.
  virtual void observe(const Round& round) { (void)round; }
};

/// Hook invoked after each accepted round (used for instrumentation).
using RoundObserver = std::function<void(const Round&, std::size_t round_index)>;

/// Default cap: 10 x the learner's bound when known, else 10^5.
std::size_t default_round_cap(const Learner& learner);

/// Plays one game. Throws InconsistencyError naming the round if the
/// adversary produces feedback the referee rejects.
Transcript run_game(const Family& family, const FeedbackModel& model, Learner& learner,
                    Adversary& adversary, std::optional<std::size_t> round_cap,
                    std::uint64_t seed, const RoundObserver& observer = {});

// ---------------------------------------------------------------------------
// Transcripts

nlohmann::ordered_json to_json(const Transcript& t, const Family& family);
std::string serialize(const Transcript& t, const Family& family);
/// Throws StructuralError on malformed input. Labels are resolved against `family`.
Transcript transcript_from_json(const nlohmann::json& j, const Family& family);
nlohmann::ordered_json model_to_json(const FeedbackModel& model);
FeedbackModel model_from_json(const nlohmann::json& j);

struct VerificationReport {
  bool passed = false;
  std::size_t recomputed_mistakes = 0;
  std::size_t claimed_mistakes = 0;
  /// Functions consistent with all feedback (agnostic: those with minimal lie count).
  std::vector<FunctionId> witnesses;
  std::size_t witness_count = 0;
  std::optional<std::uint32_t> minimal_lies;
  std::string failure;
};

/// Replays the referee over every round.
VerificationReport verify_transcript(const Transcript& t, const Family& family);
nlohmann::ordered_json to_json(const VerificationReport& report);

}  // namespace mblab
