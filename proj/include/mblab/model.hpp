#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mblab/family.hpp"

namespace mblab {

/// Which feedback the adversary gives after each round.
class FeedbackModel {
 public:
  enum class Kind { Standard, Bandit, Ambiguous, AgnosticBandit };

  static FeedbackModel standard() { return FeedbackModel(Kind::Standard, 1, 0); }
  static FeedbackModel bandit() { return FeedbackModel(Kind::Bandit, 1, 0); }
  /// Throws ConfigError if r == 0.
  static FeedbackModel ambiguous(std::uint32_t r);
  static FeedbackModel agnostic(std::uint32_t eta) { return FeedbackModel(Kind::AgnosticBandit, 1, eta); }

  /// "std" | "bandit" | "amb:r=N" | "agn:eta=N".
  static FeedbackModel parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// Inputs per round (1 unless Ambiguous).
  std::uint32_t r() const { return r_; }
  /// Lie budget (0 unless AgnosticBandit).
  std::uint32_t eta() const { return eta_; }
  bool yes_no() const { return kind_ != Kind::Standard; }

  std::string descriptor() const;
  std::string kind_name() const;

  bool operator==(const FeedbackModel&) const = default;

 private:
  FeedbackModel(Kind kind, std::uint32_t r, std::uint32_t eta) : kind_(kind), r_(r), eta_(eta) {}
  Kind kind_;
  std::uint32_t r_;
  std::uint32_t eta_;
};

struct Feedback {
  enum class Kind { Value, Yes, No };
  Kind kind = Kind::No;
  Value value = 0;  // only for Kind::Value

  static Feedback yes() { return {Kind::Yes, 0}; }
  static Feedback no() { return {Kind::No, 0}; }
  static Feedback reveal(Value v) { return {Kind::Value, v}; }

  bool operator==(const Feedback&) const = default;
};

struct Round {
  std::vector<InputId> inputs;
  std::vector<Value> guesses;
  Feedback feedback;
  bool mistake = false;
};

/// Mistake rule: standard counts a revealed value different from the guess;
/// every yes/no model counts a NO.
bool is_mistake(const Round& round);

enum class TerminalReason { AdversaryDone, RoundCap, LearnerConverged };
std::string to_string(TerminalReason reason);

struct Transcript {
  std::string family;
  FeedbackModel model = FeedbackModel::standard();
  std::uint64_t seed = 0;
  std::vector<Round> rounds;
  std::size_t mistake_count = 0;
  TerminalReason terminal_reason = TerminalReason::AdversaryDone;
};

}  // namespace mblab
