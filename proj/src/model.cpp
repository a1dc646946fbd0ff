#include "mblab/model.hpp"

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"

namespace mblab {

FeedbackModel FeedbackModel::ambiguous(std::uint32_t r) {
  if (r == 0) throw ConfigError("ambiguous model needs r >= 1");
  return FeedbackModel(Kind::Ambiguous, r, 0);
}

FeedbackModel FeedbackModel::parse(std::string_view text) {
  if (text == "std" || text == "standard") return standard();
  if (text == "bandit") return bandit();
  const auto d = Descriptor::parse(text);
  if (d.name == "amb") {
    d.only({"r"});
    const auto r = d.get_uint("r");
    if (r == 0) throw ParseError("amb needs r >= 1");
    return ambiguous(static_cast<std::uint32_t>(r));
  }
  if (d.name == "agn") {
    d.only({"eta"});
    return agnostic(static_cast<std::uint32_t>(d.get_uint("eta")));
  }
  throw ParseError("unknown model '" + std::string(text) + "'");
}

std::string FeedbackModel::kind_name() const {
  switch (kind_) {
    case Kind::Standard: return "standard";
    case Kind::Bandit: return "bandit";
    case Kind::Ambiguous: return "ambiguous";
    case Kind::AgnosticBandit: return "agnostic";
  }
  return "?";
}

std::string FeedbackModel::descriptor() const {
  switch (kind_) {
    case Kind::Standard: return "std";
    case Kind::Bandit: return "bandit";
    case Kind::Ambiguous: return "amb:r=" + std::to_string(r_);
    case Kind::AgnosticBandit: return "agn:eta=" + std::to_string(eta_);
  }
  return "?";
}

bool is_mistake(const Round& round) {
  if (round.feedback.kind == Feedback::Kind::Value) {
    return round.guesses.size() != 1 || round.guesses[0] != round.feedback.value;
  }
  return round.feedback.kind == Feedback::Kind::No;
}

std::string to_string(TerminalReason reason) {
  switch (reason) {
    case TerminalReason::AdversaryDone: return "adversary_done";
    case TerminalReason::RoundCap: return "round_cap";
    case TerminalReason::LearnerConverged: return "learner_converged";
  }
  return "?";
}

}  // namespace mblab
