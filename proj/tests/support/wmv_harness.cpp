#include "support/wmv_harness.hpp"

#include <sstream>

#include "mblab/adversaries.hpp"
#include "mblab/learners.hpp"

namespace mblab::testing {

namespace {

Rational power(const Rational& base, std::uint32_t e) {
  Rational out = 1;
  for (std::uint32_t i = 0; i < e; ++i) out *= base;
  return out;
}

/// Functions consistent with every round of `t`: part tuples when the
/// learner tracks parts, else rows of the family's table.
std::vector<std::vector<FunctionId>> targets_of(const Transcript& t, const Family& family,
                                                bool per_part) {
  std::vector<std::vector<FunctionId>> out;
  if (const auto* comp = family.composition(); comp && per_part) {
    ComposedVersionSpace cvs(*comp);
    for (const auto& r : t.rounds) {
      const InputId x = r.inputs[0];
      switch (r.feedback.kind) {
        case Feedback::Kind::Value: cvs.add_fact(x, r.feedback.value); break;
        case Feedback::Kind::Yes: cvs.add_fact(x, r.guesses[0]); break;
        case Feedback::Kind::No: cvs.add_fact(x, 1 - r.guesses[0]); break;
      }
    }
    if (auto w = cvs.witness()) out.push_back(*w);
    return out;
  }
  const auto report = verify_transcript(t, family);
  for (std::size_t i = 0; i < report.witnesses.size() && i < 8; ++i) {
    out.push_back({report.witnesses[i]});
  }
  return out;
}

/// Weight share the final electorate is guaranteed by plurality voting.
Rational electorate_share(const WmvLearner& w, const FeedbackModel& model, std::uint32_t k) {
  switch (w.variant()) {
    case WmvVariant::Compose: return Rational(1, 2);
    case WmvVariant::BanditOpt2:
    case WmvVariant::AgnosticBinary:
    case WmvVariant::AgnosticGeneral: return Rational(1, k);
    default: return 1 / power(Rational(k), model.r());
  }
}

std::size_t max_children_per_voter(const WmvLearner& w, const FeedbackModel& model,
                                   std::uint32_t k, std::size_t parts) {
  switch (w.variant()) {
    case WmvVariant::BanditOpt2: return k - 1;
    case WmvVariant::AgnosticBinary:
    case WmvVariant::AgnosticGeneral: return k;
    case WmvVariant::Compose: return parts;
    default: return model.r() * (k - 1);
  }
}

std::size_t at(const std::vector<std::size_t>& hist, std::size_t d) {
  return d < hist.size() ? hist[d] : 0;
}

std::size_t min_depth(const std::vector<std::size_t>& hist) {
  for (std::size_t d = 0; d < hist.size(); ++d) {
    if (hist[d]) return d;
  }
  return hist.size();
}

}  // namespace

std::string CheckedGame::summary() const {
  std::ostringstream os;
  os << "mistakes=" << transcript.mistake_count << " rounds=" << transcript.rounds.size();
  if (upper) os << " upper=" << upper->exact_text();
  if (lower) os << " lower=" << lower->exact_text();
  for (std::size_t i = 0; i < violations.size() && i < 3; ++i) os << "\n  " << violations[i];
  return os.str();
}

CheckedGame play(const GameSpec& spec) {
  const Family family = parse_family(spec.family);
  const FeedbackModel model = FeedbackModel::parse(spec.model);
  auto learner = make_learner(spec.learner, family, model);
  auto adversary = make_adversary(spec.adversary, family, model, spec.seed);
  CheckedGame out;
  out.transcript = run_game(family, model, *learner, *adversary, spec.round_cap, spec.seed);
  if (const auto* w = dynamic_cast<const WmvLearner*>(learner.get())) out.upper = w->bound();
  out.lower = forced_lower_bound(spec.adversary, family, model);
  return out;
}

CheckedGame play_checked(const GameSpec& spec) {
  const Family family = parse_family(spec.family);
  const FeedbackModel model = FeedbackModel::parse(spec.model);
  auto learner = make_wmv_learner(spec.learner, family, model);
  auto adversary = make_adversary(spec.adversary, family, model, spec.seed);
  WmvLearner& w = *learner;
  const std::uint32_t k = family.codomain();
  const std::size_t parts = family.composition() ? family.composition()->parts.size() : 1;

  CheckedGame out;
  auto fail = [&](std::size_t round, const std::string& what) {
    out.violations.push_back("round " + std::to_string(round) + ": " + what);
  };

  std::size_t stats_round = 0;
  w.set_stats_hook([&](const WmvRoundStats& s) {
    const std::size_t r = stats_round++;
    if (!s.mistake && s.weight_after != s.weight_before) fail(r, "weight changed without a mistake");
    if (s.mistake) {
      if (const auto decay = w.decay_factor(); decay && s.weight_after > *decay * s.weight_before) {
        fail(r, "weight decayed less than the variant's factor");
      }
    }
    if (s.electorate_weight < electorate_share(w, model, k) * s.weight_before) {
      fail(r, "final electorate below its plurality share");
    }
    if (s.children > s.electorate_size * max_children_per_voter(w, model, k, parts)) {
      fail(r, "too many children");
    }
    if (w.variant() == WmvVariant::BanditOpt2 && s.mistake && w.inner_bound() <= 2 &&
        at(s.active_before, 0) == 0) {
      if (at(s.active_before, 1) > 0) {
        if (at(s.electorate, 1) == 0) fail(r, "depth-1 nodes exist but none voted with the winner");
      } else if (s.children != 0) {
        fail(r, "nodes at maximum depth produced children");
      }
    }
    if (w.variant() == WmvVariant::AmbiguousSmallM && s.electorate_size > 0 &&
        min_depth(s.electorate) != min_depth(s.active_before)) {
      fail(r, "electorate lacks a node of minimum depth");
    }
  });

  std::vector<std::vector<WmvNode>> snapshots;
  snapshots.push_back(w.nodes());
  out.transcript = run_game(family, model, w, *adversary, spec.round_cap, spec.seed,
                            [&](const Round&, std::size_t) { snapshots.push_back(w.nodes()); });
  out.upper = w.bound();
  out.lower = forced_lower_bound(spec.adversary, family, model);
  out.snapshots = snapshots.size();

  const auto targets = targets_of(out.transcript, family, w.variant() == WmvVariant::Compose);
  if (targets.empty()) fail(out.transcript.rounds.size(), "no function consistent with the game");
  const Rational floor_weight = power(w.alpha(), w.survivor_depth());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    Rational total = 0;
    for (const auto& n : snapshots[i]) {
      if (w.weight(n.depth) != power(w.alpha(), n.depth)) fail(i, "weight is not alpha^depth");
      if (n.depth > w.survivor_depth()) fail(i, "node deeper than C + eta");
      if (n.lies > model.eta()) fail(i, "node over the lie budget");
      if (n.memory.size() != n.depth) fail(i, "memory size differs from depth");
      for (const auto& space : n.spaces) {
        if (space.none()) fail(i, "node with an empty version space");
      }
      total += power(w.alpha(), n.depth);
    }
    if (total < floor_weight) fail(i, "total weight below alpha^(C + eta)");
    for (const auto& target : targets) {
      bool found = false;
      for (const auto& n : snapshots[i]) {
        found = found || (w.truthful(n, target) && n.depth <= w.survivor_depth());
      }
      if (!found) fail(i, "no truthful node survives");
    }
  }
  if (w.total_weight() != [&] {
        Rational t = 0;
        for (const auto& n : w.nodes()) t += power(w.alpha(), n.depth);
        return t;
      }()) {
    fail(snapshots.size(), "reported total weight differs from the sum of node weights");
  }
  return out;
}

}  // namespace mblab::testing
