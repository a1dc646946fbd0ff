#include "mblab/wmv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"

namespace mblab {

Rational rational_below(double x) {
  constexpr long long kScale = 1LL << 48;
  const auto numerator = static_cast<long long>(std::floor(x * static_cast<double>(kScale))) - 1;
  if (numerator <= 0) throw ConfigError("alpha too small to approximate");
  return Rational(numerator, kScale);
}

namespace {

const char* variant_name(WmvVariant v) {
  switch (v) {
    case WmvVariant::BanditOpt2: return "wmv:bandit2";
    case WmvVariant::AgnosticBinary: return "wmv:agnostic (binary)";
    case WmvVariant::AgnosticGeneral: return "wmv:agnostic";
    case WmvVariant::Ambiguous: return "wmv:amb";
    case WmvVariant::AmbiguousBinary: return "wmv:amb2";
    case WmvVariant::AmbiguousSmallM: return "wmv:ambM";
    case WmvVariant::Compose: return "wmv:compose";
  }
  return "wmv";
}

}  // namespace

WmvLearner::WmvLearner(WmvVariant variant, const Family& family, const FeedbackModel& model)
    : variant_(variant), model_(model), k_(family.codomain()) {
  using Kind = FeedbackModel::Kind;
  const std::string name = variant_name(variant);
  auto need_model = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError(name + " needs " + what + " feedback, got " + model.descriptor());
  };

  if (variant == WmvVariant::Compose) {
    const auto* comp = family.composition();
    if (comp == nullptr) throw ConfigError(name + " needs a composition family");
    need_model(model.kind() == Kind::Standard || model.kind() == Kind::Bandit, "standard or bandit");
    combiner_ = &comp->g;
    std::map<const ExplicitFamily*, std::shared_ptr<InnerLearner>> shared;
    for (const auto& p : comp->parts) {
      parts_.push_back(p.get());
      auto& learner = shared[p.get()];
      if (!learner) learner = make_inner_learner(*p);
      inner_.push_back(learner);
      inner_bound_ += learner->bound();
    }
    // G = {g} is a single known combiner, so its coordinate never errs (opt_std(G) = 0).
    k_ = static_cast<std::uint32_t>(parts_.size());
  } else {
    const auto& table = family.require_table(name);
    parts_.push_back(&table);
    inner_.push_back(make_inner_learner(table));
    inner_bound_ = inner_.front()->bound();
  }

  const double k = k_;
  const double r = model.r();
  switch (variant) {
    case WmvVariant::BanditOpt2:
      need_model(model.kind() == Kind::Bandit, "bandit");
      alpha_ = Rational(1, static_cast<long long>(k_) * k_);
      alpha_stated_ = 1.0 / (k * k);
      if (inner_bound_ <= 2) bound_ = bandit2_upper(k_);
      break;
    case WmvVariant::AgnosticBinary:
      need_model(model.kind() == Kind::AgnosticBandit, "agnostic");
      if (k_ != 2) throw ConfigError(name + " needs a binary codomain");
      alpha_ = Rational(1469, 10000);
      alpha_stated_ = 0.1469;
      eta_ = model.eta();
      bound_ = agnostic_binary_upper(inner_bound_, eta_);
      break;
    case WmvVariant::AgnosticGeneral:
      need_model(model.kind() == Kind::AgnosticBandit, "agnostic");
      if (k_ < 3) throw ConfigError(name + " needs k alpha < 1, i.e. k >= 3");
      alpha_stated_ = 1.0 / (k * std::log(k));
      alpha_ = rational_below(alpha_stated_);
      eta_ = model.eta();
      bound_ = agnostic_general_upper(k_, inner_bound_, eta_);
      break;
    case WmvVariant::Ambiguous:
      need_model(model.kind() == Kind::Ambiguous, "ambiguous");
      if (!(k * std::log(k) > r * (k - 1))) {
        throw ConfigError(name + " needs k ln k > r(k-1)");
      }
      alpha_stated_ = 1.0 / (k * std::log(k));
      alpha_ = rational_below(alpha_stated_);
      try {
        bound_ = ambiguous_upper(k_, model.r(), inner_bound_);
      } catch (const ConfigError&) {
        bound_.reset();  // the closed form needs ln k > r; the learner itself is still valid
      }
      break;
    case WmvVariant::AmbiguousBinary:
      need_model(model.kind() == Kind::Ambiguous, "ambiguous");
      if (k_ != 2) throw ConfigError(name + " needs a binary codomain");
      if (model.r() < 3) throw ConfigError(name + " needs alpha r < 1, i.e. r >= 3");
      alpha_stated_ = 1.0 / (r * std::log(r));
      alpha_ = rational_below(alpha_stated_);
      bound_ = ambiguous_binary_upper(model.r(), inner_bound_);
      break;
    case WmvVariant::AmbiguousSmallM: {
      need_model(model.kind() == Kind::Ambiguous, "ambiguous");
      if (inner_bound_ > model.r()) throw ConfigError(name + " needs opt_std(F) <= r");
      const std::uint32_t m = std::max<std::uint32_t>(inner_bound_, 1);
      boost::multiprecision::cpp_int denom = 1;
      for (std::uint32_t i = 0; i < m; ++i) denom *= model.r() * k_;
      alpha_ = Rational(1, denom);
      alpha_stated_ = alpha_.convert_to<double>();
      bound_ = small_m_upper(model.r(), k_, inner_bound_);
      break;
    }
    case WmvVariant::Compose:
      if (k_ < 3) throw ConfigError(name + " needs alpha (k+1) < 1, i.e. k >= 3 parts");
      alpha_stated_ = 1.0 / ((k + 1) * std::log(k));
      alpha_ = rational_below(alpha_stated_);
      bound_ = compose_upper(k_, inner_bound_);
      break;
  }

  WmvNode root;
  for (const auto* p : parts_) root.spaces.push_back(p->all_members());
  nodes_.push_back(std::move(root));
}

std::optional<double> WmvLearner::mistake_bound() const {
  if (!bound_) return std::nullopt;
  return bound_->value;
}

std::optional<Rational> WmvLearner::decay_factor() const {
  const Rational k(k_);
  switch (variant_) {
    case WmvVariant::AgnosticBinary: return Rational(1, 2) + alpha_;
    case WmvVariant::AgnosticGeneral: return (k - 1) / k + alpha_;
    case WmvVariant::Compose: return Rational(1, 2) + alpha_ * (k + 1) / 2;
    case WmvVariant::BanditOpt2:
    case WmvVariant::Ambiguous:
    case WmvVariant::AmbiguousBinary:
    case WmvVariant::AmbiguousSmallM: {
      // The electorate holds at least 1/k^r of the weight and each member
      // is replaced by at most r(k-1) children of relative weight alpha.
      Rational kr = 1;
      for (std::uint32_t i = 0; i < model_.r(); ++i) kr *= k;
      return 1 - 1 / kr + alpha_ * model_.r() * (k - 1) / kr;
    }
  }
  return std::nullopt;
}

Rational WmvLearner::weight(std::uint32_t depth) const {
  if (powers_.empty()) powers_.push_back(Rational(1));
  while (powers_.size() <= depth) powers_.push_back(powers_.back() * alpha_);
  return powers_[depth];
}

Rational WmvLearner::total_weight() const {
  Rational w = 0;
  for (const auto& n : nodes_) w += weight(n.depth);
  return w;
}

Rational WmvLearner::weight_of(std::span<const std::size_t> voters) const {
  const auto hist = depth_histogram(voters);
  Rational w = 0;
  for (std::size_t d = 0; d < hist.size(); ++d) {
    if (hist[d]) w += weight(static_cast<std::uint32_t>(d)) * static_cast<unsigned long long>(hist[d]);
  }
  return w;
}

std::vector<std::size_t> WmvLearner::depth_histogram(std::span<const std::size_t> voters) const {
  std::vector<std::size_t> hist;
  for (auto i : voters) {
    const auto d = nodes_[i].depth;
    if (hist.size() <= d) hist.resize(d + 1, 0);
    ++hist[d];
  }
  return hist;
}

bool WmvLearner::truthful(const WmvNode& node, std::span<const FunctionId> target) const {
  for (std::size_t i = 0; i < node.spaces.size(); ++i) {
    if (!node.spaces[i].test(target[i])) return false;
  }
  return true;
}

Value WmvLearner::predict(const WmvNode& node, std::size_t part, InputId x) {
  return inner_[part]->predict(node.spaces[part], x);
}

WmvLearner::Vote WmvLearner::vote(std::span<const std::size_t> voters,
                                  std::span<const Value> predictions, Rng& rng) {
  std::map<Value, std::vector<std::size_t>> by_value;
  for (std::size_t j = 0; j < voters.size(); ++j) by_value[predictions[j]].push_back(voters[j]);
  std::vector<Value> winners;
  Rational best = -1;
  for (const auto& [value, group] : by_value) {
    const Rational w = weight_of(group);
    if (w > best) {
      best = w;
      winners.assign(1, value);
    } else if (w == best) {
      winners.push_back(value);
    }
  }
  Vote out;
  out.winner = winners.size() == 1 ? winners.front() : winners[rng.below(winners.size())];
  out.electorate = std::move(by_value[out.winner]);
  return out;
}

Value WmvLearner::guess(InputId x, std::size_t position, Rng& rng) {
  if (position == 0) {
    electorate_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) electorate_[i] = i;
    node_guesses_.assign(nodes_.size(), {});
  }
  std::vector<Value> predictions;
  predictions.reserve(electorate_.size());
  for (auto i : electorate_) {
    if (variant_ == WmvVariant::Compose) {
      std::uint32_t packed = 0;
      auto& q = node_guesses_[i];
      for (std::size_t part = 0; part < parts_.size(); ++part) {
        q.push_back(predict(nodes_[i], part, x));
        packed |= q.back() << part;
      }
      predictions.push_back((*combiner_)(packed));
    } else {
      predictions.push_back(predict(nodes_[i], 0, x));
    }
  }
  auto v = vote(electorate_, predictions, rng);
  electorate_ = std::move(v.electorate);
  return v.winner;
}

WmvNode WmvLearner::child(const WmvNode& parent, std::uint32_t part, InputId x, Value v,
                          bool lie) const {
  WmvNode c = parent;
  ++c.depth;
  if (lie) ++c.lies;
  c.spaces[part] &= parts_[part]->members_with(x, v);
  c.memory.push_back({part, x, v});
  return c;
}

void WmvLearner::split(const Round& round, std::vector<WmvNode>& next, std::size_t& children) {
  auto realized = [&](const WmvNode& n, std::uint32_t part, InputId x) {
    return realized_values(n.spaces[part], *parts_[part], x);
  };
  for (auto idx : electorate_) {
    const WmvNode& node = nodes_[idx];
    auto emit = [&](WmvNode c) {
      next.push_back(std::move(c));
      ++children;
    };
    switch (variant_) {
      case WmvVariant::BanditOpt2: {
        const InputId x = round.inputs[0];
        for (Value v : realized(node, 0, x)) {
          if (v != round.guesses[0]) emit(child(node, 0, x, v, false));
        }
        break;
      }
      case WmvVariant::AgnosticBinary:
      case WmvVariant::AgnosticGeneral: {
        // One child per value; the child keeping the winner treats the NO as
        // a lie and is dropped once it has used more lies than allowed.
        const InputId x = round.inputs[0];
        for (Value v : realized(node, 0, x)) {
          const bool lie = v == round.guesses[0];
          if (lie && node.lies + 1 > eta_) continue;
          emit(child(node, 0, x, v, lie));
        }
        break;
      }
      case WmvVariant::Ambiguous:
      case WmvVariant::AmbiguousBinary:
      case WmvVariant::AmbiguousSmallM: {
        // Each child remembers a single input of the round with an
        // alternative to the losing guess.
        std::set<std::pair<InputId, Value>> seen;
        for (std::size_t i = 0; i < round.inputs.size(); ++i) {
          const InputId x = round.inputs[i];
          for (Value v : realized(node, 0, x)) {
            if (v == round.guesses[i] || !seen.emplace(x, v).second) continue;
            emit(child(node, 0, x, v, false));
          }
        }
        break;
      }
      case WmvVariant::Compose: {
        const InputId x = round.inputs[0];
        const auto& q = node_guesses_[idx];
        for (std::uint32_t part = 0; part < parts_.size(); ++part) {
          const Value flipped = 1 - q[part];
          if ((node.spaces[part] & parts_[part]->members_with(x, flipped)).any()) {
            emit(child(node, part, x, flipped, false));
          }
        }
        break;
      }
    }
  }
}

void WmvLearner::update(const Round& round) {
  WmvRoundStats stats;
  const bool instrumented = static_cast<bool>(hook_);
  std::vector<std::size_t> all(nodes_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (instrumented) {
    stats.mistake = round.mistake;
    stats.weight_before = total_weight();
    stats.active_before = depth_histogram(all);
    stats.electorate = depth_histogram(electorate_);
    stats.electorate_weight = weight_of(electorate_);
    stats.electorate_size = electorate_.size();
  }
  if (round.mistake) {
    std::vector<char> in_electorate(nodes_.size(), 0);
    for (auto i : electorate_) in_electorate[i] = 1;
    std::vector<WmvNode> next;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!in_electorate[i]) next.push_back(nodes_[i]);
    }
    split(round, next, stats.children);
    nodes_ = std::move(next);
  }
  electorate_.clear();
  node_guesses_.clear();
  if (instrumented) {
    all.resize(nodes_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    stats.weight_after = total_weight();
    stats.active_after = depth_histogram(all);
    hook_(stats);
  }
}

std::unique_ptr<WmvLearner> make_wmv_learner(std::string_view descriptor, const Family& family,
                                             const FeedbackModel& model) {
  constexpr std::string_view prefix = "wmv:";
  if (descriptor.substr(0, prefix.size()) != prefix) {
    throw ParseError("not a wmv learner: '" + std::string(descriptor) + "'");
  }
  const auto d = Descriptor::parse(descriptor.substr(prefix.size()));
  auto check_r = [&] {
    d.only({"r"});
    if (d.get_uint("r") != model.r()) {
      throw ConfigError("learner r=" + d.get("r") + " does not match model " + model.descriptor());
    }
  };
  WmvVariant variant;
  if (d.name == "bandit2") {
    d.only({});
    variant = WmvVariant::BanditOpt2;
  } else if (d.name == "agnostic") {
    d.only({});
    variant = family.codomain() == 2 ? WmvVariant::AgnosticBinary : WmvVariant::AgnosticGeneral;
  } else if (d.name == "amb") {
    check_r();
    variant = WmvVariant::Ambiguous;
  } else if (d.name == "amb2") {
    check_r();
    variant = WmvVariant::AmbiguousBinary;
  } else if (d.name == "ambM") {
    d.only({});
    variant = WmvVariant::AmbiguousSmallM;
  } else if (d.name == "compose") {
    d.only({});
    variant = WmvVariant::Compose;
  } else {
    throw ParseError("unknown wmv variant '" + d.name + "'");
  }
  return std::make_unique<WmvLearner>(variant, family, model);
}

}  // namespace mblab
