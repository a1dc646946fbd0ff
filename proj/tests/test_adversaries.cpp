#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mblab/adversaries.hpp"
#include "mblab/errors.hpp"
#include "mblab/learners.hpp"
#include "mblab/solver.hpp"
#include "support/wmv_harness.hpp"

using namespace mblab;
using mblab::testing::GameSpec;
using mblab::testing::play;

namespace {

std::vector<FieldVector> all_vectors(const FieldSpec& spec) {
  std::vector<FieldVector> out;
  for (std::size_t i = 0; i < std::size_t{spec.order()} * spec.order(); ++i) {
    out.push_back(FieldVector::from_index(spec, 2, i));
  }
  return out;
}

/// |S| + k^1.5 >= 2 |{s in S : s.u in Z}| for every k/2-subset Z, checked by
/// enumerating subsets (or `samples` random ones when positive).
bool every_half_is_light(std::span<const FieldVector> s, const FieldVector& u, std::size_t samples,
                         std::mt19937_64& gen) {
  const std::uint32_t k = u.spec().order();
  const double limit = (static_cast<double>(s.size()) + std::pow(k, 1.5)) / 2;
  auto mass = [&](const std::vector<bool>& in_z) {
    std::size_t m = 0;
    for (const auto& v : s) m += in_z[ff_dot(v, u).value] ? 1 : 0;
    return m;
  };
  std::vector<bool> in_z(k, false);
  std::fill(in_z.begin(), in_z.begin() + k / 2, true);
  if (samples == 0) {
    std::sort(in_z.begin(), in_z.end());
    do {
      if (mass(in_z) > limit + 1e-9) return false;
    } while (std::next_permutation(in_z.begin(), in_z.end()));
    return true;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    std::shuffle(in_z.begin(), in_z.end(), gen);
    if (mass(in_z) > limit + 1e-9) return false;
  }
  return true;
}

std::vector<FieldVector> random_subset(const FieldSpec& spec, std::mt19937_64& gen) {
  auto all = all_vectors(spec);
  std::shuffle(all.begin(), all.end(), gen);
  all.erase(all.begin() + static_cast<std::ptrdiff_t>(1 + gen() % all.size()), all.end());
  return all;
}

struct Played {
  Transcript transcript;
  std::unique_ptr<Adversary> adversary;
};

Played run(const Family& family, const std::string& model_desc, const std::string& learner_desc,
           std::unique_ptr<Adversary> adversary, std::uint64_t seed = 0) {
  const auto model = FeedbackModel::parse(model_desc);
  auto learner = make_learner(learner_desc, family, model);
  Played p;
  p.transcript = run_game(family, model, *learner, *adversary, 5000, seed);
  p.adversary = std::move(adversary);
  return p;
}

}  // namespace

TEST(SelectU, Examples) {
  const auto gf2 = FieldSpec::of_order(2);
  const auto full = all_vectors(gf2);
  EXPECT_EQ(select_u(full, gf2).label(), "(0,1)");
  const std::vector<FieldVector> origin = {FieldVector::from_index(gf2, 2, 0)};
  EXPECT_EQ(select_u(origin, gf2).label(), "(0,0)");
  EXPECT_THROW(select_u(std::vector<FieldVector>{}, gf2), PreconditionError);
  EXPECT_THROW(select_u(origin, FieldSpec::of_order(3)), PreconditionError);
}

TEST(SelectU, ChoiceSatisfiesTheHalfMassBoundExhaustively) {
  std::mt19937_64 gen(7);
  for (std::uint32_t k : {2u, 4u, 8u}) {
    const auto spec = FieldSpec::of_order(k);
    for (int trial = 0; trial < 60; ++trial) {
      const auto s = random_subset(spec, gen);
      const auto u = select_u(s, spec);
      ASSERT_TRUE(every_half_is_light(s, u, 0, gen)) << "k=" << k;
      // Least such u: every earlier candidate has a heavy half.
      if (k <= 4) {
        for (std::size_t i = 0; i < u.index(); ++i) {
          ASSERT_FALSE(every_half_is_light(s, FieldVector::from_index(spec, 2, i), 0, gen));
        }
      }
    }
  }
}

TEST(SelectU, ChoiceSatisfiesTheHalfMassBoundSampled) {
  std::mt19937_64 gen(11);
  const auto spec = FieldSpec::of_order(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_subset(spec, gen);
    ASSERT_TRUE(every_half_is_light(s, select_u(s, spec), 400, gen));
  }
}

TEST(LinearBandit, PhaseSizesStayAboveTheirFloor) {
  for (std::uint32_t k : {4u, 8u, 16u}) {
    const auto family = parse_family("linear:q=" + std::to_string(k) + ",n=2");
    for (const std::string learner : {"zero", "halving", "wmv:bandit2", "random"}) {
      auto adv = std::make_unique<LinearBanditAdversary>(family, FeedbackModel::bandit());
      auto* a = adv.get();
      const auto p = run(family, "bandit", learner, std::move(adv), 3);
      const auto sizes = a->phase_sizes();
      ASSERT_EQ(sizes.size(), a->phases());
      const auto final_size = verify_transcript(p.transcript, family).witness_count;
      const long long k3 = static_cast<long long>(k) * k * k;
      for (std::size_t i = 0; i <= sizes.size(); ++i) {
        const long long size = static_cast<long long>(i < sizes.size() ? sizes[i] : final_size);
        const long long c = (1LL << (a->phases() - i)) - 1;
        // |S_i| > c k^1.5, compared by squaring.
        EXPECT_TRUE(size > 0 && size * size > c * c * k3) << "k=" << k << " phase " << i;
      }
      EXPECT_GE(p.transcript.mistake_count, a->phases() * (k / 2)) << learner;
    }
  }
}

TEST(LinearBandit, ForcesItsBoundAgainstTheZoo) {
  const std::map<std::uint32_t, std::size_t> expected = {{4, 2}, {8, 4}, {16, 16}};
  for (const auto& [k, forced] : expected) {
    const auto family = "linear:q=" + std::to_string(k) + ",n=2";
    EXPECT_EQ(lin_bandit_lower(k).threshold, forced);
    for (const std::string learner : {"zero", "halving", "span", "random", "wmv:bandit2"}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto g = play(GameSpec{family, "bandit", learner, "lin-bandit", seed, std::nullopt});
        ASSERT_TRUE(g.lower.has_value());
        EXPECT_GE(g.transcript.mistake_count, forced) << family << " " << learner;
      }
    }
  }
  const auto small = play(GameSpec{"linear:q=4,n=2", "bandit", "solver-opt", "lin-bandit", 0, {}});
  EXPECT_GE(small.transcript.mistake_count, 2u);
  EXPECT_THROW(make_adversary("lin-bandit", parse_family("linear:q=3,n=2"), FeedbackModel::bandit(), 0),
               ConfigError);
}

TEST(AgnosticRepeat, ForcesKEtaMistakes) {
  for (const std::string family : {"linear:q=2,n=3", "linear:q=3,n=2", "sparse:k=4,M=1,D=3"}) {
    const auto k = parse_family(family).codomain();
    for (std::uint32_t eta = 0; eta <= 2; ++eta) {
      const auto model = "agn:eta=" + std::to_string(eta);
      for (const std::string learner : {"zero", "halving", "random", "wmv:agnostic"}) {
        GameSpec spec{family, model, learner, "agn-repeat", 1, std::nullopt};
        mblab::testing::CheckedGame g;
        try {
          g = play(spec);
        } catch (const ConfigError&) {
          continue;
        }
        ASSERT_TRUE(g.lower.has_value());
        EXPECT_EQ(g.lower->threshold, k * eta);
        EXPECT_GE(g.transcript.mistake_count, k * eta) << family << " " << model << " " << learner;
        if (eta == 0) EXPECT_EQ(g.transcript.mistake_count, 0u);
      }
    }
  }
}

TEST(CartRepeat, ForcesItsThreshold) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"sparse:k=2,M=1,D=2", 2}, {"sparse:k=3,M=1,D=2", 4}, {"sparse:k=2,M=2,D=2", 3}};
  for (const auto& [family, forced] : cases) {
    for (const std::string learner : {"zero", "halving", "random", "wmv:ambM", "solver-opt"}) {
      const auto g = play(GameSpec{family, "amb:r=2", learner, "cart-repeat", 2, std::nullopt});
      ASSERT_TRUE(g.lower.has_value());
      EXPECT_EQ(g.lower->threshold, forced);
      EXPECT_GE(g.transcript.mistake_count, forced) << family << " " << learner;
    }
  }
  // Bandit games on the r-fold power carry the same guarantee.
  const auto g = play(GameSpec{"cart:r=2,inner=(sparse:k=3,M=1,D=2)", "bandit", "halving",
                               "cart-repeat", 0, std::nullopt});
  ASSERT_TRUE(g.lower.has_value());
  EXPECT_GE(g.transcript.mistake_count, 4u);
}

TEST(Composition, WorkedExampleAtEightParts) {
  const auto family = parse_family("compose-lb:k=8,M=1");
  for (const std::string learner : {"zero", "wmv:compose"}) {
    auto adv = std::make_unique<CompositionAdversary>(family, FeedbackModel::standard());
    auto* a = adv.get();
    const auto p = run(family, "std", learner, std::move(adv));
    EXPECT_EQ(p.transcript.mistake_count, 12u) << learner;
    ASSERT_GE(p.transcript.rounds.size(), 2u);
    EXPECT_EQ(p.transcript.rounds[0].inputs[0], *family.find_input("(1,1,1,1,2,2,2,2)"));
    EXPECT_EQ(p.transcript.rounds[1].inputs[0], *family.find_input("(3,3,3,3,4,4,4,4)"));
    EXPECT_EQ(a->history().size(), 4u);  // three levels plus the final split
    EXPECT_TRUE(verify_transcript(p.transcript, family).passed);
  }
}

TEST(Composition, BlocksPartitionTheGroundSetAtEveryLevel) {
  for (const auto& [k, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {4, 1}, {4, 2}, {8, 1}, {8, 2}}) {
    const auto family = parse_family("compose-lb:k=" + std::to_string(k) + ",M=" + std::to_string(m));
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto adv = std::make_unique<CompositionAdversary>(family, FeedbackModel::bandit());
      auto* a = adv.get();
      const auto played = run(family, "bandit", "zero", std::move(adv), seed);
      for (std::size_t level = 0; level < a->history().size(); ++level) {
        const auto& blocks = a->history()[level];
        ASSERT_EQ(blocks.size(), std::size_t{1} << level);
        std::set<std::uint32_t> seen;
        for (const auto& b : blocks) {
          ASSERT_EQ(b.size(), k * m / blocks.size()) << "level " << level;
          for (auto t : b) ASSERT_TRUE(seen.insert(t).second) << "element in two blocks";
        }
        ASSERT_EQ(seen.size(), k * m);
        ASSERT_EQ(*seen.begin(), 1u);
        ASSERT_EQ(*seen.rbegin(), k * m);
      }
    }
  }
}

TEST(Composition, ForcesItsBound) {
  for (const auto& [family, forced] : std::vector<std::pair<std::string, std::size_t>>{
           {"compose-lb:k=2,M=1", 1}, {"compose-lb:k=4,M=2", 8}, {"compose-lb:k=4,M=1", 4}}) {
    for (const std::string model : {"std", "bandit"}) {
      for (const std::string learner : {"zero", "random", "wmv:compose"}) {
        mblab::testing::CheckedGame g;
        try {
          g = play(GameSpec{family, model, learner, "compose-rec", 0, std::nullopt});
        } catch (const ConfigError&) {
          continue;  // wmv:compose needs at least three parts
        } catch (const CapacityError&) {
          continue;  // table-based learners cannot play factorized families
        }
        ASSERT_TRUE(g.lower.has_value());
        EXPECT_TRUE(g.lower->admits(g.transcript.mistake_count));
        EXPECT_GE(g.transcript.mistake_count, forced) << family << " " << learner;
      }
    }
  }
}

TEST(Greedy, Examples) {
  for (const std::string learner : {"zero", "halving", "wmv:bandit2", "solver-opt"}) {
    const auto g = play(GameSpec{"const:k=3", "bandit", learner, "greedy", 0, std::nullopt});
    EXPECT_GE(g.transcript.mistake_count, 2u) << learner;
  }
  const auto single = play(GameSpec{"table:k=2,rows=01", "bandit", "halving", "greedy", 0, {}});
  EXPECT_EQ(single.transcript.mistake_count, 0u);
}

TEST(Greedy, NeverBeatsTheOptimalLearner) {
  for (const std::string family : {"linear:q=2,n=2", "linear:q=3,n=1", "sparse:k=3,M=1,D=2",
                                   "sparse:k=2,M=2,D=3", "const:k=4"}) {
    for (const std::string model : {"std", "bandit", "amb:r=2", "agn:eta=1"}) {
      const auto parsed = parse_family(family);
      ExactSolver solver(*parsed.table(), FeedbackModel::parse(model));
      const auto g = play(GameSpec{family, model, "solver-opt", "greedy", 0, std::nullopt});
      EXPECT_LE(g.transcript.mistake_count, solver.value()) << family << " " << model;
    }
  }
}

TEST(SolverAdversary, ForcesTheOptimalValue) {
  for (const std::string learner : {"zero", "halving", "random", "solver-opt"}) {
    const auto g = play(GameSpec{"const:k=4", "bandit", learner, "solver-opt", 0, std::nullopt});
    EXPECT_EQ(g.transcript.mistake_count, 3u) << learner;
  }
}

TEST(Adversaries, AreRefereeLegalEverywhere) {
  const std::vector<std::pair<std::string, std::string>> settings = {
      {"linear:q=2,n=2", "std"},       {"linear:q=3,n=2", "bandit"},   {"linear:q=4,n=2", "bandit"},
      {"sparse:k=3,M=1,D=3", "amb:r=2"}, {"sparse:k=2,M=2,D=3", "amb:r=3"},
      {"linear:q=2,n=3", "agn:eta=2"}, {"sparse:k=3,M=1,D=2", "agn:eta=1"}};
  const std::vector<std::string> adversaries = {"greedy", "always-no", "random", "solver-opt",
                                                "agn-repeat", "agn-repeat:mode=combo", "cart-repeat",
                                                "lin-bandit"};
  std::size_t games = 0;
  for (const auto& [family_desc, model_desc] : settings) {
    const auto family = parse_family(family_desc);
    const auto model = FeedbackModel::parse(model_desc);
    for (const auto& adv : adversaries) {
      for (const std::string learner : {"zero", "halving", "random"}) {
        std::unique_ptr<Adversary> a;
        try {
          a = make_adversary(adv, family, model, 4);
        } catch (const ConfigError&) {
          continue;
        }
        auto l = make_learner(learner, family, model);
        const auto t = run_game(family, model, *l, *a, 3000, 4);
        const auto report = verify_transcript(t, family);
        EXPECT_TRUE(report.passed) << family_desc << " " << model_desc << " " << adv << ": " << report.failure;
        ++games;
      }
    }
  }
  EXPECT_GT(games, 60u);
}

TEST(Adversaries, UnknownNamesAreRejected) {
  const auto family = parse_family("linear:q=2,n=2");
  EXPECT_THROW(make_adversary("nemesis", family, FeedbackModel::bandit(), 0), ParseError);
  EXPECT_THROW(make_adversary("agn-repeat", family, FeedbackModel::bandit(), 0), ConfigError);
}
