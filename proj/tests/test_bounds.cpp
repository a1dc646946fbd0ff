#include <gtest/gtest.h>

#include <cmath>

#include "mblab/bounds.hpp"
#include "mblab/errors.hpp"
#include "mblab/family.hpp"

using namespace mblab;

namespace {

Rational integer(long long v) { return Rational(v); }

}  // namespace

TEST(Bounds, BanditTwoExamples) {
  EXPECT_EQ(bandit2_upper(4).threshold, 14);
  for (std::uint32_t k = 2; k <= 64; ++k) {
    EXPECT_EQ(bandit2_upper(k).threshold, integer(2 * k + static_cast<long long>(std::ceil(k * std::log(k)))));
  }
}

TEST(Bounds, AmbiguousExamples) {
  EXPECT_EQ(ambiguous_upper(4, 1, 1).threshold, 25);
  EXPECT_EQ(ambiguous_upper(8, 2, 1).threshold, 4711);
  for (std::uint32_t c = 1; c <= 4; ++c) {
    const double a = 1 / (4 * std::log(4.0));
    EXPECT_EQ(ambiguous_upper(4, 1, c).threshold,
              integer(static_cast<long long>(std::ceil(c * std::log(1 / a) / (0.25 - a)))));
  }
  EXPECT_THROW(ambiguous_upper(2, 1, 1), ConfigError);  // ln 2 < 1
  EXPECT_THROW(ambiguous_upper(4, 2, 1), ConfigError);
}

TEST(Bounds, AmbiguousBinaryFollowsItsFormula) {
  for (std::uint32_t r = 3; r <= 8; ++r) {
    const double a = 1 / (r * std::log(r));
    const double v = 2 * std::log(1 / a) / ((1 - a * r) / std::pow(2.0, r));
    EXPECT_EQ(ambiguous_binary_upper(r, 2).threshold, integer(static_cast<long long>(std::floor(v))));
    EXPECT_NEAR(ambiguous_binary_upper(r, 2).value, v, 1e-9 * v);
  }
  EXPECT_THROW(ambiguous_binary_upper(2, 1), ConfigError);
}

TEST(Bounds, AgnosticForms) {
  EXPECT_EQ(agnostic_binary_upper(3, 2).threshold, 22);  // floor(4.4035 * 5)
  EXPECT_EQ(agnostic_binary_upper(1, 0).threshold, 4);
  EXPECT_EQ(agnostic_binary_upper(20, 0).threshold, 88);  // 88.07
  for (std::uint32_t k = 3; k <= 8; ++k) {
    const double a = 1 / (k * std::log(k));
    const double v = 4 * std::log(1 / a) / -std::log((k - 1.0) / k + a);
    EXPECT_EQ(agnostic_general_upper(k, 2, 2).threshold, integer(static_cast<long long>(std::floor(v))));
  }
  EXPECT_THROW(agnostic_general_upper(2, 1, 1), ConfigError);
}

TEST(Bounds, SmallMAndCompose) {
  EXPECT_EQ(small_m_upper(2, 2, 1).threshold, 4);
  EXPECT_EQ(small_m_upper(3, 4, 2).threshold, 144);
  const double a = 1 / (4 * std::log(3.0));
  const double v = 2 * std::log(1 / a) / std::log(1 / (0.5 + 1 / (2 * std::log(3.0))));
  EXPECT_EQ(compose_upper(3, 2).threshold, integer(static_cast<long long>(std::floor(v))));
  EXPECT_THROW(compose_upper(2, 1), ConfigError);
}

TEST(Bounds, LowerBoundExamples) {
  EXPECT_EQ(lin_bandit_lower(2).threshold, 0);
  EXPECT_EQ(lin_bandit_lower(4).threshold, 2);
  EXPECT_EQ(lin_bandit_lower(8).threshold, 4);
  EXPECT_EQ(lin_bandit_lower(16).threshold, 16);
  EXPECT_EQ(agnostic_repeat_lower(3, 2).threshold, 6);
  EXPECT_EQ(compose_lower(8, 1).threshold, 12);
  EXPECT_EQ(compose_lower(2, 1).threshold, 1);
  EXPECT_EQ(compose_lower(4, 2).threshold, 8);
  EXPECT_EQ(compose_lower(8, 1).exact_text(), "12/1");
  EXPECT_THROW(compose_lower(6, 1), ConfigError);
}

TEST(Bounds, CartLowerIsTheSparseFamilySizeMinusOne) {
  EXPECT_EQ(cart_lower(2, 1, 2).threshold, 2);
  EXPECT_EQ(cart_lower(3, 1, 2).threshold, 4);
  EXPECT_EQ(cart_lower(2, 2, 2).threshold, 3);
  for (std::uint32_t k = 2; k <= 4; ++k) {
    for (std::uint32_t m = 1; m <= 3; ++m) {
      for (std::uint32_t r = m; r <= 5; ++r) {
        const auto size = make_sparse_family(k, m, r).size();
        EXPECT_EQ(cart_lower(k, m, r).threshold, integer(static_cast<long long>(size) - 1))
            << k << " " << m << " " << r;
      }
    }
  }
}

TEST(Bounds, AdmitsRespectsDirection) {
  const auto up = bandit2_upper(4);
  EXPECT_TRUE(up.admits(14));
  EXPECT_FALSE(up.admits(15));
  const auto low = compose_lower(8, 1);
  EXPECT_TRUE(low.admits(12));
  EXPECT_FALSE(low.admits(11));
  BoundSpec half{"h", BoundSpec::Direction::Lower, Rational(3, 2), 1.5, ""};
  EXPECT_FALSE(half.admits(1));
  EXPECT_TRUE(half.admits(2));
  EXPECT_EQ(half.exact_text(), "3/2");
}
