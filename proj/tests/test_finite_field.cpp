#include <gtest/gtest.h>

#include "mblab/errors.hpp"
#include "mblab/finite_field.hpp"

using namespace mblab;

namespace {

// Schoolbook GF(2^e) product: shift-and-add, then long division by the modulus.
std::uint32_t slow_gf2_mul(std::uint32_t a, std::uint32_t b, std::uint32_t modulus) {
  std::uint32_t prod = 0;
  for (int i = 0; i < 16; ++i) {
    if ((b >> i) & 1) prod ^= a << i;
  }
  const int deg = 31 - __builtin_clz(modulus);
  for (int i = 31; i >= deg; --i) {
    if ((prod >> i) & 1) prod ^= modulus << (i - deg);
  }
  return prod;
}

FieldElem e(std::uint32_t v) { return FieldElem{v}; }

const std::vector<std::uint32_t> kOrders = {2, 3, 4, 5, 7, 8, 11, 13, 16};

}  // namespace

TEST(FiniteField, AdditionExamples) {
  EXPECT_EQ(ff_add(e(3), e(4), FieldSpec::of_order(5)), e(2));
  EXPECT_EQ(ff_add(e(2), e(2), FieldSpec::of_order(4)), e(0));
  EXPECT_EQ(ff_add(e(1), e(0), FieldSpec::of_order(2)), e(1));
}

TEST(FiniteField, MultiplicationExamples) {
  EXPECT_EQ(ff_mul(e(3), e(4), FieldSpec::of_order(5)), e(2));
  const auto gf4 = FieldSpec::binary_extension(2, 0b111);
  EXPECT_EQ(ff_mul(e(2), e(2), gf4), e(3));
  EXPECT_EQ(ff_mul(e(1), e(1), FieldSpec::of_order(2)), e(1));
}

TEST(FiniteField, DotExamples) {
  const auto gf2 = FieldSpec::of_order(2);
  EXPECT_EQ(ff_dot(FieldVector(gf2, {e(1), e(1)}), FieldVector(gf2, {e(1), e(1)})), e(0));
  const auto gf3 = FieldSpec::of_order(3);
  EXPECT_EQ(ff_dot(FieldVector(gf3, {e(1), e(2)}), FieldVector(gf3, {e(2), e(2)})), e(0));
  const auto gf4 = FieldSpec::of_order(4);
  const std::uint32_t expected = slow_gf2_mul(2, 3, gf4.modulus()) ^ 3;
  EXPECT_EQ(ff_dot(FieldVector(gf4, {e(2), e(3)}), FieldVector(gf4, {e(3), e(1)})), e(expected));
}

TEST(FiniteField, DotRejectsMismatch) {
  const auto gf3 = FieldSpec::of_order(3);
  EXPECT_THROW(ff_dot(FieldVector(gf3, {e(1)}), FieldVector(gf3, {e(1), e(2)})), StructuralError);
  EXPECT_THROW(ff_dot(FieldVector(gf3, {e(1)}), FieldVector(FieldSpec::of_order(5), {e(1)})),
               StructuralError);
}

TEST(FiniteField, ElementsOutOfRangeRejected) {
  EXPECT_THROW(make_elem(5, FieldSpec::of_order(5)), StructuralError);
  EXPECT_EQ(make_elem(4, FieldSpec::of_order(5)), e(4));
}

TEST(FiniteField, UnsupportedOrdersRejected) {
  for (std::uint32_t q : {0u, 1u, 6u, 9u, 12u, 25u, 512u}) {
    EXPECT_THROW(FieldSpec::of_order(q), PreconditionError) << q;
  }
  EXPECT_THROW(FieldSpec::binary_extension(2, 0b101), PreconditionError);  // x^2+1 = (x+1)^2
  EXPECT_THROW(FieldSpec::parse("gf:6"), Error);
  EXPECT_EQ(FieldSpec::parse("gf:8").order(), 8u);
}

TEST(FiniteField, BinaryMultiplicationMatchesPolynomialOracle) {
  for (std::uint32_t q : {4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
    const auto spec = FieldSpec::of_order(q);
    ASSERT_TRUE(is_irreducible_gf2(spec.modulus()));
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        ASSERT_EQ(ff_mul(e(a), e(b), spec).value, slow_gf2_mul(a, b, spec.modulus()));
      }
    }
  }
}

TEST(FiniteField, AxiomsHoldExhaustively) {
  for (auto q : kOrders) {
    const auto s = FieldSpec::of_order(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      ASSERT_EQ(ff_add(e(a), e(0), s), e(a));
      ASSERT_EQ(ff_mul(e(a), e(1), s), e(a));
      ASSERT_EQ(ff_add(e(a), ff_neg(e(a), s), s), e(0));
      if (a != 0) ASSERT_EQ(ff_mul(e(a), ff_inv(e(a), s), s), e(1));
      for (std::uint32_t b = 0; b < q; ++b) {
        ASSERT_EQ(ff_add(e(a), e(b), s), ff_add(e(b), e(a), s));
        ASSERT_EQ(ff_mul(e(a), e(b), s), ff_mul(e(b), e(a), s));
        ASSERT_LT(ff_mul(e(a), e(b), s).value, q);
        ASSERT_EQ(ff_sub(ff_add(e(a), e(b), s), e(b), s), e(a));
        for (std::uint32_t c = 0; c < q; ++c) {
          ASSERT_EQ(ff_add(ff_add(e(a), e(b), s), e(c), s), ff_add(e(a), ff_add(e(b), e(c), s), s));
          ASSERT_EQ(ff_mul(ff_mul(e(a), e(b), s), e(c), s), ff_mul(e(a), ff_mul(e(b), e(c), s), s));
          ASSERT_EQ(ff_mul(e(a), ff_add(e(b), e(c), s), s),
                    ff_add(ff_mul(e(a), e(b), s), ff_mul(e(a), e(c), s), s));
        }
      }
    }
    EXPECT_THROW(ff_inv(e(0), s), PreconditionError);
  }
}

TEST(FiniteField, VectorIndexRoundTrip) {
  const auto s = FieldSpec::of_order(5);
  for (std::size_t i = 0; i < 125; ++i) {
    const auto v = FieldVector::from_index(s, 3, i);
    ASSERT_EQ(v.index(), i);
  }
  EXPECT_EQ(FieldVector::from_index(s, 2, 7).label(), "(1,2)");
}

TEST(FiniteField, CountAgreeingExamples) {
  const auto gf2 = FieldSpec::of_order(2);
  EXPECT_EQ(count_agreeing(FieldVector(gf2, {e(0), e(1)}), FieldVector(gf2, {e(1), e(0)})), 2u);
  const auto gf3 = FieldSpec::of_order(3);
  EXPECT_EQ(count_agreeing(FieldVector(gf3, {e(1)}), FieldVector(gf3, {e(2)})), 1u);
  EXPECT_THROW(count_agreeing(FieldVector(gf3, {e(1)}), FieldVector(gf3, {e(1)})), PreconditionError);
}

TEST(FiniteField, CountAgreeingIsPowerExhaustively) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const auto s = FieldSpec::of_order(q);
    std::size_t size = 1;
    for (std::size_t n = 1; n <= 3; ++n) {
      const std::size_t expected = size;  // q^(n-1)
      size *= q;
      for (std::size_t x = 0; x < size; ++x) {
        for (std::size_t y = 0; y < size; ++y) {
          if (x == y) continue;
          ASSERT_EQ(count_agreeing(FieldVector::from_index(s, n, x), FieldVector::from_index(s, n, y)),
                    expected)
              << "q=" << q << " n=" << n;
        }
      }
    }
  }
}
