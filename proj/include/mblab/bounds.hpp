#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mblab {

using Rational = boost::multiprecision::cpp_rational;

/// A closed-form mistake bound evaluated at concrete parameters.
///
/// `threshold` is what integer mistake counts are compared against. It equals
/// the bound exactly when the closed form is rational; for forms involving
/// logarithms it is the floor (upper bounds) or ceiling (lower bounds) of the
/// real value, which gives the same verdict on integers.
struct BoundSpec {
  enum class Direction { Upper, Lower };

  std::string name;
  Direction direction = Direction::Upper;
  Rational threshold;
  double value = 0;
  std::string formula;

  bool admits(std::size_t mistakes) const;
  /// "p/q" for the threshold.
  std::string exact_text() const;
};

/// 2k + ceil(k ln k) for families with opt_std = 2 under bandit feedback.
BoundSpec bandit2_upper(std::uint32_t k);
/// floor(4.4035 (C + eta)) for binary families under agnostic feedback.
BoundSpec agnostic_binary_upper(std::uint32_t c, std::uint32_t eta);
/// (C + eta) ln(1/a) / -ln((k-1)/k + a) with a = 1/(k ln k).
BoundSpec agnostic_general_upper(std::uint32_t k, std::uint32_t c, std::uint32_t eta);
/// ceil(C ln(1/a) / (1/k^r - a r / k^(r-1))) with a = 1/(k ln k). Needs ln k > r.
BoundSpec ambiguous_upper(std::uint32_t k, std::uint32_t r, std::uint32_t c);
/// C ln(1/a) / (1/2^r - a r / 2^r) with a = 1/(r ln r), binary codomain.
BoundSpec ambiguous_binary_upper(std::uint32_t r, std::uint32_t c);
/// (r k)^M for opt_std = M <= r.
BoundSpec small_m_upper(std::uint32_t r, std::uint32_t k, std::uint32_t m);
/// B ln(1/a) / ln(1 / (1/2 + 1/(2 ln k))) with a = 1/((k+1) ln k).
BoundSpec compose_upper(std::uint32_t k, std::uint32_t b);

/// floor(log2(k) / 2) * k / 2 for the linear bandit adversary.
BoundSpec lin_bandit_lower(std::uint32_t k);
/// k eta for the repeated-denial agnostic adversary.
BoundSpec agnostic_repeat_lower(std::uint32_t k, std::uint32_t eta);
/// sum_{i<=M} C(r,i) (k-1)^i - 1 for the repeated-batch adversary.
BoundSpec cart_lower(std::uint32_t k, std::uint32_t m, std::uint32_t r);
/// k M log2(k) / 2 for the recursive composition adversary.
BoundSpec compose_lower(std::uint32_t k, std::uint32_t m);

}  // namespace mblab
