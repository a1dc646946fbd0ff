#include "mblab/bounds.hpp"

#include <bit>
#include <cmath>

#include "mblab/errors.hpp"

namespace mblab {

namespace {

using boost::multiprecision::cpp_int;

BoundSpec integral(std::string name, BoundSpec::Direction dir, cpp_int v, std::string formula) {
  BoundSpec b;
  b.name = std::move(name);
  b.direction = dir;
  b.threshold = Rational(v);
  b.value = v.convert_to<double>();
  b.formula = std::move(formula);
  return b;
}

BoundSpec real_upper(std::string name, double value, std::string formula) {
  if (!std::isfinite(value) || value < 0) throw ConfigError(name + " is undefined at these parameters");
  return BoundSpec{std::move(name), BoundSpec::Direction::Upper,
                   Rational(static_cast<long long>(std::floor(value))), value, std::move(formula)};
}

cpp_int power(cpp_int base, std::uint32_t e) {
  cpp_int out = 1;
  for (std::uint32_t i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

bool BoundSpec::admits(std::size_t mistakes) const {
  const Rational m(static_cast<unsigned long long>(mistakes));
  return direction == Direction::Upper ? m <= threshold : m >= threshold;
}

std::string BoundSpec::exact_text() const {
  return boost::multiprecision::numerator(threshold).str() + "/" +
         boost::multiprecision::denominator(threshold).str();
}

BoundSpec bandit2_upper(std::uint32_t k) {
  const auto v = 2 * static_cast<long long>(k) + static_cast<long long>(std::ceil(k * std::log(k)));
  return integral("bandit2_upper", BoundSpec::Direction::Upper, v, "2k + ceil(k ln k)");
}

BoundSpec agnostic_binary_upper(std::uint32_t c, std::uint32_t eta) {
  const cpp_int scaled = cpp_int(44035) * (c + eta);
  BoundSpec b = integral("agnostic_binary_upper", BoundSpec::Direction::Upper, scaled / 10000,
                         "floor(4.4035 (C + eta))");
  b.value = 4.4035 * (c + eta);
  return b;
}

BoundSpec agnostic_general_upper(std::uint32_t k, std::uint32_t c, std::uint32_t eta) {
  if (k < 3) throw ConfigError("agnostic_general_upper needs k >= 3 so that k alpha < 1");
  const double a = 1.0 / (k * std::log(k));
  return real_upper("agnostic_general_upper",
                    (c + eta) * std::log(1 / a) / -std::log((k - 1.0) / k + a),
                    "(C + eta) ln(1/a) / -ln((k-1)/k + a), a = 1/(k ln k)");
}

BoundSpec ambiguous_upper(std::uint32_t k, std::uint32_t r, std::uint32_t c) {
  const double a = 1.0 / (k * std::log(k));
  const double rate = 1.0 / std::pow(k, r) - a * r / std::pow(k, r - 1.0);
  if (rate <= 0) throw ConfigError("ambiguous_upper needs ln k > r");
  const double v = std::ceil(c * std::log(1 / a) / rate);
  BoundSpec b = integral("ambiguous_upper", BoundSpec::Direction::Upper,
                         cpp_int(static_cast<long long>(v)),
                         "ceil(C ln(1/a) / (1/k^r - a r/k^(r-1))), a = 1/(k ln k)");
  return b;
}

BoundSpec ambiguous_binary_upper(std::uint32_t r, std::uint32_t c) {
  if (r < 3) throw ConfigError("ambiguous_binary_upper needs r >= 3");
  const double a = 1.0 / (r * std::log(r));
  const double rate = (1.0 - a * r) / std::pow(2.0, r);
  return real_upper("ambiguous_binary_upper", c * std::log(1 / a) / rate,
                    "C ln(1/a) / (1/2^r - a r/2^r), a = 1/(r ln r)");
}

BoundSpec small_m_upper(std::uint32_t r, std::uint32_t k, std::uint32_t m) {
  return integral("small_m_upper", BoundSpec::Direction::Upper, power(cpp_int(r) * k, m), "(r k)^M");
}

BoundSpec compose_upper(std::uint32_t k, std::uint32_t b) {
  if (k < 3) throw ConfigError("compose_upper needs k >= 3 so that (k+1) alpha < 1");
  const double a = 1.0 / ((k + 1) * std::log(k));
  return real_upper("compose_upper",
                    b * std::log(1 / a) / std::log(1 / (0.5 + 1 / (2 * std::log(k)))),
                    "B ln(1/a) / ln(1/(1/2 + 1/(2 ln k))), a = 1/((k+1) ln k)");
}

BoundSpec lin_bandit_lower(std::uint32_t k) {
  const std::uint32_t phases = static_cast<std::uint32_t>(std::bit_width(k) - 1) / 2;
  return integral("lin_bandit_lower", BoundSpec::Direction::Lower, cpp_int(phases) * (k / 2),
                  "floor(log2(k)/2) k/2");
}

BoundSpec agnostic_repeat_lower(std::uint32_t k, std::uint32_t eta) {
  return integral("agnostic_repeat_lower", BoundSpec::Direction::Lower, cpp_int(k) * eta, "k eta");
}

BoundSpec cart_lower(std::uint32_t k, std::uint32_t m, std::uint32_t r) {
  cpp_int total = 0;
  cpp_int binom = 1;
  for (std::uint32_t i = 0; i <= m && i <= r; ++i) {
    total += binom * power(cpp_int(k - 1), i);
    binom = binom * (r - i) / (i + 1);
  }
  return integral("cart_lower", BoundSpec::Direction::Lower, total - 1,
                  "sum_{i<=M} C(r,i) (k-1)^i - 1");
}

BoundSpec compose_lower(std::uint32_t k, std::uint32_t m) {
  if (k < 2 || !std::has_single_bit(k)) throw ConfigError("compose_lower needs k a power of 2");
  const auto levels = static_cast<std::uint32_t>(std::countr_zero(k));
  BoundSpec b;
  b.name = "compose_lower";
  b.direction = BoundSpec::Direction::Lower;
  b.threshold = Rational(cpp_int(k) * m * levels, 2);
  b.value = 0.5 * k * m * levels;
  b.formula = "k M log2(k) / 2";
  return b;
}

}  // namespace mblab
