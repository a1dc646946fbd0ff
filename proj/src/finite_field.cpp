#include "mblab/finite_field.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <sstream>

#include "mblab/errors.hpp"

namespace mblab {

namespace {

// Default moduli for GF(2^e), indexed by e.
constexpr std::array<std::uint32_t, 9> kBinaryModuli = {
    0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0b100011011};

int poly_degree(std::uint32_t p) { return p == 0 ? -1 : 31 - std::countl_zero(p); }

void require_same(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) {
    throw StructuralError("field spec mismatch: " + a.descriptor() + " vs " + b.descriptor());
  }
}

void require_valid(FieldElem a, const FieldSpec& spec) {
  if (a.value >= spec.order()) {
    throw StructuralError("element " + std::to_string(a.value) + " out of range for " +
                          spec.descriptor());
  }
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t gf2_poly_mul(std::uint32_t a, std::uint32_t b) {
  std::uint32_t out = 0;
  while (b != 0) {
    if (b & 1u) out ^= a;
    a <<= 1;
    b >>= 1;
  }
  return out;
}

std::uint32_t gf2_poly_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = poly_degree(m);
  if (dm < 0) throw PreconditionError("polynomial modulus is zero");
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) {
    a ^= m << (da - dm);
  }
  return a;
}

bool is_irreducible_gf2(std::uint32_t poly) {
  const int deg = poly_degree(poly);
  if (deg < 1) return false;
  // Trial division by every polynomial of degree 1..deg-1.
  for (std::uint32_t d = 2; poly_degree(d) < deg; ++d) {
    if (gf2_poly_mod(poly, d) == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::of_order(std::uint32_t q) {
  if (q >= 2 && q <= 251 && is_prime(q)) return FieldSpec(q, q, 1, 0);
  if (q >= 4 && q <= 256 && std::has_single_bit(q)) {
    const auto e = static_cast<std::uint32_t>(std::countr_zero(q));
    return binary_extension(e, kBinaryModuli[e]);
  }
  throw PreconditionError("unsupported field order " + std::to_string(q));
}

FieldSpec FieldSpec::binary_extension(std::uint32_t degree, std::uint32_t modulus) {
  if (degree < 2 || degree > 8) {
    throw PreconditionError("GF(2^e) supported for 2 <= e <= 8, got e=" + std::to_string(degree));
  }
  if (poly_degree(modulus) != static_cast<int>(degree)) {
    throw PreconditionError("modulus degree does not match e=" + std::to_string(degree));
  }
  if (!is_irreducible_gf2(modulus)) {
    throw PreconditionError("modulus " + std::to_string(modulus) + " is reducible over GF(2)");
  }
  return FieldSpec(1u << degree, 2, degree, modulus);
}

FieldSpec FieldSpec::parse(std::string_view descriptor) {
  constexpr std::string_view prefix = "gf:";
  if (!descriptor.starts_with(prefix)) {
    throw ParseError("field descriptor must look like gf:q, got '" + std::string(descriptor) + "'");
  }
  const auto digits = descriptor.substr(prefix.size());
  std::uint32_t q = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), q);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ParseError("bad field order '" + std::string(digits) + "'");
  }
  try {
    return of_order(q);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

std::string FieldSpec::descriptor() const { return "gf:" + std::to_string(order_); }

FieldElem make_elem(std::uint32_t value, const FieldSpec& spec) {
  FieldElem e{value};
  require_valid(e, spec);
  return e;
}

FieldElem ff_add(FieldElem a, FieldElem b, const FieldSpec& spec) {
  require_valid(a, spec);
  require_valid(b, spec);
  if (spec.degree() > 1) return {a.value ^ b.value};
  return {(a.value + b.value) % spec.order()};
}

FieldElem ff_neg(FieldElem a, const FieldSpec& spec) {
  require_valid(a, spec);
  if (spec.degree() > 1 || a.value == 0) return a;
  return {spec.order() - a.value};
}

FieldElem ff_sub(FieldElem a, FieldElem b, const FieldSpec& spec) {
  return ff_add(a, ff_neg(b, spec), spec);
}

FieldElem ff_mul(FieldElem a, FieldElem b, const FieldSpec& spec) {
  require_valid(a, spec);
  require_valid(b, spec);
  if (spec.degree() == 1) return {(a.value * b.value) % spec.order()};
  // Shift-and-reduce: keep the running multiple of `a` below degree e.
  const std::uint32_t top = 1u << spec.degree();
  std::uint32_t acc = 0;
  std::uint32_t shifted = a.value;
  for (std::uint32_t bits = b.value; bits != 0; bits >>= 1) {
    if (bits & 1u) acc ^= shifted;
    shifted <<= 1;
    if (shifted & top) shifted ^= spec.modulus();
  }
  return {acc};
}

FieldElem ff_inv(FieldElem a, const FieldSpec& spec) {
  require_valid(a, spec);
  if (a.value == 0) throw PreconditionError("zero has no multiplicative inverse");
  for (std::uint32_t v = 1; v < spec.order(); ++v) {
    if (ff_mul(a, {v}, spec).value == 1) return {v};
  }
  throw StructuralError("no inverse found; field arithmetic is broken");
}

FieldVector::FieldVector(FieldSpec spec, std::vector<FieldElem> components)
    : spec_(spec), components_(std::move(components)) {
  for (auto c : components_) require_valid(c, spec_);
}

FieldVector FieldVector::from_index(const FieldSpec& spec, std::size_t n, std::size_t index) {
  std::vector<FieldElem> comps(n);
  for (std::size_t i = n; i-- > 0;) {
    comps[i].value = static_cast<std::uint32_t>(index % spec.order());
    index /= spec.order();
  }
  if (index != 0) throw StructuralError("vector index out of range");
  return FieldVector(spec, std::move(comps));
}

std::size_t FieldVector::index() const {
  std::size_t out = 0;
  for (auto c : components_) out = out * spec_.order() + c.value;
  return out;
}

std::string FieldVector::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) os << ',';
    os << components_[i].value;
  }
  os << ')';
  return os.str();
}

FieldElem ff_dot(const FieldVector& x, const FieldVector& y) {
  require_same(x.spec(), y.spec());
  if (x.size() != y.size()) {
    throw StructuralError("dot product of vectors with lengths " + std::to_string(x.size()) +
                          " and " + std::to_string(y.size()));
  }
  FieldElem acc{0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc = ff_add(acc, ff_mul(x[i], y[i], x.spec()), x.spec());
  }
  return acc;
}

std::size_t count_agreeing(const FieldVector& x, const FieldVector& y) {
  require_same(x.spec(), y.spec());
  if (x.size() != y.size()) throw StructuralError("count_agreeing: length mismatch");
  if (x == y) throw PreconditionError("count_agreeing requires distinct vectors");
  std::size_t total = 1;
  for (std::size_t i = 0; i < x.size(); ++i) total *= x.spec().order();
  std::size_t count = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto z = FieldVector::from_index(x.spec(), x.size(), idx);
    if (ff_dot(x, z) == ff_dot(y, z)) ++count;
  }
  return count;
}

}  // namespace mblab
