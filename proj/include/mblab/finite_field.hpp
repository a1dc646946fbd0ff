#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mblab {

/// GF(p) for prime p <= 251, or GF(2^e) for e <= 8 with elements encoded as
/// polynomial bitmasks over GF(2).
class FieldSpec {
 public:
  /// Builds the field of order q. Throws PreconditionError if q is not a
  /// supported prime or power of two.
  static FieldSpec of_order(std::uint32_t q);

  /// Builds GF(2^e) with an explicit modulus bitmask (bit e must be set).
  /// The modulus is checked for irreducibility by trial division.
  static FieldSpec binary_extension(std::uint32_t degree, std::uint32_t modulus);

  /// Parses "gf:q".
  static FieldSpec parse(std::string_view descriptor);

  std::uint32_t order() const { return order_; }
  std::uint32_t characteristic() const { return characteristic_; }
  std::uint32_t degree() const { return degree_; }
  /// Irreducible polynomial bitmask; 0 for prime fields.
  std::uint32_t modulus() const { return modulus_; }

  std::string descriptor() const;

  bool operator==(const FieldSpec&) const = default;

 private:
  FieldSpec(std::uint32_t order, std::uint32_t characteristic, std::uint32_t degree,
            std::uint32_t modulus)
      : order_(order), characteristic_(characteristic), degree_(degree), modulus_(modulus) {}

  std::uint32_t order_;
  std::uint32_t characteristic_;
  std::uint32_t degree_;
  std::uint32_t modulus_;
};

bool is_prime(std::uint32_t n);

/// True iff `poly` (bitmask, degree >= 1) has no factor of lower positive degree over GF(2).
bool is_irreducible_gf2(std::uint32_t poly);

/// Product of two GF(2)[x] polynomials without reduction.
std::uint32_t gf2_poly_mul(std::uint32_t a, std::uint32_t b);

/// Remainder of `a` modulo `m` in GF(2)[x].
std::uint32_t gf2_poly_mod(std::uint32_t a, std::uint32_t m);

struct FieldElem {
  std::uint32_t value = 0;

  bool operator==(const FieldElem&) const = default;
  auto operator<=>(const FieldElem&) const = default;
};

/// Canonical element; throws StructuralError if value >= q.
FieldElem make_elem(std::uint32_t value, const FieldSpec& spec);

FieldElem ff_add(FieldElem a, FieldElem b, const FieldSpec& spec);
FieldElem ff_neg(FieldElem a, const FieldSpec& spec);
FieldElem ff_sub(FieldElem a, FieldElem b, const FieldSpec& spec);
FieldElem ff_mul(FieldElem a, FieldElem b, const FieldSpec& spec);
/// Multiplicative inverse by exhaustive search; throws PreconditionError for zero.
FieldElem ff_inv(FieldElem a, const FieldSpec& spec);

class FieldVector {
 public:
  FieldVector(FieldSpec spec, std::vector<FieldElem> components);

  /// The vector whose components are the base-q digits of `index`,
  /// most significant first.
  static FieldVector from_index(const FieldSpec& spec, std::size_t n, std::size_t index);

  const FieldSpec& spec() const { return spec_; }
  std::size_t size() const { return components_.size(); }
  FieldElem operator[](std::size_t i) const { return components_[i]; }
  const std::vector<FieldElem>& components() const { return components_; }

  /// Inverse of from_index.
  std::size_t index() const;

  /// "(c0,c1,...)".
  std::string label() const;

  bool operator==(const FieldVector& other) const {
    return spec_ == other.spec_ && components_ == other.components_;
  }

 private:
  FieldSpec spec_;
  std::vector<FieldElem> components_;
};

FieldElem ff_dot(const FieldVector& x, const FieldVector& y);

/// |{z in F_q^n : x.z = y.z}| by exhaustive enumeration. Requires x != y.
std::size_t count_agreeing(const FieldVector& x, const FieldVector& y);

}  // namespace mblab
