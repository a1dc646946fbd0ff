#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "mblab/bitset.hpp"
#include "mblab/finite_field.hpp"

namespace mblab {

using InputId = std::uint32_t;
using Value = std::uint32_t;
using FunctionId = std::uint32_t;

/// Upper limit on |F| x D for any materialized family.
inline constexpr std::size_t kMaxMatrixCells = std::size_t{1} << 24;

/// A finite function family stored as a |F| x D outputs matrix.
///
/// Rows are pairwise distinct and every entry is below the codomain size.
/// For every input the members are pre-partitioned by output value so that
/// version-space restriction is a single bitset operation.
class ExplicitFamily {
 public:
  struct ValueClass {
    Value value;
    Bitset members;
  };

  /// `outputs` is row-major, rows.size() == |F|, each of length D.
  /// Throws StructuralError on duplicate rows or out-of-range entries and
  /// CapacityError above kMaxMatrixCells.
  ExplicitFamily(std::string descriptor, std::vector<std::string> input_labels,
                 std::uint32_t codomain, const std::vector<std::vector<Value>>& rows);

  const std::string& descriptor() const { return descriptor_; }
  std::size_t size() const { return num_functions_; }
  std::size_t num_inputs() const { return labels_.size(); }
  std::uint32_t codomain() const { return codomain_; }
  const std::vector<std::string>& input_labels() const { return labels_; }
  const std::string& label(InputId x) const { return labels_[x]; }
  std::optional<InputId> find_input(std::string_view label) const;

  Value output(FunctionId f, InputId x) const { return outputs_[std::size_t{f} * labels_.size() + x]; }
  std::vector<Value> row(FunctionId f) const;

  /// Realized values at x, ascending, each with the rows producing it.
  const std::vector<ValueClass>& classes(InputId x) const { return classes_[x]; }
  /// Rows with f(x) = v (empty set when v is not realized).
  Bitset members_with(InputId x, Value v) const;

  Bitset all_members() const { return Bitset(num_functions_).set(); }

  /// Copy with a different descriptor (used when a parser rebuilds an equivalent family).
  ExplicitFamily relabeled(std::string descriptor) const;

 private:
  std::string descriptor_;
  std::vector<std::string> labels_;
  std::uint32_t codomain_;
  std::size_t num_functions_;
  std::vector<Value> outputs_;
  std::vector<std::vector<ValueClass>> classes_;
  std::unordered_map<std::string, InputId> label_index_;
};

nlohmann::ordered_json to_json(const ExplicitFamily& family);
ExplicitFamily explicit_family_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Constructions

/// All linear maps x -> a.x on F_q^n. Row a and column x are in FieldVector index order.
ExplicitFamily make_linear_family(const FieldSpec& spec, std::size_t n);

/// All functions on D labeled inputs z0..z{D-1} into [0,k) with at most M nonzero outputs.
ExplicitFamily make_sparse_family(std::uint32_t k, std::size_t M, std::size_t D);

/// One input, k constant functions.
ExplicitFamily make_const_family(std::uint32_t k);

/// CART_r(F): inputs are all r-tuples of F's inputs (first coordinate most
/// significant); tuple outputs are encoded in base k, first coordinate most significant.
ExplicitFamily cart_power(const ExplicitFamily& family, std::size_t r);

/// Decodes a cart output into its r coordinates.
std::vector<Value> decode_cart_value(Value v, std::uint32_t k, std::size_t r);

/// Truth table of g: {0,1}^k -> {0,1}; bit i of the table index is coordinate i.
struct BooleanCombiner {
  std::string name;  // "or", "and", "xor" or "table:<bits>"
  std::size_t arity = 0;
  std::vector<std::uint8_t> table;

  static BooleanCombiner named(std::string_view name, std::size_t arity);
  std::uint8_t operator()(std::uint32_t packed_bits) const { return table[packed_bits]; }
};

/// Materialized COMPOSE(F_1..F_k, g) with duplicate composed rows merged.
/// Throws PreconditionError for non-binary parts or mismatched input labels,
/// CapacityError when the product of part sizes exceeds `max_tuples`.
ExplicitFamily compose_family(const std::vector<std::shared_ptr<const ExplicitFamily>>& parts,
                              const BooleanCombiner& g, std::size_t max_tuples = 1'000'000);

/// Family on the disjoint union of both domains; inputs prefixed "a:" and "b:".
/// Row order is f1-major.
ExplicitFamily direct_sum(const ExplicitFamily& first, const ExplicitFamily& second);

/// Family from digit rows, e.g. {"012", "120"} with k=3; inputs x0..x{D-1}.
ExplicitFamily make_table_family(std::uint32_t k, const std::vector<std::string>& digit_rows);

// ---------------------------------------------------------------------------
// The composition lower-bound construction: T = {1..kM}, null element x
// (encoded 0), F_i = {f_{i,S} : |S| = M}, g = OR.

struct CompositionLayout {
  std::uint32_t k = 0;
  std::uint32_t M = 0;
  bool full_domain = false;
  /// Each input as k coordinates in {0 (null), 1..kM}.
  std::vector<std::vector<std::uint32_t>> tuples;

  std::optional<InputId> find(const std::vector<std::uint32_t>& tuple) const;
  static std::string tuple_label(const std::vector<std::uint32_t>& tuple);

  std::unordered_map<std::string, InputId> index;
};

/// Domain is either all of (T u {x})^k or only the two-value window inputs the
/// recursive adversary can issue.
CompositionLayout make_composition_layout(std::uint32_t k, std::uint32_t M, bool full_domain);

/// The k part families f_{i,S} over the layout's domain.
std::vector<std::shared_ptr<const ExplicitFamily>> composition_parts(const CompositionLayout& layout);

// ---------------------------------------------------------------------------

/// A family as seen by games: always has labels and codomain; has an explicit
/// table unless it is a composition too large to materialize, in which case the
/// factorized parts are the only representation.
class Family {
 public:
  struct Composition {
    std::vector<std::shared_ptr<const ExplicitFamily>> parts;
    BooleanCombiner g;
    std::shared_ptr<const CompositionLayout> layout;  // set for compose-lb
  };

  explicit Family(std::shared_ptr<const ExplicitFamily> table);
  Family(std::string descriptor, std::shared_ptr<const Composition> composition,
         std::shared_ptr<const ExplicitFamily> table);

  const std::string& descriptor() const { return descriptor_; }
  std::uint32_t codomain() const { return codomain_; }
  std::size_t num_inputs() const { return labels_->size(); }
  const std::string& label(InputId x) const { return (*labels_)[x]; }
  std::optional<InputId> find_input(std::string_view label) const;

  /// Null for factorized-only compositions.
  const ExplicitFamily* table() const { return table_.get(); }
  std::shared_ptr<const ExplicitFamily> table_ptr() const { return table_; }
  /// Null unless built by compose/compose-lb.
  const Composition* composition() const { return composition_.get(); }

  /// Throws CapacityError naming the operation when no table exists.
  const ExplicitFamily& require_table(std::string_view what) const;

 private:
  std::string descriptor_;
  std::uint32_t codomain_;
  const std::vector<std::string>* labels_;
  std::shared_ptr<const ExplicitFamily> table_;
  std::shared_ptr<const Composition> composition_;
};

/// Builds a family from the descriptor grammar:
///   linear:q=Q,n=N | sparse:k=K,M=M,D=D | const:k=K | table:k=K,rows=R1.R2...
///   cart:r=R,inner=(DESC) | dsum:(DESC),(DESC)
///   compose:g=or|and|xor|table:BITS,parts=((DESC),(DESC),...) or parts=NxDESC
///   compose-lb:k=K,M=M[,domain=full|adv]
/// Throws ParseError naming the offending token.
Family parse_family(std::string_view descriptor);

}  // namespace mblab
