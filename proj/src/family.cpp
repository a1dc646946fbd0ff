#include "mblab/family.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"

namespace mblab {

namespace {

struct RowHash {
  std::size_t operator()(const std::vector<Value>& row) const {
    std::size_t seed = row.size();
    for (auto v : row) boost::hash_combine(seed, v);
    return seed;
  }
};

std::size_t checked_product(std::size_t a, std::size_t b, std::string_view what) {
  if (a != 0 && b > kMaxMatrixCells / a + 1) {
    throw CapacityError(std::string(what) + " exceeds the materialization budget");
  }
  return a * b;
}

std::size_t ipow(std::size_t base, std::size_t exp, std::string_view what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out = checked_product(out, base, what);
  return out;
}

Value digit_value(char c) {
  if (c >= '0' && c <= '9') return static_cast<Value>(c - '0');
  if (c >= 'a' && c <= 'z') return static_cast<Value>(c - 'a' + 10);
  throw ParseError(std::string("bad table digit '") + c + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// ExplicitFamily

ExplicitFamily::ExplicitFamily(std::string descriptor, std::vector<std::string> input_labels,
                               std::uint32_t codomain,
                               const std::vector<std::vector<Value>>& rows)
    : descriptor_(std::move(descriptor)),
      labels_(std::move(input_labels)),
      codomain_(codomain),
      num_functions_(rows.size()) {
  if (codomain_ < 1) throw StructuralError("codomain size must be positive");
  if (rows.empty()) throw StructuralError("a family needs at least one function");
  if (checked_product(rows.size(), std::max<std::size_t>(labels_.size(), 1), descriptor_) >
      kMaxMatrixCells) {
    throw CapacityError(descriptor_ + " exceeds the materialization budget");
  }
  const std::size_t D = labels_.size();
  outputs_.reserve(rows.size() * D);
  std::unordered_set<std::vector<Value>, RowHash> seen;
  for (const auto& row : rows) {
    if (row.size() != D) throw StructuralError("row length does not match the number of inputs");
    for (auto v : row) {
      if (v >= codomain_) {
        throw StructuralError("entry " + std::to_string(v) + " outside codomain of size " +
                              std::to_string(codomain_));
      }
    }
    if (!seen.insert(row).second) throw StructuralError("duplicate function in " + descriptor_);
    outputs_.insert(outputs_.end(), row.begin(), row.end());
  }
  for (InputId x = 0; x < D; ++x) {
    if (!label_index_.emplace(labels_[x], x).second) {
      throw StructuralError("duplicate input label '" + labels_[x] + "'");
    }
  }
  classes_.resize(D);
  for (InputId x = 0; x < D; ++x) {
    std::map<Value, Bitset> by_value;
    for (FunctionId f = 0; f < num_functions_; ++f) {
      auto [it, inserted] = by_value.try_emplace(output(f, x), Bitset(num_functions_));
      it->second.set(f);
    }
    for (auto& [v, members] : by_value) classes_[x].push_back({v, std::move(members)});
  }
}

std::optional<InputId> ExplicitFamily::find_input(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Value> ExplicitFamily::row(FunctionId f) const {
  const auto begin = outputs_.begin() + static_cast<std::ptrdiff_t>(std::size_t{f} * num_inputs());
  return {begin, begin + static_cast<std::ptrdiff_t>(num_inputs())};
}

Bitset ExplicitFamily::members_with(InputId x, Value v) const {
  for (const auto& c : classes_[x]) {
    if (c.value == v) return c.members;
  }
  return Bitset(num_functions_);
}

ExplicitFamily ExplicitFamily::relabeled(std::string descriptor) const {
  ExplicitFamily copy = *this;
  copy.descriptor_ = std::move(descriptor);
  return copy;
}

nlohmann::ordered_json to_json(const ExplicitFamily& family) {
  nlohmann::ordered_json j;
  j["descriptor"] = family.descriptor();
  j["input_labels"] = family.input_labels();
  j["k"] = family.codomain();
  auto rows = nlohmann::ordered_json::array();
  for (FunctionId f = 0; f < family.size(); ++f) rows.push_back(family.row(f));
  j["outputs"] = std::move(rows);
  return j;
}

ExplicitFamily explicit_family_from_json(const nlohmann::json& j) {
  try {
    return ExplicitFamily(j.at("descriptor").get<std::string>(),
                          j.at("input_labels").get<std::vector<std::string>>(),
                          j.at("k").get<std::uint32_t>(),
                          j.at("outputs").get<std::vector<std::vector<Value>>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed family JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Constructions

ExplicitFamily make_linear_family(const FieldSpec& spec, std::size_t n) {
  if (n == 0) throw PreconditionError("linear family needs n >= 1");
  const std::size_t count = ipow(spec.order(), n, "linear family");
  checked_product(count, count, "linear family");
  if (count * count > kMaxMatrixCells) throw CapacityError("linear family exceeds the budget");
  std::vector<FieldVector> vectors;
  vectors.reserve(count);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) {
    vectors.push_back(FieldVector::from_index(spec, n, i));
    labels.push_back(vectors.back().label());
  }
  std::vector<std::vector<Value>> rows(count, std::vector<Value>(count));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t x = 0; x < count; ++x) rows[a][x] = ff_dot(vectors[a], vectors[x]).value;
  }
  return ExplicitFamily("linear:q=" + std::to_string(spec.order()) + ",n=" + std::to_string(n),
                        std::move(labels), spec.order(), rows);
}

ExplicitFamily make_sparse_family(std::uint32_t k, std::size_t M, std::size_t D) {
  if (k < 2) throw PreconditionError("sparse family needs k >= 2");
  if (D < M) throw PreconditionError("sparse family needs D >= M");
  std::vector<std::vector<Value>> rows;
  std::vector<Value> current(D, 0);
  // Lexicographic enumeration of [0,k)^D restricted to <= M nonzero entries.
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t budget) -> void {
    if (pos == D) {
      rows.push_back(current);
      if (rows.size() * std::max<std::size_t>(D, 1) > kMaxMatrixCells) {
        throw CapacityError("sparse family exceeds the materialization budget");
      }
      return;
    }
    for (Value v = 0; v < k; ++v) {
      if (v != 0 && budget == 0) break;
      current[pos] = v;
      self(self, pos + 1, v == 0 ? budget : budget - 1);
    }
    current[pos] = 0;
  };
  recurse(recurse, 0, M);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < D; ++i) labels.push_back("z" + std::to_string(i));
  return ExplicitFamily("sparse:k=" + std::to_string(k) + ",M=" + std::to_string(M) +
                            ",D=" + std::to_string(D),
                        std::move(labels), k, rows);
}

ExplicitFamily make_const_family(std::uint32_t k) {
  if (k < 1) throw PreconditionError("const family needs k >= 1");
  std::vector<std::vector<Value>> rows;
  for (Value v = 0; v < k; ++v) rows.push_back({v});
  return ExplicitFamily("const:k=" + std::to_string(k), {"x0"}, k, rows);
}

ExplicitFamily cart_power(const ExplicitFamily& family, std::size_t r) {
  if (r == 0) throw PreconditionError("cart power needs r >= 1");
  const std::size_t D = family.num_inputs();
  const std::size_t tuples = ipow(D, r, "cart power inputs");
  const std::size_t codomain = ipow(family.codomain(), r, "cart power codomain");
  checked_product(tuples, family.size(), "cart power");
  if (tuples * family.size() > kMaxMatrixCells || codomain > UINT32_MAX) {
    throw CapacityError("cart power exceeds the materialization budget");
  }
  std::vector<std::string> labels(tuples);
  std::vector<std::vector<InputId>> coords(tuples, std::vector<InputId>(r));
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (std::size_t j = r; j-- > 0;) {
      coords[t][j] = static_cast<InputId>(rest % D);
      rest /= D;
    }
    std::string label = "[";
    for (std::size_t j = 0; j < r; ++j) {
      if (j) label += ';';
      label += family.label(coords[t][j]);
    }
    labels[t] = label + "]";
  }
  std::vector<std::vector<Value>> rows(family.size(), std::vector<Value>(tuples));
  for (FunctionId f = 0; f < family.size(); ++f) {
    for (std::size_t t = 0; t < tuples; ++t) {
      Value v = 0;
      for (std::size_t j = 0; j < r; ++j) v = v * family.codomain() + family.output(f, coords[t][j]);
      rows[f][t] = v;
    }
  }
  return ExplicitFamily("cart:r=" + std::to_string(r) + ",inner=(" + family.descriptor() + ")",
                        std::move(labels), static_cast<std::uint32_t>(codomain), rows);
}

std::vector<Value> decode_cart_value(Value v, std::uint32_t k, std::size_t r) {
  std::vector<Value> out(r);
  for (std::size_t j = r; j-- > 0;) {
    out[j] = v % k;
    v /= k;
  }
  return out;
}

BooleanCombiner BooleanCombiner::named(std::string_view name, std::size_t arity) {
  if (arity == 0 || arity > 16) throw PreconditionError("combiner arity must be in [1,16]");
  BooleanCombiner g;
  g.name = std::string(name);
  g.arity = arity;
  const std::size_t n = std::size_t{1} << arity;
  g.table.resize(n);
  if (name == "or" || name == "and" || name == "xor") {
    for (std::uint32_t bits = 0; bits < n; ++bits) {
      if (name == "or") g.table[bits] = bits != 0;
      if (name == "and") g.table[bits] = bits == n - 1;
      if (name == "xor") g.table[bits] = std::popcount(bits) & 1;
    }
    return g;
  }
  if (name.starts_with("table:")) {
    const auto bits = name.substr(6);
    if (bits.size() != n) {
      throw ParseError("truth table needs " + std::to_string(n) + " bits, got '" +
                       std::string(bits) + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw ParseError("bad truth table '" + std::string(bits) + "'");
      g.table[i] = bits[i] == '1';
    }
    return g;
  }
  throw ParseError("unknown combiner '" + std::string(name) + "'");
}

ExplicitFamily compose_family(const std::vector<std::shared_ptr<const ExplicitFamily>>& parts,
                              const BooleanCombiner& g, std::size_t max_tuples) {
  if (parts.empty()) throw PreconditionError("compose needs at least one part");
  if (g.arity != parts.size()) throw PreconditionError("combiner arity does not match part count");
  const auto& labels = parts.front()->input_labels();
  std::size_t tuples = 1;
  for (const auto& p : parts) {
    if (p->codomain() != 2) throw PreconditionError("compose parts must have binary codomain");
    if (p->input_labels() != labels) throw PreconditionError("compose parts must share input labels");
    tuples = checked_product(tuples, p->size(), "compose");
    if (tuples > max_tuples) throw CapacityError("compose product exceeds the tuple budget");
  }
  const std::size_t D = labels.size();
  std::vector<std::vector<Value>> rows;
  std::unordered_set<std::vector<Value>, RowHash> seen;
  std::vector<std::size_t> choice(parts.size(), 0);
  std::vector<std::uint32_t> packed(D);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (std::size_t i = parts.size(); i-- > 0;) {
      choice[i] = rest % parts[i]->size();
      rest /= parts[i]->size();
    }
    std::fill(packed.begin(), packed.end(), 0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (InputId x = 0; x < D; ++x) {
        packed[x] |= parts[i]->output(static_cast<FunctionId>(choice[i]), x) << i;
      }
    }
    std::vector<Value> row(D);
    for (InputId x = 0; x < D; ++x) row[x] = g(packed[x]);
    if (seen.insert(row).second) {
      rows.push_back(std::move(row));
      if (rows.size() * std::max<std::size_t>(D, 1) > kMaxMatrixCells) {
        throw CapacityError("composed family exceeds the materialization budget");
      }
    }
  }
  std::string desc = "compose:g=" + g.name + ",parts=(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) desc += ',';
    desc += "(" + parts[i]->descriptor() + ")";
  }
  desc += ")";
  return ExplicitFamily(desc, labels, 2, rows);
}

ExplicitFamily direct_sum(const ExplicitFamily& first, const ExplicitFamily& second) {
  if (first.codomain() != second.codomain()) {
    throw PreconditionError("direct sum needs equal codomain sizes");
  }
  std::vector<std::string> labels;
  for (const auto& l : first.input_labels()) labels.push_back("a:" + l);
  for (const auto& l : second.input_labels()) labels.push_back("b:" + l);
  checked_product(first.size(), second.size(), "direct sum");
  std::vector<std::vector<Value>> rows;
  rows.reserve(first.size() * second.size());
  for (FunctionId f1 = 0; f1 < first.size(); ++f1) {
    const auto r1 = first.row(f1);
    for (FunctionId f2 = 0; f2 < second.size(); ++f2) {
      auto row = r1;
      const auto r2 = second.row(f2);
      row.insert(row.end(), r2.begin(), r2.end());
      rows.push_back(std::move(row));
    }
  }
  return ExplicitFamily("dsum:(" + first.descriptor() + "),(" + second.descriptor() + ")",
                        std::move(labels), first.codomain(), rows);
}

ExplicitFamily make_table_family(std::uint32_t k, const std::vector<std::string>& digit_rows) {
  if (digit_rows.empty()) throw PreconditionError("table family needs at least one row");
  const std::size_t D = digit_rows.front().size();
  std::vector<std::vector<Value>> rows;
  std::string desc = "table:k=" + std::to_string(k) + ",rows=";
  for (std::size_t i = 0; i < digit_rows.size(); ++i) {
    if (digit_rows[i].size() != D) throw ParseError("table rows must have equal length");
    std::vector<Value> row;
    for (char c : digit_rows[i]) row.push_back(digit_value(c));
    rows.push_back(std::move(row));
    if (i) desc += '.';
    desc += digit_rows[i];
  }
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < D; ++x) labels.push_back("x" + std::to_string(x));
  return ExplicitFamily(desc, std::move(labels), k, rows);
}

// ---------------------------------------------------------------------------
// Composition lower-bound layout

std::string CompositionLayout::tuple_label(const std::vector<std::uint32_t>& tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ',';
    out += tuple[i] == 0 ? std::string("x") : std::to_string(tuple[i]);
  }
  return out + ")";
}

std::optional<InputId> CompositionLayout::find(const std::vector<std::uint32_t>& tuple) const {
  auto it = index.find(tuple_label(tuple));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

CompositionLayout make_composition_layout(std::uint32_t k, std::uint32_t M, bool full_domain) {
  if (k < 2 || !std::has_single_bit(k)) {
    throw ConfigError("composition construction needs k a power of 2, k >= 2");
  }
  if (M < 1) throw ConfigError("composition construction needs M >= 1");
  CompositionLayout layout;
  layout.k = k;
  layout.M = M;
  layout.full_domain = full_domain;
  const std::uint32_t t_size = k * M;
  if (full_domain) {
    const std::size_t count = ipow(t_size + 1, k, "composition domain");
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> tuple(k);
      std::size_t rest = idx;
      for (std::size_t i = k; i-- > 0;) {
        tuple[i] = static_cast<std::uint32_t>(rest % (t_size + 1));
        rest /= (t_size + 1);
      }
      layout.tuples.push_back(std::move(tuple));
    }
  } else {
    const auto levels = static_cast<std::uint32_t>(std::countr_zero(k));
    for (std::uint32_t level = 1; level <= levels; ++level) {
      const std::uint32_t windows = 1u << (level - 1);
      const std::uint32_t width = k / windows;
      for (std::uint32_t j = 0; j < windows; ++j) {
        for (std::uint32_t a = 1; a <= t_size; ++a) {
          for (std::uint32_t b = a + 1; b <= t_size; ++b) {
            std::vector<std::uint32_t> tuple(k, 0);
            for (std::uint32_t c = 0; c < width; ++c) tuple[j * width + c] = c < width / 2 ? a : b;
            layout.tuples.push_back(std::move(tuple));
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < layout.tuples.size(); ++i) {
    layout.index.emplace(CompositionLayout::tuple_label(layout.tuples[i]), static_cast<InputId>(i));
  }
  return layout;
}

std::vector<std::shared_ptr<const ExplicitFamily>> composition_parts(const CompositionLayout& layout) {
  const std::uint32_t t_size = layout.k * layout.M;
  std::vector<std::string> labels;
  for (const auto& t : layout.tuples) labels.push_back(CompositionLayout::tuple_label(t));
  // All M-subsets of T in lexicographic order.
  std::vector<std::vector<std::uint32_t>> subsets;
  std::vector<std::uint32_t> current;
  auto recurse = [&](auto&& self, std::uint32_t next) -> void {
    if (current.size() == layout.M) {
      subsets.push_back(current);
      return;
    }
    for (std::uint32_t e = next; e <= t_size; ++e) {
      current.push_back(e);
      self(self, e + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 1);
  std::vector<std::shared_ptr<const ExplicitFamily>> parts;
  for (std::uint32_t i = 0; i < layout.k; ++i) {
    std::vector<std::vector<Value>> rows;
    for (const auto& s : subsets) {
      std::vector<Value> row(layout.tuples.size());
      for (std::size_t x = 0; x < layout.tuples.size(); ++x) {
        row[x] = std::binary_search(s.begin(), s.end(), layout.tuples[x][i]) ? 1 : 0;
      }
      rows.push_back(std::move(row));
    }
    parts.push_back(std::make_shared<const ExplicitFamily>(
        "subset-ind:i=" + std::to_string(i + 1) + ",k=" + std::to_string(layout.k) +
            ",M=" + std::to_string(layout.M),
        labels, 2, rows));
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Family

Family::Family(std::shared_ptr<const ExplicitFamily> table)
    : descriptor_(table->descriptor()),
      codomain_(table->codomain()),
      labels_(&table->input_labels()),
      table_(std::move(table)) {}

Family::Family(std::string descriptor, std::shared_ptr<const Composition> composition,
               std::shared_ptr<const ExplicitFamily> table)
    : descriptor_(std::move(descriptor)),
      codomain_(2),
      labels_(&composition->parts.front()->input_labels()),
      table_(std::move(table)),
      composition_(std::move(composition)) {}

std::optional<InputId> Family::find_input(std::string_view label) const {
  if (table_) return table_->find_input(label);
  return composition_->parts.front()->find_input(label);
}

const ExplicitFamily& Family::require_table(std::string_view what) const {
  if (!table_) {
    throw CapacityError(std::string(what) + " needs a materialized family; " + descriptor_ +
                        " is only available in factorized form");
  }
  return *table_;
}

namespace {

ExplicitFamily parse_explicit(std::string_view text);

Family make_composed(std::string descriptor, std::shared_ptr<Family::Composition> comp) {
  std::shared_ptr<const ExplicitFamily> table;
  try {
    table = std::make_shared<const ExplicitFamily>(
        compose_family(comp->parts, comp->g).relabeled(descriptor));
  } catch (const CapacityError&) {
    table = nullptr;
  }
  return Family(std::move(descriptor), std::move(comp), std::move(table));
}

ExplicitFamily parse_explicit(std::string_view text) {
  const auto d = Descriptor::parse(text);
  if (d.name == "linear") {
    d.only({"q", "n"});
    return make_linear_family(FieldSpec::parse("gf:" + d.get("q")), d.get_uint("n"));
  }
  if (d.name == "sparse") {
    d.only({"k", "M", "D"});
    return make_sparse_family(static_cast<std::uint32_t>(d.get_uint("k")), d.get_uint("M"),
                              d.get_uint("D"));
  }
  if (d.name == "const") {
    d.only({"k"});
    return make_const_family(static_cast<std::uint32_t>(d.get_uint("k")));
  }
  if (d.name == "table") {
    d.only({"k", "rows"});
    std::vector<std::string> rows;
    for (auto& r : split_top_level(d.get("rows"), '.')) rows.push_back(r);
    return make_table_family(static_cast<std::uint32_t>(d.get_uint("k")), rows);
  }
  if (d.name == "cart") {
    d.only({"r", "inner"});
    return cart_power(parse_explicit(strip_parens(d.get("inner"))), d.get_uint("r"));
  }
  if (d.name == "dsum") {
    if (d.positional.size() != 2) throw ParseError("dsum needs exactly two parenthesized parts");
    return direct_sum(parse_explicit(strip_parens(d.positional[0])),
                      parse_explicit(strip_parens(d.positional[1])));
  }
  throw ParseError("unknown family '" + d.name + "'");
}

}  // namespace

Family parse_family(std::string_view descriptor) {
  const std::string text(descriptor);
  try {
    const auto d = Descriptor::parse(text);
    if (d.name == "compose") {
      d.only({"g", "parts"});
      auto comp = std::make_shared<Family::Composition>();
      const auto& parts_text = d.get("parts");
      const auto times = parts_text.find('x');
      if (!parts_text.empty() && parts_text.front() != '(' && times != std::string::npos) {
        const auto count = parse_uint(std::string_view(parts_text).substr(0, times), "part count");
        auto part = std::make_shared<const ExplicitFamily>(
            parse_explicit(strip_parens(parts_text.substr(times + 1))));
        comp->parts.assign(count, part);
      } else {
        for (const auto& p : split_top_level(strip_parens(parts_text), ',')) {
          comp->parts.push_back(std::make_shared<const ExplicitFamily>(parse_explicit(strip_parens(p))));
        }
      }
      if (comp->parts.empty()) throw ParseError("compose needs at least one part");
      try {
        comp->g = BooleanCombiner::named(d.get("g"), comp->parts.size());
        for (const auto& p : comp->parts) {
          if (p->codomain() != 2) throw PreconditionError("compose parts must have binary codomain");
          if (p->input_labels() != comp->parts.front()->input_labels()) {
            throw PreconditionError("compose parts must share input labels");
          }
        }
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
      return make_composed(text, std::move(comp));
    }
    if (d.name == "compose-lb") {
      d.only({"k", "M", "domain"});
      const std::string domain = d.has("domain") ? d.get("domain") : "adv";
      if (domain != "adv" && domain != "full") throw ParseError("bad domain '" + domain + "'");
      auto layout = std::make_shared<const CompositionLayout>(make_composition_layout(
          static_cast<std::uint32_t>(d.get_uint("k")), static_cast<std::uint32_t>(d.get_uint("M")),
          domain == "full"));
      auto comp = std::make_shared<Family::Composition>();
      comp->parts = composition_parts(*layout);
      comp->g = BooleanCombiner::named("or", layout->k);
      comp->layout = layout;
      return make_composed(text, std::move(comp));
    }
    return Family(std::make_shared<const ExplicitFamily>(parse_explicit(text).relabeled(text)));
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace mblab
