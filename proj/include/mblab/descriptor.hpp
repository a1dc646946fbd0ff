#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mblab {

/// "name:arg,arg,..." split at top-level commas (parentheses nest).
/// Arguments of the form key=value land in `options`, the rest in `positional`.
struct Descriptor {
  std::string name;
  std::vector<std::string> positional;
  std::map<std::string, std::string> options;

  static Descriptor parse(std::string_view text);

  bool has(const std::string& key) const { return options.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  /// Throws ParseError if any option other than `allowed` is present.
  void only(std::initializer_list<std::string_view> allowed) const;
};

std::vector<std::string> split_top_level(std::string_view text, char sep);

/// "(x)" -> "x"; anything else is returned unchanged.
std::string strip_parens(std::string_view text);

std::uint64_t parse_uint(std::string_view token, std::string_view what);

}  // namespace mblab
