#include "mblab/descriptor.hpp"

#include <algorithm>
#include <charconv>

#include "mblab/errors.hpp"

namespace mblab {

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')' in '" + std::string(text) + "'");
    }
    if (c == sep && depth == 0) {
      parts.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '(' in '" + std::string(text) + "'");
  if (!text.empty()) parts.emplace_back(text.substr(start));
  return parts;
}

std::string strip_parens(std::string_view text) {
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    // Only strip if the outer pair matches itself.
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      if (depth == 0 && i + 1 < text.size()) return std::string(text);
    }
    return std::string(text.substr(1, text.size() - 2));
  }
  return std::string(text);
}

std::uint64_t parse_uint(std::string_view token, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return v;
}

Descriptor Descriptor::parse(std::string_view text) {
  Descriptor d;
  const auto colon = text.find(':');
  const auto paren = text.find('(');
  if (colon == std::string_view::npos || (paren != std::string_view::npos && paren < colon)) {
    d.name = std::string(text);
    if (d.name.empty()) throw ParseError("empty descriptor");
    return d;
  }
  d.name = std::string(text.substr(0, colon));
  for (auto& arg : split_top_level(text.substr(colon + 1), ',')) {
    const auto eq = arg.find('=');
    const auto open = arg.find('(');
    if (eq != std::string::npos && (open == std::string::npos || eq < open)) {
      d.options[arg.substr(0, eq)] = arg.substr(eq + 1);
    } else {
      d.positional.push_back(arg);
    }
  }
  return d;
}

const std::string& Descriptor::get(const std::string& key) const {
  auto it = options.find(key);
  if (it == options.end()) throw ParseError("'" + name + "' is missing option '" + key + "'");
  return it->second;
}

std::uint64_t Descriptor::get_uint(const std::string& key) const {
  return parse_uint(get(key), name + " option " + key);
}

std::uint64_t Descriptor::get_uint(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_uint(key) : fallback;
}

void Descriptor::only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : options) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown option '" + key + "' for '" + name + "'");
    }
  }
}

}  // namespace mblab
