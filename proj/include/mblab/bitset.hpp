#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <boost/dynamic_bitset.hpp>
#include <boost/function_output_iterator.hpp>
#include <boost/functional/hash.hpp>

namespace mblab {

/// Membership set over function indices of a family.
using Bitset = boost::dynamic_bitset<std::uint64_t>;

inline std::size_t hash_value(const Bitset& b) {
  std::size_t seed = b.size();
  boost::to_block_range(
      b, boost::make_function_output_iterator([&seed](std::uint64_t block) {
        boost::hash_combine(seed, block);
      }));
  return seed;
}

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return hash_value(b); }
};

template <typename Fn>
void for_each_member(const Bitset& b, Fn&& fn) {
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) fn(i);
}

}  // namespace mblab
