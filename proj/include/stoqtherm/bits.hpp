#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace stoqtherm {

// Basis convention used everywhere: a computational-basis index
// x in [0, 2^n) is read as a big-endian bitstring, so qubit/bit 0 is
// the most significant bit of x. Local tables and matrices are indexed
// lexicographically over their (sorted) support with the same rule:
// the smallest support index is the most significant bit of the
// sub-index.

inline int bit_of(std::uint64_t x, int q, int n) {
  return static_cast<int>((x >> (n - 1 - q)) & 1u);
}

inline std::uint64_t flip_bit(std::uint64_t x, int q, int n) {
  return x ^ (std::uint64_t{1} << (n - 1 - q));
}

inline std::uint64_t with_bit(std::uint64_t x, int q, int n, int value) {
  const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
  return value ? (x | mask) : (x & ~mask);
}

// Sub-index of x over a sorted support (support[0] becomes the MSB).
inline std::uint64_t sub_index(std::uint64_t x, std::span<const int> support, int n) {
  std::uint64_t s = 0;
  for (int q : support) s = (s << 1) | static_cast<std::uint64_t>(bit_of(x, q, n));
  return s;
}

// Replace the support bits of x with the bits of sub.
inline std::uint64_t scatter_sub(std::uint64_t x, std::uint64_t sub,
                                 std::span<const int> support, int n) {
  const int s = static_cast<int>(support.size());
  for (int i = 0; i < s; ++i) {
    x = with_bit(x, support[i], n, static_cast<int>((sub >> (s - 1 - i)) & 1u));
  }
  return x;
}

inline std::string to_bitstring(std::uint64_t x, int n) {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q)
    if (bit_of(x, q, n)) out[static_cast<std::size_t>(q)] = '1';
  return out;
}

}  // namespace stoqtherm
