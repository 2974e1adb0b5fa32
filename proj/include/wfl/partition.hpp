#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "wfl/error.hpp"

namespace wfl {

/// Subset sigma of {0, ..., n-1}; bit i set means index i is in sigma.
/// The complement is always derived, never stored.
class PartitionMask {
 public:
  static constexpr std::size_t kMaxSize = 64;

  PartitionMask() = default;

  PartitionMask(std::size_t n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n > kMaxSize) {
      throw Error(ErrorCode::TooLarge, "partition over " + std::to_string(n) +
                                           " indices exceeds " + std::to_string(kMaxSize));
    }
    if ((bits & ~universe_bits(n)) != 0) {
      throw Error(ErrorCode::BadInput, "partition bits outside index range");
    }
  }

  static PartitionMask none(std::size_t n) { return {n, 0}; }
  static PartitionMask all(std::size_t n) { return {n, universe_bits(n)}; }

  static PartitionMask of(std::size_t n, std::initializer_list<std::size_t> members) {
    std::uint64_t bits = 0;
    for (std::size_t i : members) {
      if (i >= n) throw Error(ErrorCode::BadInput, "partition member out of range");
      bits |= std::uint64_t{1} << i;
    }
    return {n, bits};
  }

  std::size_t size() const noexcept { return n_; }
  std::uint64_t bits() const noexcept { return bits_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

  bool contains(std::size_t i) const noexcept { return i < n_ && ((bits_ >> i) & 1U) != 0; }

  PartitionMask complement() const { return {n_, universe_bits(n_) & ~bits_}; }

  friend bool operator==(const PartitionMask&, const PartitionMask&) = default;
  friend auto operator<=>(const PartitionMask&, const PartitionMask&) = default;

 private:
  static constexpr std::uint64_t universe_bits(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  }

  std::size_t n_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace wfl
