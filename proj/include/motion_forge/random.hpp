#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace motion_forge {

/// Seeded 64-bit Mersenne Twister with a serializable state. Draws are
/// derived from raw engine output only (no std distributions), so streams
/// replay identically across standard library implementations.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed = 0);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  /// Engine state as the decimal word list written by operator<<.
  std::string state() const;
  static Rng restore(std::uint64_t seed, std::uint64_t draws, std::string_view state);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t draws_ = 0;
};

}  // namespace motion_forge
