#pragma once

#include <array>
#include <cstdint>

namespace tensecon {

/// SplitMix64; used only to expand a 64-bit seed into xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// xoshiro256** with a fixed, platform-independent draw sequence.
///
/// Seeding: four successive SplitMix64 outputs from the 64-bit seed.
/// uniform(): top 53 bits of next() scaled by 2^-53, in [0, 1).
/// normal(): Box-Muller cosine branch from two uniform() draws
/// (u1 first, mapped to (0, 1] as 1 - u1); the sine branch is discarded so
/// each normal consumes exactly two raw outputs.
class Xoshiro256ss {
 public:
  using State = std::array<std::uint64_t, 4>;

  explicit Xoshiro256ss(std::uint64_t seed) noexcept;
  static Xoshiro256ss from_state(const State& s) noexcept;

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  double normal() noexcept;

  const State& state() const noexcept { return s_; }
  friend bool operator==(const Xoshiro256ss&, const Xoshiro256ss&) = default;

 private:
  Xoshiro256ss() = default;
  State s_{};
};

}  // namespace tensecon
