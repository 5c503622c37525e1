#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cvxscat {

/// Seeded generator whose output stream is fixed by the C++ standard.
///
/// Uniform draws are built from the raw 64-bit engine output rather than
/// std::uniform_real_distribution, whose algorithm varies between standard
/// libraries. Any change to the draw recipe must bump kRngAlgorithm.
class Rng {
 public:
  static constexpr std::string_view kRngAlgorithm = "mt19937_64/u53-symmetric/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit();

  /// Uniform on the open interval (-1, 1).
  double symmetric();

  /// Independent stream for sub-task `index` of a run seeded with `master`.
  static Rng stream(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace cvxscat
