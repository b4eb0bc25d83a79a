#pragma once

#include <cstdint>
#include <random>

namespace srgov {

/// Seeded random stream. All randomness in the library flows through an
/// explicit Rng owned by the caller; there is no global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream derived from (seed, stream_id).
  static Rng Stream(std::uint64_t seed, std::uint64_t stream_id);

  double Normal();
  /// Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  /// Uniform integer on [0, n_exclusive).
  std::uint64_t Index(std::uint64_t n_exclusive);
  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Named stream ids so that plant noise, policy sampling and replay sampling
/// never share draws.
namespace streams {
inline constexpr std::uint64_t kPlantNoise = 1;
inline constexpr std::uint64_t kPolicy = 2;
inline constexpr std::uint64_t kReplay = 3;
inline constexpr std::uint64_t kInit = 4;
inline constexpr std::uint64_t kUpdate = 5;
inline constexpr std::uint64_t kValidation = 6;
}  // namespace streams

}  // namespace srgov
