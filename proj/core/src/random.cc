#include "srgov/random.h"

#include <array>

namespace srgov {

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

Rng Rng::Stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

double Rng::Normal() { return normal_(engine_); }

double Rng::Uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

std::uint64_t Rng::Index(std::uint64_t n_exclusive) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n_exclusive - 1);
  return dist(engine_);
}

}  // namespace srgov
