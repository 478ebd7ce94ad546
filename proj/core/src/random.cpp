#include "anm/random.hpp"

namespace anm {

// SplitMix64 finaliser.
std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix_seed(seed);
  for (auto coordinate : path) h = mix_seed(h ^ mix_seed(coordinate + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

std::size_t Rng::below(std::size_t n) {
  if (n <= 1) return 0;
  // Rejection sampling keeps the mapping exact and portable.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::nonzero_weight() {
  for (;;) {
    const double w = uniform(-1.0, 1.0);
    if (w != 0.0) return w;
  }
}

}  // namespace anm
