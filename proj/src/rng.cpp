#include "levygrad/rng.hpp"

namespace levygrad {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

long RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(engine_);
}

}  // namespace levygrad
