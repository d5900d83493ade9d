#include "motion_forge/random.hpp"

#include "motion_forge/motion.hpp"

#include <sstream>

namespace motion_forge {

Rng::Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

double Rng::uniform01() {
  ++draws_;
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) {
    throw Error("Rng::index: empty range");
  }
  const auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

std::string Rng::state() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::restore(std::uint64_t seed, std::uint64_t draws, std::string_view state) {
  Rng rng(seed);
  std::istringstream in{std::string(state)};
  in >> rng.engine_;
  if (!in) {
    throw Error("invalid " + std::string(kAlgorithm) + " state");
  }
  rng.draws_ = draws;
  return rng;
}

}  // namespace motion_forge
