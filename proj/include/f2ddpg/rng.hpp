#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace f2ddpg {

// Every stochastic component takes one of these explicitly; no global state.
using Rng = std::mt19937_64;

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline std::string SaveRngState(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

inline Rng LoadRngState(const std::string& state) {
  Rng rng;
  std::istringstream in(state);
  in >> rng;
  return rng;
}

}  // namespace f2ddpg
