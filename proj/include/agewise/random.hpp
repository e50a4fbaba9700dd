#pragma once

#include "agewise/distribution.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace agewise {

/// splitmix64 step; used to derive independent stream seeds from one seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// 64-bit Mersenne twister with a fixed uniform mapping, so draws are
/// reproducible across standard libraries.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// Inverse-transform draws x = F^{-1}(U).
std::vector<double> draw(const Model& model, std::size_t n, Rng& rng);

} // namespace agewise
