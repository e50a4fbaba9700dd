#include "agewise/random.hpp"

namespace agewise {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> draw(const Model& model, std::size_t n, Rng& rng)
{
    std::vector<double> out(n);
    for (auto& x : out) x = model.quantile(rng.uniform());
    return out;
}

} // namespace agewise
