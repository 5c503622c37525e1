#include "cvxscat/rng.hpp"

namespace cvxscat {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::symmetric() {
  for (;;) {
    const double u = 2.0 * unit() - 1.0;
    if (u != -1.0) return u;
  }
}

Rng Rng::stream(std::uint64_t master, std::uint64_t index) { return Rng(mix_seed(master ^ mix_seed(index))); }

}  // namespace cvxscat
