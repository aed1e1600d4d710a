#pragma once

#include <cstdint>
#include <random>

namespace ponder {

/// Independent generator for particle `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), so results do not depend on the
/// order or thread in which particles are processed.
inline std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x70u};
  return std::mt19937_64(seq);
}

/// FWHM of a gaussian expressed as its standard deviation.
inline double sigma_from_fwhm(double fwhm) { return fwhm / 2.3548200450309493; }  // 2 sqrt(2 ln 2)

}  // namespace ponder
