#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace btq {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// Every random quantity in the project is a pure function of
/// (seed, stream, index): the 64-bit seed is the key, and the counter is
/// {index_lo, index_hi, stream, 0}. Parallel fills are therefore identical
/// to serial fills regardless of thread count.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Named streams keep independent uses of one seed from overlapping.
enum class Stream : std::uint32_t {
  Ginibre = 0,
  SphereSample = 1,
  TorusSample = 2,
  Test = 7,
};

class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, Stream stream = Stream::Ginibre)
      : seed_(seed), stream_(static_cast<std::uint32_t>(stream)) {}

  std::uint64_t seed() const { return seed_; }

  Philox4x32::Counter block(std::uint64_t index) const;

  /// Two 53-bit uniforms from block `index`: first in (0,1], second in [0,1).
  std::pair<double, double> uniform_pair(std::uint64_t index) const;

  /// Complex Gaussian with E g = 0, E|g|^2 = 1, via Box-Muller on
  /// uniform_pair(index): g = sqrt(-log u1) * exp(2 pi i u2).
  std::complex<double> complex_gaussian(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::uint32_t stream_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// seed_cell = splitmix64(splitmix64(splitmix64(master) ^ N) ^ cell_index)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n,
                          std::uint64_t cell_index);

} // namespace btq
