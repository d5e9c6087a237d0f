#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>

namespace dsieve {

/// Amplitudes (alpha_0, alpha_1) of a single branch qubit.
using QubitState = std::array<std::complex<double>, 2>;

/// Classical label l of the phase state |0> + e^{2 pi i l s / M}|1>.
///
/// `cost` counts the fresh oracle-round labels folded into this one. The
/// circuit backend also carries the actual residual qubit so that combining
/// and parity extraction act on simulated amplitudes, not on the planted s.
struct PhaseLabel {
  std::uint64_t l = 0;
  std::uint64_t M = 2;
  std::uint64_t cost = 1;
  std::optional<QubitState> qubit;
};

}  // namespace dsieve
