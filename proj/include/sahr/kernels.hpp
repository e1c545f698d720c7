#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sahr/algebra.hpp"

namespace sahr {

/// Hyperplanes rounded to doubles in structure-of-arrays layout: coefficient k
/// of hyperplane i lives at coef[k * n + i].
struct HyperplaneBatch {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> coef;
};

HyperplaneBatch make_batch(std::span<const LiftedHyperplane> hs, std::size_t m);

inline constexpr std::int8_t kUncertain = 2;

enum class KernelIsa { Scalar, Avx2 };

namespace kernels {

// Writes sgn(h_i . (1, x)) to out[i] when the floating-point evaluation is
// certified by a forward error bound, and kUncertain otherwise. Both variants
// perform the same operations in the same order, so their outputs agree bit
// for bit.
void signs_scalar(const HyperplaneBatch& b, const double* x, std::int8_t* out);
void signs_avx2(const HyperplaneBatch& b, const double* x, std::int8_t* out);

bool avx2_available();

}  // namespace kernels

/// Selected once from the CPU, unless SAHR_KERNEL=scalar forces the reference path.
KernelIsa active_isa();
std::string_view to_string(KernelIsa isa);
/// Overrides the dispatch; used by equivalence tests.
void set_active_isa(KernelIsa isa);

/// Filtered signs through the active kernel; entries may be kUncertain.
void filtered_signs(const HyperplaneBatch& b, std::span<const Rational> y, std::int8_t* out);

/// Exact signs of every hyperplane at y: the filtered kernel first, then
/// rational evaluation for the uncertain entries.
std::vector<std::int8_t> exact_signs(const HyperplaneBatch& b, std::span<const LiftedHyperplane> hs,
                                     std::span<const Rational> y);

}  // namespace sahr
