#include "sahr/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "sahr/error.hpp"

namespace sahr {

namespace {

// Coefficients below this magnitude may be subnormal after rounding, which
// breaks the relative error model; such hyperplanes are left to exact code.
constexpr double kTiny = 1e-290;

bool representable(const Rational& q, double& out) {
  out = q.get_d();
  if (!std::isfinite(out)) return false;
  if (q != 0 && std::fabs(out) < kTiny) return false;
  return true;
}

KernelIsa detect() {
  if (const char* env = std::getenv("SAHR_KERNEL"); env && std::string(env) == "scalar") return KernelIsa::Scalar;
  return kernels::avx2_available() ? KernelIsa::Avx2 : KernelIsa::Scalar;
}

std::atomic<KernelIsa>& isa_slot() {
  static std::atomic<KernelIsa> slot{detect()};
  return slot;
}

}  // namespace

HyperplaneBatch make_batch(std::span<const LiftedHyperplane> hs, std::size_t m) {
  HyperplaneBatch b;
  b.m = m;
  b.n = hs.size();
  b.coef.assign((m + 1) * b.n, 0.0);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].coeffs.size() != m + 1) fail(ErrorKind::InvalidSpec, "hyperplane dimension mismatch in batch");
    bool ok = true;
    for (std::size_t k = 0; k <= m; ++k) ok &= representable(hs[i].coeffs[k], b.coef[k * b.n + i]);
    // A NaN constant term makes every evaluation uncertain.
    if (!ok) b.coef[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return b;
}

namespace kernels {

void signs_scalar(const HyperplaneBatch& b, const double* x, std::int8_t* out) {
  const std::size_t n = b.n, m = b.m;
  const double factor = static_cast<double>(m + 8) * 0x1p-50;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b.coef[i];
    double mag = std::fabs(s);
    for (std::size_t k = 1; k <= m; ++k) {
      double p = b.coef[k * n + i] * x[k - 1];
      s = s + p;
      mag = mag + std::fabs(p);
    }
    double bound = mag * factor;
    if (mag > 1e-280 && s > bound)
      out[i] = 1;
    else if (mag > 1e-280 && -s > bound)
      out[i] = -1;
    else
      out[i] = kUncertain;
  }
}

}  // namespace kernels

KernelIsa active_isa() { return isa_slot().load(std::memory_order_relaxed); }

void set_active_isa(KernelIsa isa) {
  if (isa == KernelIsa::Avx2 && !kernels::avx2_available()) fail(ErrorKind::InvalidSpec, "AVX2 is not available");
  isa_slot().store(isa, std::memory_order_relaxed);
}

std::string_view to_string(KernelIsa isa) { return isa == KernelIsa::Avx2 ? "avx2" : "scalar"; }

void filtered_signs(const HyperplaneBatch& b, std::span<const Rational> y, std::int8_t* out) {
  if (y.size() != b.m) fail(ErrorKind::InvalidSpec, "point dimension does not match hyperplane batch");
  std::vector<double> x(b.m);
  for (std::size_t k = 0; k < b.m; ++k) {
    if (!representable(y[k], x[k])) {
      std::fill(out, out + b.n, kUncertain);
      return;
    }
  }
  if (active_isa() == KernelIsa::Avx2)
    kernels::signs_avx2(b, x.data(), out);
  else
    kernels::signs_scalar(b, x.data(), out);
}

std::vector<std::int8_t> exact_signs(const HyperplaneBatch& b, std::span<const LiftedHyperplane> hs,
                                     std::span<const Rational> y) {
  std::vector<std::int8_t> out(b.n);
  filtered_signs(b, y, out.data());
  for (std::size_t i = 0; i < b.n; ++i)
    if (out[i] == kUncertain) out[i] = static_cast<std::int8_t>(sign(hs[i].value(y)));
  return out;
}

}  // namespace sahr
