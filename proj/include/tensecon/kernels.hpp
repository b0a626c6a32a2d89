#pragma once

#include <cassert>
#include <cstddef>
#include <span>

// Data-parallel inner loops shared by every module.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The active table is chosen once at first use from the CPU's
// capabilities; TENSECON_KERNELS=scalar|avx2 in the environment overrides it.
//
// All variants are bit-identical. Elementwise kernels perform the same IEEE
// operations in the same order (no FMA). Reductions use a fixed 4-lane order:
// element i accumulates into lane i % 4, and lanes combine as
// (l0 + l1) + (l2 + l3). The scalar reference spells that order out.

namespace tensecon::kernels {

struct KernelTable {
  const char* name;

  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  /// Sum of max(x, 0).
  double (*sum_positive)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);

  /// out = c * x
  void (*scale)(const double* x, double c, double* out, std::size_t n);
  /// y += c * x
  void (*axpy)(double c, const double* x, double* y, std::size_t n);
  /// out = a + c * b
  void (*scaled_add)(const double* a, double c, const double* b, double* out,
                     std::size_t n);
  /// out = max(r - mu * theta, floor)
  void (*floored_sub)(const double* r, double mu, const double* theta, double floor,
                      double* out, std::size_t n);
  /// out = beta * (m1 / r1 - (m2 + m3) / r2)
  void (*momentum)(double beta, const double* m1, const double* r1, const double* m2,
                   const double* m3, const double* r2, double* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// The AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Table used by the span helpers below.
const KernelTable& active() noexcept;

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}
inline double sum_positive(std::span<const double> x) {
  return active().sum_positive(x.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}
inline void scale(std::span<const double> x, double c, std::span<double> out) {
  assert(x.size() == out.size());
  active().scale(x.data(), c, out.data(), x.size());
}
inline void axpy(double c, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(c, x.data(), y.data(), x.size());
}
inline void scaled_add(std::span<const double> a, double c, std::span<const double> b,
                       std::span<double> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  active().scaled_add(a.data(), c, b.data(), out.data(), a.size());
}

}  // namespace tensecon::kernels
