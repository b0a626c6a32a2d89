#include "tensecon/kernels.hpp"

namespace tensecon::kernels {
namespace {

// Lane-ordered accumulation; see kernels.hpp.
template <typename Term>
double reduce4(std::size_t n, Term term) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] += term(i);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum(const double* x, std::size_t n) {
  return reduce4(n, [x](std::size_t i) { return x[i]; });
}

double sum_squares(const double* x, std::size_t n) {
  return reduce4(n, [x](std::size_t i) { return x[i] * x[i]; });
}

double sum_positive(const double* x, std::size_t n) {
  return reduce4(n, [x](std::size_t i) { return x[i] > 0.0 ? x[i] : 0.0; });
}

double dot(const double* x, const double* y, std::size_t n) {
  return reduce4(n, [x, y](std::size_t i) { return x[i] * y[i]; });
}

void scale(const double* x, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * x[i];
}

void axpy(double c, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + c * x[i];
}

void scaled_add(const double* a, double c, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + c * b[i];
}

void floored_sub(const double* r, double mu, const double* theta, double floor, double* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = r[i] - mu * theta[i];
    out[i] = d > floor ? d : floor;
  }
}

void momentum(double beta, const double* m1, const double* r1, const double* m2,
              const double* m3, const double* r2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = beta * (m1[i] / r1[i] - (m2[i] + m3[i]) / r2[i]);
  }
}

constexpr KernelTable kScalar{
    "scalar", sum,         sum_squares, sum_positive, dot,      scale,
    axpy,     scaled_add,  floored_sub, momentum,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace tensecon::kernels
