#include <immintrin.h>

#include "tensecon/kernels.hpp"

namespace tensecon::kernels {
namespace {

// Finishes a 4-lane reduction: adds the n % 4 tail terms to their lanes and
// combines lanes in the order the scalar reference uses.
template <typename Term>
double finish4(__m256d acc, std::size_t head, std::size_t n, Term term) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = head; i < n; ++i) lane[i & 3] += term(i);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t head = n & ~std::size_t{3};
  for (std::size_t i = 0; i < head; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return finish4(acc, head, n, [x](std::size_t i) { return x[i]; });
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t head = n & ~std::size_t{3};
  for (std::size_t i = 0; i < head; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  return finish4(acc, head, n, [x](std::size_t i) { return x[i] * x[i]; });
}

double sum_positive(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  const std::size_t head = n & ~std::size_t{3};
  for (std::size_t i = 0; i < head; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  return finish4(acc, head, n, [x](std::size_t i) { return x[i] > 0.0 ? x[i] : 0.0; });
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t head = n & ~std::size_t{3};
  for (std::size_t i = 0; i < head; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  return finish4(acc, head, n, [x, y](std::size_t i) { return x[i] * y[i]; });
}

void scale(const double* x, double c, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = c * x[i];
}

void axpy(double c, const double* x, double* y, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(vc, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + c * x[i];
}

void scaled_add(const double* a, double c, const double* b, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(vc, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), prod));
  }
  for (; i < n; ++i) out[i] = a[i] + c * b[i];
}

void floored_sub(const double* r, double mu, const double* theta, double floor, double* out,
                 std::size_t n) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vfloor = _mm256_set1_pd(floor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(r + i), _mm256_mul_pd(vmu, _mm256_loadu_pd(theta + i)));
    // max_pd(d, floor) yields d exactly when d > floor, matching the scalar select.
    _mm256_storeu_pd(out + i, _mm256_max_pd(d, vfloor));
  }
  for (; i < n; ++i) {
    const double d = r[i] - mu * theta[i];
    out[i] = d > floor ? d : floor;
  }
}

void momentum(double beta, const double* m1, const double* r1, const double* m2,
              const double* m3, const double* r2, double* out, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d in = _mm256_div_pd(_mm256_loadu_pd(m1 + i), _mm256_loadu_pd(r1 + i));
    const __m256d out_side = _mm256_div_pd(
        _mm256_add_pd(_mm256_loadu_pd(m2 + i), _mm256_loadu_pd(m3 + i)), _mm256_loadu_pd(r2 + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vb, _mm256_sub_pd(in, out_side)));
  }
  for (; i < n; ++i) out[i] = beta * (m1[i] / r1[i] - (m2[i] + m3[i]) / r2[i]);
}

constexpr KernelTable kAvx2{
    "avx2", sum,        sum_squares, sum_positive, dot,      scale,
    axpy,   scaled_add, floored_sub, momentum,
};

}  // namespace

const KernelTable& avx2_table_unchecked() noexcept { return kAvx2; }

}  // namespace tensecon::kernels
