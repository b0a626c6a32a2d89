#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tensecon/matrix.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

/// Weighted rank-1 factors: t ~ weight * x (outer) y (outer) z.
///
/// Factors are unit-norm, or all zero together with weight 0. After
/// rank1_approx the signs are normalized: weight >= 0 and the first nonzero
/// entry of both x and y is positive (z carries the remaining sign).
struct FactorTriple {
  double weight = 0.0;
  std::vector<double> x;  // sectors
  std::vector<double> y;  // agents
  std::vector<double> z;  // periods

  Dims dims() const noexcept { return {x.size(), y.size(), z.size()}; }
};

struct AlsConfig {
  int max_iters = 200;
  /// Stop once |residual change| <= tol * ||t||_F.
  double tol = 1e-10;
  /// Seeds the power-iteration starting vectors of the initialization.
  std::uint64_t seed = 0;

  /// Throws InvalidArgument unless max_iters >= 1 and tol > 0.
  void validate() const;
};

struct Rank1Result {
  FactorTriple factors;
  double residual = 0.0;
  int iterations = 0;
  /// Residual after initialization, then after each sweep.
  std::vector<double> residual_history;
};

/// result(i, j, k) = x[i] * y[j] * z[k]. Throws InvalidArgument on an empty
/// or non-finite vector.
Tensor3 outer_product3(std::span<const double> x, std::span<const double> y,
                       std::span<const double> z);

Tensor3 reconstruct(const FactorTriple& f);

double frobenius_norm(const Tensor3& t);

/// ||a - b||_F; shapes must match.
double frobenius_distance(const Tensor3& a, const Tensor3& b);

/// Mode-n unfolding. Rows index `mode`; columns enumerate the two remaining
/// axes in canonical (sector, agent, time) order, the later axis fastest:
///   sector: col = j * periods + k
///   agent:  col = i * periods + k
///   time:   col = i * agents + j
Matrix mode_unfold(const Tensor3& t, Axis mode);

/// Maps 0/1/2 to an Axis; anything else is an InvalidArgument.
Axis axis_from_id(int id);

/// out(i, j) = sum over k of t(i, j, k).
Matrix contract_time(const Tensor3& t);

/// Best rank-1 approximation by alternating least squares (the rank-1
/// higher-order power method).
///
/// Each factor starts as the leading eigenvector of its unfolding's Gram
/// matrix, found by power iteration from a seeded random start. Sweeps
/// update x, y, z in turn, absorbing the norm into the weight, until the
/// residual change falls under cfg.tol * ||t||_F or cfg.max_iters sweeps
/// ran. A zero tensor returns weight 0, zero factors, residual 0.
Rank1Result rank1_approx(const Tensor3& t, const AlsConfig& cfg = {});

}  // namespace tensecon
