#pragma once

#include <span>

#include "tensecon/matrix.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

/// Scalar amplifier: productivity layers against input/output resistance.
struct AmplifierParams {
  double beta = 1.0;
  double p1 = 0.0;  // foundational layer
  double p2 = 0.0;
  double p3 = 0.0;
  double r_in = 1.0;
  double r_out = 1.0;

  void validate() const;
};

/// Per-step productivity and resistance grids, all sector x agent.
/// (m1, r1) is the input side of the amplifier; (m2, m3, r2) the output side.
struct MomentumInputs {
  Matrix m1, m2, m3;
  Matrix r1, r2;
  double beta = 1.0;

  /// Throws InvalidArgument on mismatched shapes, an empty grid, a
  /// non-positive resistance, or a non-finite beta.
  void validate() const;

  std::size_t rows() const noexcept { return m1.rows(); }
  std::size_t cols() const noexcept { return m1.cols(); }

  friend bool operator==(const MomentumInputs&, const MomentumInputs&) = default;
};

/// Momentum per sector x agent cell.
struct MomentumMatrix {
  Matrix g;

  friend bool operator==(const MomentumMatrix&, const MomentumMatrix&) = default;
};

/// beta * (p1 / r_in - (p2 + p3) / r_out)
double gdp_amplifier(const AmplifierParams& p);

/// g(i, j) = beta * (m1 / r1 - (m2 + m3) / r2), elementwise.
MomentumMatrix momentum_slice(const MomentumInputs& inp);

/// Stacks momentum_slice of each step as the tensor's time slices.
Tensor3 momentum_tensor(std::span<const MomentumInputs> per_step);

/// Time-averaged flow: g(i, j) = sum_k t(i, j, k) / periods.
MomentumMatrix momentum_matrix_from_flows(const Tensor3& t);

/// Mean over every entry of r1 and r2.
double aggregate_resistance(const MomentumInputs& inp);

}  // namespace tensecon
