#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "tensecon/matrix.hpp"

namespace tensecon {

enum class Axis { sector = 0, agent = 1, time = 2 };

/// Extents along (sector, agent, time).
struct Dims {
  std::size_t sectors = 1;
  std::size_t agents = 1;
  std::size_t periods = 1;

  std::size_t count() const noexcept { return sectors * agents * periods; }
  std::size_t extent(Axis a) const noexcept;
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense third-order money tensor, row-major in (sector, agent, time) so the
/// time axis is contiguous. Every entry is finite and every extent is >= 1.
class Tensor3 {
 public:
  /// Zero tensor. Throws InvalidArgument if any extent is 0.
  explicit Tensor3(Dims dims);
  /// Throws InvalidArgument on a length mismatch, a zero extent, or a
  /// non-finite value.
  Tensor3(Dims dims, std::vector<double> values);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * dims_.agents + j) * dims_.periods + k;
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[index(i, j, k)];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values_[index(i, j, k)];
  }

  /// The contiguous time series of cell (i, j).
  std::span<const double> fiber(std::size_t i, std::size_t j) const {
    return {values_.data() + index(i, j, 0), dims_.periods};
  }
  std::span<double> fiber(std::size_t i, std::size_t j) {
    return {values_.data() + index(i, j, 0), dims_.periods};
  }

  /// Sector x agent slice at period k (copied; the layout is strided).
  Matrix time_slice(std::size_t k) const;
  void set_time_slice(std::size_t k, const Matrix& slice);

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

}  // namespace tensecon
