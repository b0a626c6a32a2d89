#include "tensecon/matrix.hpp"

#include <cmath>
#include <string>

#include "tensecon/error.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("matrix fill value must be finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw InvalidArgument("matrix of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                          " given " + std::to_string(values_.size()) + " values");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidArgument("ragged matrix rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(flat));
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " does not match " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

std::size_t Dims::extent(Axis a) const noexcept {
  switch (a) {
    case Axis::sector: return sectors;
    case Axis::agent: return agents;
    case Axis::time: return periods;
  }
  return 0;
}

namespace {

void check_dims(const Dims& d) {
  if (d.sectors == 0 || d.agents == 0 || d.periods == 0) {
    throw InvalidArgument("tensor extents must all be >= 1");
  }
}

}  // namespace

Tensor3::Tensor3(Dims dims) : dims_(dims) {
  check_dims(dims_);
  values_.assign(dims_.count(), 0.0);
}

Tensor3::Tensor3(Dims dims, std::vector<double> values) : dims_(dims), values_(std::move(values)) {
  check_dims(dims_);
  if (values_.size() != dims_.count()) {
    throw InvalidArgument("tensor expects " + std::to_string(dims_.count()) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("tensor entries must be finite");
  }
}

Matrix Tensor3::time_slice(std::size_t k) const {
  Matrix out(dims_.sectors, dims_.agents);
  for (std::size_t i = 0; i < dims_.sectors; ++i)
    for (std::size_t j = 0; j < dims_.agents; ++j) out(i, j) = (*this)(i, j, k);
  return out;
}

void Tensor3::set_time_slice(std::size_t k, const Matrix& slice) {
  if (slice.rows() != dims_.sectors || slice.cols() != dims_.agents) {
    throw InvalidArgument("time slice shape does not match tensor sector x agent extents");
  }
  for (std::size_t i = 0; i < dims_.sectors; ++i)
    for (std::size_t j = 0; j < dims_.agents; ++j) (*this)(i, j, k) = slice(i, j);
}

}  // namespace tensecon
