#include "tensecon/tensor_core.hpp"

#include <cmath>
#include <string>

#include "tensecon/error.hpp"
#include "tensecon/kernels.hpp"
#include "tensecon/rng.hpp"

namespace tensecon {

void AlsConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("tol must be positive");
}

Tensor3 outer_product3(std::span<const double> x, std::span<const double> y,
                       std::span<const double> z) {
  if (x.empty() || y.empty() || z.empty()) {
    throw InvalidArgument("outer_product3: every factor needs at least one entry");
  }
  for (auto v : {x, y, z}) {
    for (double e : v) {
      if (!std::isfinite(e)) throw InvalidArgument("outer_product3: non-finite factor entry");
    }
  }
  Tensor3 out(Dims{x.size(), y.size(), z.size()});
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) kernels::scale(z, x[i] * y[j], out.fiber(i, j));
  }
  return out;
}

Tensor3 reconstruct(const FactorTriple& f) {
  Tensor3 out = outer_product3(f.x, f.y, f.z);
  kernels::scale(out.values(), f.weight, out.values());
  return out;
}

double frobenius_norm(const Tensor3& t) { return std::sqrt(kernels::sum_squares(t.values())); }

double frobenius_distance(const Tensor3& a, const Tensor3& b) {
  if (!(a.dims() == b.dims())) throw InvalidArgument("frobenius_distance: shape mismatch");
  std::vector<double> diff(a.size());
  kernels::scaled_add(a.values(), -1.0, b.values(), diff);
  return std::sqrt(kernels::sum_squares(diff));
}

Axis axis_from_id(int id) {
  if (id < 0 || id > 2) throw InvalidArgument("invalid mode id " + std::to_string(id));
  return static_cast<Axis>(id);
}

Matrix mode_unfold(const Tensor3& t, Axis mode) {
  const Dims& d = t.dims();
  switch (mode) {
    case Axis::sector: {
      // Already contiguous: row i is the (agent, time) block of sector i.
      const std::size_t cols = d.agents * d.periods;
      std::vector<double> v(t.values().begin(), t.values().end());
      return Matrix(d.sectors, cols, std::move(v));
    }
    case Axis::agent: {
      Matrix m(d.agents, d.sectors * d.periods);
      for (std::size_t i = 0; i < d.sectors; ++i)
        for (std::size_t j = 0; j < d.agents; ++j)
          for (std::size_t k = 0; k < d.periods; ++k) m(j, i * d.periods + k) = t(i, j, k);
      return m;
    }
    case Axis::time: {
      Matrix m(d.periods, d.sectors * d.agents);
      for (std::size_t i = 0; i < d.sectors; ++i)
        for (std::size_t j = 0; j < d.agents; ++j)
          for (std::size_t k = 0; k < d.periods; ++k) m(k, i * d.agents + j) = t(i, j, k);
      return m;
    }
  }
  throw InvalidArgument("invalid mode id " + std::to_string(static_cast<int>(mode)));
}

Matrix contract_time(const Tensor3& t) {
  const Dims& d = t.dims();
  Matrix out(d.sectors, d.agents);
  for (std::size_t i = 0; i < d.sectors; ++i)
    for (std::size_t j = 0; j < d.agents; ++j) out(i, j) = kernels::sum(t.fiber(i, j));
  return out;
}

namespace {

double norm(std::span<const double> v) { return std::sqrt(kernels::sum_squares(v)); }

// Normalizes v in place; leaves it untouched when it is zero.
double normalize(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0.0) kernels::scale(v, 1.0 / n, v);
  return n;
}

// Leading eigenvector of A * A^T by power iteration.
std::vector<double> leading_left_vector(const Matrix& a, Xoshiro256ss& rng) {
  const std::size_t n = a.rows();
  Matrix gram(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) gram(r, c) = gram(c, r) = kernels::dot(a.row(r), a.row(c));

  std::vector<double> v(n);
  for (double& e : v) e = rng.normal();
  normalize(v);
  std::vector<double> next(n);
  for (int it = 0; it < 1000; ++it) {
    for (std::size_t r = 0; r < n; ++r) next[r] = kernels::dot(gram.row(r), v);
    if (normalize(next) == 0.0) break;
    double change = 0.0;
    for (std::size_t r = 0; r < n; ++r) change = std::max(change, std::abs(next[r] - v[r]));
    v.swap(next);
    if (change < 1e-15) break;
  }
  return v;
}

// w(i, j) = <t(i, j, :), z>
Matrix contract_fibers(const Tensor3& t, std::span<const double> z) {
  const Dims& d = t.dims();
  Matrix w(d.sectors, d.agents);
  for (std::size_t i = 0; i < d.sectors; ++i)
    for (std::size_t j = 0; j < d.agents; ++j) w(i, j) = kernels::dot(t.fiber(i, j), z);
  return w;
}

// Zeros stay +0.0 so printed factors do not show "-0".
void flip(std::vector<double>& v) {
  for (double& e : v) e = e == 0.0 ? 0.0 : -e;
}

bool first_nonzero_negative(const std::vector<double>& v) {
  for (double e : v) {
    if (e != 0.0) return e < 0.0;
  }
  return false;
}

}  // namespace

Rank1Result rank1_approx(const Tensor3& t, const AlsConfig& cfg) {
  cfg.validate();
  const Dims& d = t.dims();
  Rank1Result result;
  const double t_norm = frobenius_norm(t);
  if (t_norm == 0.0) {
    result.factors = {0.0, std::vector<double>(d.sectors), std::vector<double>(d.agents),
                      std::vector<double>(d.periods)};
    result.residual_history.push_back(0.0);
    return result;
  }

  Xoshiro256ss rng(cfg.seed);
  FactorTriple& f = result.factors;
  f.x = leading_left_vector(mode_unfold(t, Axis::sector), rng);
  f.y = leading_left_vector(mode_unfold(t, Axis::agent), rng);
  f.z = leading_left_vector(mode_unfold(t, Axis::time), rng);
  {
    const Matrix w = contract_fibers(t, f.z);
    double weight = 0.0;
    for (std::size_t i = 0; i < d.sectors; ++i) weight += f.x[i] * kernels::dot(w.row(i), f.y);
    f.weight = weight;
  }
  result.residual_history.push_back(frobenius_distance(t, reconstruct(f)));

  std::vector<double> x_new(d.sectors);
  std::vector<double> y_new(d.agents);
  std::vector<double> z_new(d.periods);
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    // x and y both contract against the current z, so one pass serves both.
    const Matrix w = contract_fibers(t, f.z);
    for (std::size_t i = 0; i < d.sectors; ++i) x_new[i] = kernels::dot(w.row(i), f.y);
    if (normalize(x_new) > 0.0) f.x = x_new;

    std::fill(y_new.begin(), y_new.end(), 0.0);
    for (std::size_t i = 0; i < d.sectors; ++i) kernels::axpy(f.x[i], w.row(i), y_new);
    if (normalize(y_new) > 0.0) f.y = y_new;

    std::fill(z_new.begin(), z_new.end(), 0.0);
    for (std::size_t i = 0; i < d.sectors; ++i)
      for (std::size_t j = 0; j < d.agents; ++j) kernels::axpy(f.x[i] * f.y[j], t.fiber(i, j), z_new);
    f.weight = normalize(z_new);
    if (f.weight > 0.0) f.z = z_new;

    const double residual = frobenius_distance(t, reconstruct(f));
    const double change = std::abs(result.residual_history.back() - residual);
    result.residual_history.push_back(residual);
    result.iterations = iter;
    if (change <= cfg.tol * t_norm) break;
  }

  if (f.weight < 0.0) {
    f.weight = -f.weight;
    flip(f.x);
  }
  if (first_nonzero_negative(f.x)) {
    flip(f.x);
    flip(f.z);
  }
  if (first_nonzero_negative(f.y)) {
    flip(f.y);
    flip(f.z);
  }
  result.residual = frobenius_distance(t, reconstruct(f));
  return result;
}

}  // namespace tensecon
