#include "tensecon/momentum.hpp"

#include <cmath>

#include "tensecon/error.hpp"
#include "tensecon/kernels.hpp"
#include "tensecon/tensor_core.hpp"

namespace tensecon {

void AmplifierParams::validate() const {
  if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
  if (!(r_in > 0.0) || !(r_out > 0.0)) throw InvalidArgument("resistances must be positive");
  for (double p : {p1, p2, p3, r_in, r_out}) {
    if (!std::isfinite(p)) throw InvalidArgument("amplifier parameters must be finite");
  }
  if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0) throw InvalidArgument("productivity must be >= 0");
}

void MomentumInputs::validate() const {
  if (m1.size() == 0) throw InvalidArgument("momentum inputs: empty grid");
  require_same_shape(m1, m2, "m2");
  require_same_shape(m1, m3, "m3");
  require_same_shape(m1, r1, "r1");
  require_same_shape(m1, r2, "r2");
  if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
  for (const Matrix* r : {&r1, &r2}) {
    for (double v : r->values()) {
      if (!(v > 0.0)) throw InvalidArgument("resistance entries must be strictly positive");
    }
  }
}

double gdp_amplifier(const AmplifierParams& p) {
  p.validate();
  return p.beta * (p.p1 / p.r_in - (p.p2 + p.p3) / p.r_out);
}

MomentumMatrix momentum_slice(const MomentumInputs& inp) {
  inp.validate();
  Matrix g(inp.rows(), inp.cols());
  kernels::active().momentum(inp.beta, inp.m1.values().data(), inp.r1.values().data(),
                             inp.m2.values().data(), inp.m3.values().data(),
                             inp.r2.values().data(), g.values().data(), g.size());
  return {std::move(g)};
}

Tensor3 momentum_tensor(std::span<const MomentumInputs> per_step) {
  if (per_step.empty()) throw InvalidArgument("momentum_tensor: empty input sequence");
  const std::size_t rows = per_step.front().rows();
  const std::size_t cols = per_step.front().cols();
  Tensor3 out(Dims{rows, cols, per_step.size()});
  for (std::size_t k = 0; k < per_step.size(); ++k) {
    if (per_step[k].rows() != rows || per_step[k].cols() != cols) {
      throw InvalidArgument("momentum_tensor: step " + std::to_string(k) +
                            " has a different grid shape");
    }
    out.set_time_slice(k, momentum_slice(per_step[k]).g);
  }
  return out;
}

MomentumMatrix momentum_matrix_from_flows(const Tensor3& t) {
  Matrix g = contract_time(t);
  const double periods = static_cast<double>(t.dims().periods);
  for (double& v : g.values()) v /= periods;
  return {std::move(g)};
}

double aggregate_resistance(const MomentumInputs& inp) {
  inp.validate();
  const double total = kernels::sum(inp.r1.values()) + kernels::sum(inp.r2.values());
  return total / static_cast<double>(inp.r1.size() + inp.r2.size());
}

}  // namespace tensecon
