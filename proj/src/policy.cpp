#include "tensecon/policy.hpp"

#include <cmath>
#include <set>

#include "tensecon/error.hpp"
#include "tensecon/kernels.hpp"

namespace tensecon {

void StimulusPlan::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("lambda must be >= 0");
  for (double v : s.values()) {
    if (v < 0.0) throw InvalidArgument("stimulus entries must be >= 0");
  }
}

void RegulatoryPlan::validate() const {
  if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("mu must be >= 0");
  for (double v : theta.values()) {
    if (v < 0.0) throw InvalidArgument("regulatory efficiency entries must be >= 0");
  }
}

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::spending: return "spending";
    case ActionKind::tax_cut: return "tax_cut";
    case ActionKind::subsidy: return "subsidy";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view s) noexcept {
  if (s == "spending") return ActionKind::spending;
  if (s == "tax_cut") return ActionKind::tax_cut;
  if (s == "subsidy") return ActionKind::subsidy;
  return std::nullopt;
}

namespace {

void check_targets(const std::vector<std::size_t>& targets, std::size_t bound, const char* axis) {
  if (targets.empty()) throw ValidationError(std::string("action has no target ") + axis + "s");
  std::set<std::size_t> seen;
  for (std::size_t t : targets) {
    if (t >= bound) {
      throw ValidationError(std::string(axis) + " index " + std::to_string(t) + " out of range");
    }
    if (!seen.insert(t).second) {
      throw ValidationError(std::string("duplicate target ") + axis + " " + std::to_string(t));
    }
  }
}

}  // namespace

void PolicyAction::validate(const Taxonomy& tax) const {
  if (!std::isfinite(magnitude) || magnitude < 0.0) {
    throw ValidationError("action magnitude must be finite and >= 0");
  }
  check_targets(target_sectors, tax.sectors.size(), "sector");
  check_targets(target_agents, tax.agents.size(), "agent");
}

Matrix apply_stimulus(const Matrix& m1, const StimulusPlan& plan) {
  require_same_shape(m1, plan.s, "stimulus matrix");
  plan.validate();
  Matrix out(m1.rows(), m1.cols());
  kernels::scaled_add(m1.values(), plan.lambda, plan.s.values(), out.values());
  return out;
}

Matrix adjust_resistance(const Matrix& r, const RegulatoryPlan& plan) {
  require_same_shape(r, plan.theta, "regulatory efficiency matrix");
  plan.validate();
  Matrix out(r.rows(), r.cols());
  kernels::active().floored_sub(r.values().data(), plan.mu, plan.theta.values().data(),
                                kResistanceFloor, out.values().data(), r.size());
  return out;
}

MomentumMatrix apply_feedback(const MomentumMatrix& g, const FeedbackPlan& plan) {
  require_same_shape(g.g, plan.f, "feedback matrix");
  if (!std::isfinite(plan.gamma)) throw InvalidArgument("gamma must be finite");
  // gamma = 0 must return g bit-exactly; g + 0 * f would turn -0.0 into +0.0.
  if (plan.gamma == 0.0) return g;
  Matrix out(g.g.rows(), g.g.cols());
  kernels::scaled_add(g.g.values(), plan.gamma, plan.f.values(), out.values());
  return {std::move(out)};
}

Tensor3 apply_feedback(const Tensor3& g, const FeedbackTensorPlan& plan) {
  if (!(g.dims() == plan.f.dims())) throw InvalidArgument("feedback tensor: shape mismatch");
  if (!std::isfinite(plan.gamma)) throw InvalidArgument("gamma must be finite");
  if (plan.gamma == 0.0) return g;
  Tensor3 out(g.dims());
  kernels::scaled_add(g.values(), plan.gamma, plan.f.values(), out.values());
  return out;
}

std::pair<StimulusPlan, RegulatoryPlan> action_to_plans(const PolicyAction& a,
                                                         const Taxonomy& tax, double kappa) {
  a.validate(tax);
  if (!std::isfinite(kappa) || kappa < 0.0) throw InvalidArgument("kappa must be >= 0");
  const std::size_t rows = tax.sectors.size();
  const std::size_t cols = tax.agents.size();
  const double share =
      a.magnitude / static_cast<double>(a.target_sectors.size() * a.target_agents.size());

  StimulusPlan stim{0.0, Matrix(rows, cols)};
  RegulatoryPlan reg{0.0, Matrix(rows, cols)};
  switch (a.kind) {
    case ActionKind::spending:
    case ActionKind::subsidy:
      stim.lambda = 1.0;
      for (std::size_t i : a.target_sectors)
        for (std::size_t j : a.target_agents) stim.s(i, j) = share;
      break;
    case ActionKind::tax_cut:
      reg.mu = 1.0;
      for (std::size_t i : a.target_sectors)
        for (std::size_t j : a.target_agents) reg.theta(i, j) = kappa * share;
      break;
  }
  return {std::move(stim), std::move(reg)};
}

}  // namespace tensecon
