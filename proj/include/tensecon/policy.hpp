#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tensecon/matrix.hpp"
#include "tensecon/momentum.hpp"
#include "tensecon/taxonomy.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

/// Lower bound on any adjusted resistance.
inline constexpr double kResistanceFloor = 1e-6;
/// Resistance reduction per currency unit of tax cut.
inline constexpr double kDefaultTaxCutKappa = 0.01;

/// m1' = m1 + lambda * s
struct StimulusPlan {
  double lambda = 0.0;
  Matrix s;

  void validate() const;
};

/// r' = max(r - mu * theta, floor)
struct RegulatoryPlan {
  double mu = 0.0;
  Matrix theta;

  void validate() const;
};

/// g' = g + gamma * f
struct FeedbackPlan {
  double gamma = 0.0;
  Matrix f;
  friend bool operator==(const FeedbackPlan&, const FeedbackPlan&) = default;
};

struct FeedbackTensorPlan {
  double gamma = 0.0;
  Tensor3 f;
  friend bool operator==(const FeedbackTensorPlan&, const FeedbackTensorPlan&) = default;
};

enum class ActionKind { spending, tax_cut, subsidy };

std::string_view to_string(ActionKind kind) noexcept;
/// std::nullopt for anything but "spending", "tax_cut", "subsidy".
std::optional<ActionKind> parse_action_kind(std::string_view s) noexcept;

/// A discrete intervention on a block of sector x agent cells.
struct PolicyAction {
  ActionKind kind = ActionKind::spending;
  double magnitude = 0.0;  // currency units per period
  std::vector<std::size_t> target_sectors;
  std::vector<std::size_t> target_agents;

  /// Throws ValidationError on empty, duplicate, or out-of-range targets or a
  /// negative / non-finite magnitude.
  void validate(const Taxonomy& tax) const;

  friend bool operator==(const PolicyAction&, const PolicyAction&) = default;
};

Matrix apply_stimulus(const Matrix& m1, const StimulusPlan& plan);

/// Entries never fall below kResistanceFloor.
Matrix adjust_resistance(const Matrix& r, const RegulatoryPlan& plan);

MomentumMatrix apply_feedback(const MomentumMatrix& g, const FeedbackPlan& plan);
Tensor3 apply_feedback(const Tensor3& g, const FeedbackTensorPlan& plan);

/// Routes an action onto the operators. The magnitude is split equally over
/// the |sectors| * |agents| targeted cells.
///   spending, subsidy: stimulus with lambda = 1, s = share per cell;
///                      regulatory plan is the identity.
///   tax_cut:           regulatory with mu = 1, theta = kappa * share per cell
///                      (so sum of mu * theta = kappa * magnitude);
///                      stimulus plan is the identity.
std::pair<StimulusPlan, RegulatoryPlan> action_to_plans(const PolicyAction& a,
                                                         const Taxonomy& tax,
                                                         double kappa = kDefaultTaxCutKappa);

}  // namespace tensecon
