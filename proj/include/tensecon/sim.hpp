#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tensecon/momentum.hpp"
#include "tensecon/policy.hpp"
#include "tensecon/rng.hpp"
#include "tensecon/taxonomy.hpp"

namespace tensecon {

struct IndicatorParams {
  double g_star = 0.005;    // target growth per step; also the m1 drift
  double pi_star = 0.02;    // baseline inflation
  double okun_b = 0.5;      // unemployment sensitivity to the growth gap
  double u0 = 0.06;
  double u_min = 0.0;
  double u_max = 1.0;
  std::vector<std::string> export_sectors;
  double import_propensity = 0.0;
  double noise_sd = 0.0;

  friend bool operator==(const IndicatorParams&, const IndicatorParams&) = default;
};

struct SimConfig {
  std::string name;
  Taxonomy taxonomy;
  MomentumInputs initial;  // includes beta
  IndicatorParams indicators;
  double tax_cut_kappa = kDefaultTaxCutKappa;
  std::uint64_t seed = 0;
  int steps = 1;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class ShockKind { financial_crisis, pandemic, green_transition };

std::string_view to_string(ShockKind kind) noexcept;
std::optional<ShockKind> parse_shock_kind(std::string_view s) noexcept;

struct Shock {
  ShockKind kind = ShockKind::financial_crisis;
  int start_step = 0;
  int duration = 1;
  double severity = 0.0;

  bool active_at(int step) const noexcept {
    return step >= start_step && step < start_step + duration;
  }
  void validate() const;

  friend bool operator==(const Shock&, const Shock&) = default;
};

/// What the caller does at one step: interventions plus optional feedback.
struct StepInput {
  std::vector<PolicyAction> actions;
  std::optional<FeedbackPlan> feedback;

  friend bool operator==(const StepInput&, const StepInput&) = default;
};

using Schedule = std::map<int, StepInput>;

struct EconomyState {
  int step = 0;
  MomentumInputs inputs;  // persistent base; transient shocks and actions are not folded in
  double g_prev_total = 0.0;
  double u_prev = 0.0;
  Xoshiro256ss rng{0};

  friend bool operator==(const EconomyState&, const EconomyState&) = default;
};

struct IndicatorFrame {
  int step = 0;
  double gdp_growth = 0.0;
  double inflation = 0.0;
  double unemployment = 0.0;
  double trade_balance = 0.0;
  double economic_resistance = 0.0;
  std::vector<PolicyAction> actions;

  friend bool operator==(const IndicatorFrame&, const IndicatorFrame&) = default;
};

/// Denominator guard of the relative growth rate.
inline constexpr double kGrowthEpsilon = 1e-9;

EconomyState init_state(const SimConfig& cfg);

/// Applies one shock to `inputs`.
///   financial_crisis: r1, r2 scaled by (1 + severity).
///   pandemic: m1 of service sectors scaled by 1 - min(severity, 0.95), other
///             sectors by 1 - min(severity / 2, 0.95).
///   green_transition: in every agent column, a fraction
///             min(severity / duration, 1) of each brown sector's m1 moves
///             in equal parts to the green sectors. Column totals are kept.
MomentumInputs apply_shock(const MomentumInputs& inputs, const Shock& shock,
                           const SimConfig& cfg);

struct IndicatorDraw {
  double gdp_growth, inflation, unemployment, trade_balance, economic_resistance;
};

/// Indicator forms for one step. Draws two standard normals from `rng`, in
/// order: inflation noise, then unemployment noise. Both are drawn even when
/// noise_sd is 0 so the stream does not depend on it.
///   gdp_growth   = (sum g - prev_total) / max(|prev_total|, kGrowthEpsilon)
///   inflation    = pi_star + 0.5 (gdp_growth - g_star) + noise_sd * n1
///   unemployment = clamp(u_prev - okun_b (gdp_growth - g_star) + noise_sd * n2,
///                        u_min, u_max)
///   trade_balance = sum of g over export-sector rows
///                   - import_propensity * sum of max(g, 0)
///   economic_resistance = aggregate_resistance(inputs)
IndicatorDraw derive_indicators(double prev_total, double u_prev, const MomentumMatrix& g,
                                const MomentumInputs& inputs, const SimConfig& cfg,
                                Xoshiro256ss& rng);

/// Advances one step. Order:
///   1. shocks active at state.step: green_transition reallocates the
///      persistent m1; crisis and pandemic scale a working copy
///   2. each action: action_to_plans, then apply_stimulus on m1 and
///      adjust_resistance on r1 of the working copy
///   3. momentum_slice of the working copy
///   4. apply_feedback, when given
///   5. derive_indicators
///   6. drift: persistent m1 scaled by (1 + g_star)
/// Actions and transient shocks affect only this step.
std::pair<EconomyState, IndicatorFrame> step(const SimConfig& cfg, const EconomyState& state,
                                             std::span<const PolicyAction> interventions,
                                             const std::optional<FeedbackPlan>& feedback,
                                             std::span<const Shock> shocks);

/// cfg.steps frames from repeated step().
std::vector<IndicatorFrame> run(const SimConfig& cfg, std::span<const Shock> shocks,
                                const Schedule& schedule);

}  // namespace tensecon
