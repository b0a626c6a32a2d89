#include "tensecon/sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tensecon/error.hpp"
#include "tensecon/kernels.hpp"

namespace tensecon {
namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void check_grid(const Matrix& m, const Taxonomy& tax, const std::string& path, double min_value) {
  if (m.rows() != tax.sectors.size() || m.cols() != tax.agents.size()) {
    invalid(path, "expected a " + std::to_string(tax.sectors.size()) + "x" +
                      std::to_string(tax.agents.size()) + " grid");
  }
  for (double v : m.values()) {
    if (!(v >= min_value)) invalid(path, "entries must be >= " + std::to_string(min_value));
  }
}

}  // namespace

void SimConfig::validate() const {
  try {
    taxonomy.validate();
  } catch (const ValidationError& e) {
    invalid("taxonomy", e.what());
  }
  std::set<std::string> brown(taxonomy.brown_sectors.begin(), taxonomy.brown_sectors.end());
  for (const auto& g : taxonomy.green_sectors) {
    if (brown.contains(g)) invalid("taxonomy.green_sectors", "sector '" + g + "' is also brown");
  }
  check_grid(initial.m1, taxonomy, "inputs.m1", 0.0);
  check_grid(initial.m2, taxonomy, "inputs.m2", 0.0);
  check_grid(initial.m3, taxonomy, "inputs.m3", 0.0);
  check_grid(initial.r1, taxonomy, "inputs.r1", kResistanceFloor);
  check_grid(initial.r2, taxonomy, "inputs.r2", kResistanceFloor);
  if (!std::isfinite(initial.beta) || !(initial.beta > 0.0)) invalid("beta", "must be > 0");

  const IndicatorParams& p = indicators;
  for (const auto& [name, v] : {std::pair{"g_star", p.g_star}, {"pi_star", p.pi_star},
                                {"okun_b", p.okun_b}, {"import_propensity", p.import_propensity},
                                {"noise_sd", p.noise_sd}}) {
    if (!std::isfinite(v)) invalid(std::string("indicators.") + name, "must be finite");
  }
  if (!(0.0 <= p.u_min && p.u_min < p.u0 && p.u0 < p.u_max && p.u_max <= 1.0)) {
    invalid("indicators.u0", "requires 0 <= u_min < u0 < u_max <= 1");
  }
  if (p.noise_sd < 0.0) invalid("indicators.noise_sd", "must be >= 0");
  if (p.import_propensity < 0.0 || p.import_propensity > 1.0) {
    invalid("indicators.import_propensity", "must lie in [0, 1]");
  }
  for (const auto& s : p.export_sectors) {
    if (std::find(taxonomy.sectors.begin(), taxonomy.sectors.end(), s) == taxonomy.sectors.end()) {
      invalid("indicators.export_sectors", "unknown sector '" + s + "'");
    }
  }
  if (!std::isfinite(tax_cut_kappa) || tax_cut_kappa < 0.0) invalid("tax_cut_kappa", "must be >= 0");
  if (steps < 1) invalid("steps", "must be >= 1");
}

std::string_view to_string(ShockKind kind) noexcept {
  switch (kind) {
    case ShockKind::financial_crisis: return "financial_crisis";
    case ShockKind::pandemic: return "pandemic";
    case ShockKind::green_transition: return "green_transition";
  }
  return "?";
}

std::optional<ShockKind> parse_shock_kind(std::string_view s) noexcept {
  if (s == "financial_crisis") return ShockKind::financial_crisis;
  if (s == "pandemic") return ShockKind::pandemic;
  if (s == "green_transition") return ShockKind::green_transition;
  return std::nullopt;
}

void Shock::validate() const {
  if (start_step < 0) throw ValidationError("shock start_step must be >= 0");
  if (duration < 1) throw ValidationError("shock duration must be >= 1");
  if (!std::isfinite(severity) || severity < 0.0) {
    throw ValidationError("shock severity must be finite and >= 0");
  }
}

EconomyState init_state(const SimConfig& cfg) {
  cfg.validate();
  EconomyState s;
  s.step = 0;
  s.inputs = cfg.initial;
  s.g_prev_total = kernels::sum(momentum_slice(s.inputs).g.values());
  s.u_prev = cfg.indicators.u0;
  s.rng = Xoshiro256ss(cfg.seed);
  return s;
}

MomentumInputs apply_shock(const MomentumInputs& inputs, const Shock& shock,
                           const SimConfig& cfg) {
  shock.validate();
  MomentumInputs out = inputs;
  switch (shock.kind) {
    case ShockKind::financial_crisis: {
      const double factor = 1.0 + shock.severity;
      kernels::scale(inputs.r1.values(), factor, out.r1.values());
      kernels::scale(inputs.r2.values(), factor, out.r2.values());
      break;
    }
    case ShockKind::pandemic: {
      const double service = 1.0 - std::min(shock.severity, 0.95);
      const double other = 1.0 - std::min(shock.severity / 2.0, 0.95);
      const auto services = cfg.taxonomy.tagged(cfg.taxonomy.service_sectors);
      for (std::size_t i = 0; i < out.m1.rows(); ++i) {
        const bool is_service = std::find(services.begin(), services.end(), i) != services.end();
        kernels::scale(inputs.m1.row(i), is_service ? service : other, out.m1.row(i));
      }
      break;
    }
    case ShockKind::green_transition: {
      const auto brown = cfg.taxonomy.tagged(cfg.taxonomy.brown_sectors);
      const auto green = cfg.taxonomy.tagged(cfg.taxonomy.green_sectors);
      if (brown.empty() || green.empty()) break;
      const double rate = std::min(shock.severity / shock.duration, 1.0);
      for (std::size_t j = 0; j < out.m1.cols(); ++j) {
        double moved = 0.0;
        for (std::size_t i : brown) {
          const double m = rate * out.m1(i, j);
          out.m1(i, j) -= m;
          moved += m;
        }
        const double share = moved / static_cast<double>(green.size());
        for (std::size_t i : green) out.m1(i, j) += share;
      }
      break;
    }
  }
  return out;
}

IndicatorDraw derive_indicators(double prev_total, double u_prev, const MomentumMatrix& g,
                                const MomentumInputs& inputs, const SimConfig& cfg,
                                Xoshiro256ss& rng) {
  const IndicatorParams& p = cfg.indicators;
  const double noise_inflation = p.noise_sd * rng.normal();
  const double noise_unemployment = p.noise_sd * rng.normal();

  IndicatorDraw d{};
  const double total = kernels::sum(g.g.values());
  d.gdp_growth = (total - prev_total) / std::max(std::abs(prev_total), kGrowthEpsilon);
  const double gap = d.gdp_growth - p.g_star;
  d.inflation = p.pi_star + 0.5 * gap + noise_inflation;
  d.unemployment = std::clamp(u_prev - p.okun_b * gap + noise_unemployment, p.u_min, p.u_max);

  double exports = 0.0;
  for (std::size_t i : cfg.taxonomy.tagged(p.export_sectors)) exports += kernels::sum(g.g.row(i));
  d.trade_balance = exports - p.import_propensity * kernels::sum_positive(g.g.values());
  d.economic_resistance = aggregate_resistance(inputs);
  return d;
}

std::pair<EconomyState, IndicatorFrame> step(const SimConfig& cfg, const EconomyState& state,
                                             std::span<const PolicyAction> interventions,
                                             const std::optional<FeedbackPlan>& feedback,
                                             std::span<const Shock> shocks) {
  EconomyState next = state;

  // 1. shocks
  for (const Shock& s : shocks) {
    if (s.active_at(state.step) && s.kind == ShockKind::green_transition) {
      next.inputs = apply_shock(next.inputs, s, cfg);
    }
  }
  MomentumInputs working = next.inputs;
  for (const Shock& s : shocks) {
    if (s.active_at(state.step) && s.kind != ShockKind::green_transition) {
      working = apply_shock(working, s, cfg);
    }
  }

  // 2. interventions
  for (const PolicyAction& a : interventions) {
    auto [stim, reg] = action_to_plans(a, cfg.taxonomy, cfg.tax_cut_kappa);
    working.m1 = apply_stimulus(working.m1, stim);
    working.r1 = adjust_resistance(working.r1, reg);
  }

  // 3-4. momentum, feedback
  MomentumMatrix g = momentum_slice(working);
  if (feedback) g = apply_feedback(g, *feedback);

  // 5. indicators
  const IndicatorDraw d =
      derive_indicators(state.g_prev_total, state.u_prev, g, working, cfg, next.rng);
  IndicatorFrame frame{state.step,    d.gdp_growth,          d.inflation,
                       d.unemployment, d.trade_balance,      d.economic_resistance,
                       {interventions.begin(), interventions.end()}};

  // 6. drift
  kernels::scale(next.inputs.m1.values(), 1.0 + cfg.indicators.g_star, next.inputs.m1.values());

  next.step = state.step + 1;
  next.g_prev_total = kernels::sum(g.g.values());
  next.u_prev = d.unemployment;
  return {std::move(next), std::move(frame)};
}

std::vector<IndicatorFrame> run(const SimConfig& cfg, std::span<const Shock> shocks,
                                const Schedule& schedule) {
  for (const Shock& s : shocks) s.validate();
  EconomyState state = init_state(cfg);
  std::vector<IndicatorFrame> frames;
  frames.reserve(static_cast<std::size_t>(cfg.steps));
  static const StepInput kNothing{};
  for (int k = 0; k < cfg.steps; ++k) {
    const auto it = schedule.find(k);
    const StepInput& in = it == schedule.end() ? kNothing : it->second;
    auto [next, frame] = step(cfg, state, in.actions, in.feedback, shocks);
    state = std::move(next);
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace tensecon
