#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>
#include "tensecon/sim.hpp"
#include "tensecon/taxonomy.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

/// Configuration, shocks and intervention schedule of one simulation.
struct Scenario {
  SimConfig config;
  std::vector<Shock> shocks;
  Schedule schedule;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Header `step,gdp_growth,inflation,unemployment,trade_balance,
/// economic_resistance,actions`, one row per frame, reals as %.9g and actions
/// as `kind:magnitude` joined by ';'. LF line endings.
std::string write_indicator_csv(std::span<const IndicatorFrame> frames);

/// {"schema_version", "dims", "sectors", "agents", "periods", "values"} plus
/// any non-empty sector tags. Values are row-major (sector, agent, time) and
/// printed in shortest round-trip form, so read(write(t)) == t exactly.
std::string write_tensor_json(const Tensor3& t, const Taxonomy& tax);
/// Throws ValidationError on malformed JSON, unknown keys, or dims that
/// disagree with the labels or the value count.
std::pair<Tensor3, Taxonomy> read_tensor_json(std::string_view text);

nlohmann::json taxonomy_to_json(const Taxonomy& tax);
/// Strict: unknown keys rejected; periods may be omitted only when
/// `default_periods` is non-empty.
Taxonomy taxonomy_from_json(const nlohmann::json& j, const std::string& path,
                            const std::vector<std::string>& default_periods = {});
Taxonomy read_taxonomy_json(std::string_view text);

/// Scenario text is a JSON object. Only `taxonomy` (sectors, agents) is
/// required; every other field has a default. Unknown keys, missing
/// required fields and invariant violations raise ValidationError whose
/// message starts with the JSON path of the offending field.
Scenario read_scenario(std::string_view text);
/// Writes every field explicitly; read_scenario(write_scenario(s)) == s.
std::string write_scenario(const Scenario& s);

/// Actions in JSON name their targets by label:
/// {"kind", "magnitude", "sectors": [...], "agents": [...]}.
nlohmann::json action_to_json(const PolicyAction& a, const Taxonomy& tax);
PolicyAction action_from_json(const nlohmann::json& j, const Taxonomy& tax,
                              const std::string& path);

/// Frame fields mirror the indicator CSV columns; actions use action_to_json.
nlohmann::json frame_to_json(const IndicatorFrame& f, const Taxonomy& tax);
IndicatorFrame frame_from_json(const nlohmann::json& j, const Taxonomy& tax);

/// A feedback spec {"gamma": x, "f": number | matrix}; f defaults to 1.0
/// in every cell of the rows x cols grid.
FeedbackPlan feedback_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols,
                                const std::string& path);

}  // namespace tensecon
