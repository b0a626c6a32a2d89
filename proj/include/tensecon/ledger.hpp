#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensecon/error.hpp"
#include "tensecon/taxonomy.hpp"
#include "tensecon/tensor3.hpp"

namespace tensecon {

/// One scalar spend before classification.
struct Transaction {
  double amount = 0.0;
  std::string sector;
  std::string agent;
  std::string period;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// A transaction resolved to a tensor cell.
struct CellIncrement {
  std::size_t sector_index = 0;
  std::size_t agent_index = 0;
  std::size_t period_index = 0;
  double amount = 0.0;

  friend bool operator==(const CellIncrement&, const CellIncrement&) = default;
};

/// build_tensor failure: which transaction (0-based) and why.
class ClassificationError : public ValidationError {
 public:
  ClassificationError(std::size_t index, const ValidationError& cause)
      : ValidationError("transaction " + std::to_string(index) + ": " + cause.what()),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Resolves the labels against the taxonomy; the amount passes through
/// unchanged. Throws UnknownLabel (axis + label) or ValidationError for a
/// non-positive or non-finite amount.
CellIncrement classify(const Transaction& txn, const Taxonomy& tax);

/// Sums transactions into a tensor shaped by the taxonomy. Fails fast with
/// ClassificationError on the first transaction that does not classify.
///
/// Per-cell amounts are summed in ascending order, so the result is exactly
/// invariant under any reordering of `txns`.
Tensor3 build_tensor(std::span<const Transaction> txns, const Taxonomy& tax);

/// Parses `amount,sector,agent,period` CSV. Errors carry the 1-based line.
std::vector<Transaction> parse_transactions_csv(std::string_view text);

/// Inverse of parse_transactions_csv; amounts use shortest round-trip form.
std::string write_transactions_csv(std::span<const Transaction> txns);

// --- World Bank indicator ingestion ---

struct IndicatorRole {
  std::string indicator_code;  // e.g. "NY.GDP.MKTP.CD"
  std::string role;            // e.g. "gdp_level"
};

/// A yearly series; std::nullopt marks a gap in the source file.
struct YearSeries {
  std::string indicator_code;
  std::vector<int> years;
  std::vector<std::optional<double>> values;

  friend bool operator==(const YearSeries&, const YearSeries&) = default;
};

class MissingRoleError : public ValidationError {
 public:
  MissingRoleError(std::vector<std::string> missing, std::vector<std::string> found);
  const std::vector<std::string>& missing() const noexcept { return missing_; }
  const std::vector<std::string>& found() const noexcept { return found_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> found_;
};

struct WorldBankOptions {
  /// Roles that must be present in addition to every mapped role.
  std::vector<std::string> required_roles;
  /// Restrict wide-layout rows to one "Country Code"; needed when the file
  /// carries several countries.
  std::optional<std::string> country_code;
};

/// Reads a World Bank export, either wide (metadata columns including
/// "Indicator Code", then one column per year, optionally preceded by
/// preamble lines) or long (`indicator,year,value`). The layout is detected
/// from the header. Returns one chronological series per role; empty cells
/// stay gaps. Throws MissingRoleError when a required role is unmapped or
/// its indicator is absent from the file.
std::map<std::string, YearSeries> ingest_worldbank_csv(std::string_view text,
                                                       std::span<const IndicatorRole> mapping,
                                                       const WorldBankOptions& options = {});

}  // namespace tensecon
