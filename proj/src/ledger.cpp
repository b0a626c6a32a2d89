#include "tensecon/ledger.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <utility>

#include "tensecon/csv.hpp"

namespace tensecon {

CellIncrement classify(const Transaction& txn, const Taxonomy& tax) {
  if (!std::isfinite(txn.amount) || !(txn.amount > 0.0)) {
    throw ValidationError("transaction amount must be positive and finite");
  }
  return {tax.sector_index(txn.sector), tax.agent_index(txn.agent),
          tax.period_index(txn.period), txn.amount};
}

Tensor3 build_tensor(std::span<const Transaction> txns, const Taxonomy& tax) {
  Tensor3 t(tax.dims());
  std::vector<std::pair<std::size_t, double>> cells;
  cells.reserve(txns.size());
  for (std::size_t n = 0; n < txns.size(); ++n) {
    CellIncrement inc;
    try {
      inc = classify(txns[n], tax);
    } catch (const ValidationError& e) {
      throw ClassificationError(n, e);
    }
    cells.emplace_back(t.index(inc.sector_index, inc.agent_index, inc.period_index), inc.amount);
  }
  std::sort(cells.begin(), cells.end());
  auto values = t.values();
  for (const auto& [cell, amount] : cells) values[cell] += amount;
  return t;
}

namespace {

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Transaction> parse_transactions_csv(std::string_view text) {
  const auto rows = csv::read(text);
  if (rows.empty()) throw ValidationError("missing header 'amount,sector,agent,period'", 1);
  const std::vector<std::string> header{"amount", "sector", "agent", "period"};
  if (rows.front().fields != header) {
    throw ValidationError("expected header 'amount,sector,agent,period'", rows.front().line);
  }
  std::vector<Transaction> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 4) {
      throw ValidationError("expected 4 fields, found " + std::to_string(row.fields.size()),
                            row.line);
    }
    const auto amount = parse_real(row.fields[0]);
    if (!amount) throw ValidationError("malformed amount '" + row.fields[0] + "'", row.line);
    if (!(*amount > 0.0)) throw ValidationError("amount must be positive", row.line);
    for (std::size_t f = 1; f < 4; ++f) {
      if (row.fields[f].empty()) throw ValidationError("empty " + header[f] + " label", row.line);
    }
    out.push_back({*amount, row.fields[1], row.fields[2], row.fields[3]});
  }
  return out;
}

std::string write_transactions_csv(std::span<const Transaction> txns) {
  std::string out = "amount,sector,agent,period\n";
  for (const auto& t : txns) {
    out += format_shortest(t.amount);
    out += ',' + t.sector + ',' + t.agent + ',' + t.period + '\n';
  }
  return out;
}

// --- World Bank ---

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& e : v) s += (s.empty() ? "" : ", ") + e;
  return s.empty() ? "(none)" : s;
}

std::optional<int> parse_year(std::string_view s) {
  if (s.size() != 4) return std::nullopt;
  int y = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return y;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_cell(const std::string& raw, std::size_t line) {
  const std::string s = trim(raw);
  if (s.empty() || s == "..") return std::nullopt;
  auto v = parse_real(s);
  if (!v) throw ValidationError("malformed value '" + s + "'", line);
  return v;
}

// Series keyed by indicator code.
using CodeSeries = std::map<std::string, YearSeries>;

CodeSeries read_long(const std::vector<csv::Row>& rows, std::size_t header_at) {
  CodeSeries out;
  std::map<std::string, std::map<int, std::optional<double>>> by_code;
  for (std::size_t r = header_at + 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 3) {
      throw ValidationError("expected 3 fields, found " + std::to_string(row.fields.size()),
                            row.line);
    }
    const auto year = parse_year(trim(row.fields[1]));
    if (!year) throw ValidationError("malformed year '" + row.fields[1] + "'", row.line);
    const std::string code = trim(row.fields[0]);
    if (!by_code[code].emplace(*year, parse_cell(row.fields[2], row.line)).second) {
      throw ValidationError("duplicate year " + std::to_string(*year) + " for " + code, row.line);
    }
  }
  for (auto& [code, years] : by_code) {
    YearSeries s{code, {}, {}};
    for (const auto& [y, v] : years) {
      s.years.push_back(y);
      s.values.push_back(v);
    }
    out.emplace(code, std::move(s));
  }
  return out;
}

CodeSeries read_wide(const std::vector<csv::Row>& rows, std::size_t header_at,
                     const std::optional<std::string>& country) {
  const auto& header = rows[header_at].fields;
  std::size_t code_col = header.size();
  std::size_t country_col = header.size();
  std::vector<std::pair<std::size_t, int>> year_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string h = trim(header[c]);
    if (h == "Indicator Code") code_col = c;
    if (h == "Country Code") country_col = c;
    if (auto y = parse_year(h)) year_cols.emplace_back(c, *y);
  }
  std::sort(year_cols.begin(), year_cols.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });

  CodeSeries out;
  for (std::size_t r = header_at + 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() <= code_col) {
      throw ValidationError("row has no Indicator Code column", row.line);
    }
    if (country && country_col < row.fields.size() && trim(row.fields[country_col]) != *country) {
      continue;
    }
    const std::string code = trim(row.fields[code_col]);
    YearSeries s{code, {}, {}};
    for (const auto& [col, year] : year_cols) {
      s.years.push_back(year);
      s.values.push_back(col < row.fields.size() ? parse_cell(row.fields[col], row.line)
                                                 : std::nullopt);
    }
    if (!out.emplace(code, std::move(s)).second) {
      throw ValidationError("several rows for indicator " + code +
                                "; select one with a country code",
                            row.line);
    }
  }
  return out;
}

}  // namespace

MissingRoleError::MissingRoleError(std::vector<std::string> missing,
                                   std::vector<std::string> found)
    : ValidationError("missing roles: " + join(missing) + "; roles found: " + join(found)),
      missing_(std::move(missing)),
      found_(std::move(found)) {}

std::map<std::string, YearSeries> ingest_worldbank_csv(std::string_view text,
                                                       std::span<const IndicatorRole> mapping,
                                                       const WorldBankOptions& options) {
  const auto rows = csv::read(text);

  CodeSeries by_code;
  bool recognized = false;
  for (std::size_t r = 0; r < rows.size() && !recognized; ++r) {
    std::vector<std::string> f;
    for (const auto& s : rows[r].fields) f.push_back(trim(s));
    if (f == std::vector<std::string>{"indicator", "year", "value"}) {
      by_code = read_long(rows, r);
      recognized = true;
    } else if (std::find(f.begin(), f.end(), "Indicator Code") != f.end()) {
      by_code = read_wide(rows, r, options.country_code);
      recognized = true;
    }
  }
  if (!recognized) {
    throw ValidationError(
        "unrecognized layout: expected 'indicator,year,value' or a World Bank wide header "
        "with 'Indicator Code'");
  }

  std::map<std::string, YearSeries> by_role;
  std::set<std::string> wanted(options.required_roles.begin(), options.required_roles.end());
  for (const auto& m : mapping) {
    wanted.insert(m.role);
    if (auto it = by_code.find(m.indicator_code); it != by_code.end()) {
      by_role.emplace(m.role, it->second);
    }
  }
  std::vector<std::string> missing;
  std::vector<std::string> found;
  for (const auto& role : wanted) {
    if (!by_role.contains(role)) missing.push_back(role);
  }
  for (const auto& [role, _] : by_role) found.push_back(role);
  if (!missing.empty()) throw MissingRoleError(std::move(missing), std::move(found));
  return by_role;
}

}  // namespace tensecon
