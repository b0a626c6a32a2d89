#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tensecon/tensor3.hpp"

namespace tensecon {

/// Ordered label sets for the three tensor axes.
///
/// Periods are opaque labels ordered by declaration. The optional sector
/// tags drive scenario shocks: pandemic hits `service_sectors` hardest, and
/// green_transition moves productivity from `brown_sectors` to
/// `green_sectors`.
struct Taxonomy {
  std::vector<std::string> sectors;
  std::vector<std::string> agents;
  std::vector<std::string> periods;

  std::vector<std::string> service_sectors;
  std::vector<std::string> brown_sectors;
  std::vector<std::string> green_sectors;

  /// Throws ValidationError on an empty axis, a duplicate label, or a tag
  /// naming an unknown sector.
  void validate() const;

  /// Throw UnknownLabel naming the axis.
  std::size_t sector_index(std::string_view label) const;
  std::size_t agent_index(std::string_view label) const;
  std::size_t period_index(std::string_view label) const;

  /// Indices of the sectors carrying a tag, in declaration order.
  std::vector<std::size_t> tagged(const std::vector<std::string>& tag) const;

  Dims dims() const noexcept { return {sectors.size(), agents.size(), periods.size()}; }

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;
};

}  // namespace tensecon
