#include "tensecon/taxonomy.hpp"

#include <algorithm>
#include <set>

#include "tensecon/error.hpp"

namespace tensecon {
namespace {

void check_axis(const std::vector<std::string>& labels, const char* axis) {
  if (labels.empty()) throw ValidationError(std::string("taxonomy ") + axis + " axis is empty");
  std::set<std::string_view> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw ValidationError(std::string("empty ") + axis + " label");
    if (!seen.insert(l).second) {
      throw ValidationError(std::string("duplicate ") + axis + " label '" + l + "'");
    }
  }
}

std::size_t find(const std::vector<std::string>& labels, std::string_view label,
                 const char* axis) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UnknownLabel(axis, std::string(label));
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

void Taxonomy::validate() const {
  check_axis(sectors, "sector");
  check_axis(agents, "agent");
  check_axis(periods, "period");
  for (const auto* tag : {&service_sectors, &brown_sectors, &green_sectors}) {
    for (const auto& s : *tag) sector_index(s);
  }
}

std::size_t Taxonomy::sector_index(std::string_view label) const {
  return find(sectors, label, "sector");
}
std::size_t Taxonomy::agent_index(std::string_view label) const {
  return find(agents, label, "agent");
}
std::size_t Taxonomy::period_index(std::string_view label) const {
  return find(periods, label, "period");
}

std::vector<std::size_t> Taxonomy::tagged(const std::vector<std::string>& tag) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    if (std::find(tag.begin(), tag.end(), sectors[i]) != tag.end()) out.push_back(i);
  }
  return out;
}

}  // namespace tensecon
