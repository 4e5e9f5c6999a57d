#include "mortkit/age_grid.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "mortkit/errors.hpp"

namespace mortkit {

namespace {

bool parse_int(std::string_view s, long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

AgeGrid::AgeGrid(std::vector<AgeGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) {
    throw ValidationError("age grid must not be empty");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const AgeGroup& g = groups_[i];
    if (!seen.insert(g.label).second) {
      throw ValidationError("duplicate age label '" + g.label + "'");
    }
    const bool last = (i + 1 == groups_.size());
    if (g.open != last) {
      throw ValidationError("exactly the last age group must be open; '" +
                            g.label + "' violates this");
    }
    if (!g.open && !(g.separation > 0.0 && g.separation < g.width)) {
      throw ValidationError("separation factor of '" + g.label +
                            "' must lie strictly between 0 and the width");
    }
  }
}

AgeGrid AgeGrid::peru(double infant_separation) {
  std::vector<std::string> labels = {"0",     "1-4",   "5-9",   "10-14", "15-19",
                                     "20-24", "25-29", "30-34", "35-39", "40-44",
                                     "45-49", "50-54", "55-59", "60-64", "65-69",
                                     "70-74", "75-79", "80+"};
  return from_labels(labels, infant_separation);
}

AgeGrid AgeGrid::from_labels(const std::vector<std::string>& labels,
                             double infant_separation) {
  std::vector<AgeGroup> groups;
  groups.reserve(labels.size());
  for (const std::string& label : labels) {
    AgeGroup g;
    g.label = label;
    long lo = 0;
    long hi = 0;
    if (!label.empty() && label.back() == '+') {
      std::string_view head(label.data(), label.size() - 1);
      if (!parse_int(head, lo)) {
        throw ValidationError("unknown age label '" + label + "'");
      }
      g.open = true;
    } else if (auto dash = label.find('-'); dash != std::string::npos) {
      std::string_view head(label.data(), dash);
      std::string_view tail(label.data() + dash + 1, label.size() - dash - 1);
      if (!parse_int(head, lo) || !parse_int(tail, hi) || hi < lo) {
        throw ValidationError("unknown age label '" + label + "'");
      }
      g.width = static_cast<double>(hi - lo + 1);
      g.separation = (lo == 1 && g.width == 4.0) ? kDefaultChildSeparation
                                                 : g.width / 2.0;
    } else if (parse_int(label, lo)) {
      g.width = 1.0;
      g.separation = (lo == 0) ? infant_separation : 0.5;
    } else {
      throw ValidationError("unknown age label '" + label + "'");
    }
    groups.push_back(std::move(g));
  }
  return AgeGrid(std::move(groups));
}

std::optional<std::size_t> AgeGrid::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].label == label) return i;
  }
  return std::nullopt;
}

std::vector<std::string> AgeGrid::labels() const {
  std::vector<std::string> out;
  out.reserve(groups_.size());
  for (const AgeGroup& g : groups_) out.push_back(g.label);
  return out;
}

bool AgeGrid::operator==(const AgeGrid& other) const {
  if (groups_.size() != other.groups_.size()) return false;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const AgeGroup& a = groups_[i];
    const AgeGroup& b = other.groups_[i];
    if (a.label != b.label || a.open != b.open || a.width != b.width ||
        a.separation != b.separation) {
      return false;
    }
  }
  return true;
}

}  // namespace mortkit
