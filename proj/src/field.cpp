#include "monotone/field.hpp"

#include <cmath>

#include "monotone/error.hpp"

namespace monotone {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Solved: return "solved";
    case Provenance::Manufactured: return "manufactured";
    case Provenance::Loaded: return "loaded";
    case Provenance::Rescaled: return "rescaled";
  }
  return "unknown";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "exact") return Provenance::Exact;
  if (name == "solved") return Provenance::Solved;
  if (name == "manufactured") return Provenance::Manufactured;
  if (name == "loaded") return Provenance::Loaded;
  if (name == "rescaled") return Provenance::Rescaled;
  throw ParseError("unknown provenance '" + name + "'");
}

Field::Field(CartesianGrid grid, int components, FieldMeta meta)
    : grid_(std::move(grid)), m_(components), meta_(std::move(meta)) {
  if (components < 1 || components > kMaxComponents) {
    throw ArgumentError("component count must lie in [1, " + std::to_string(kMaxComponents) + "]");
  }
  values_.assign(grid_.node_count() * static_cast<std::size_t>(m_), 0.0);
}

void Field::require_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ArgumentError("field value at node " + std::to_string(i / m_) + ", component " +
                          std::to_string(i % m_ + 1) + " is not finite");
    }
  }
}

double Field::max_abs() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

SpaceTimeField::SpaceTimeField(SpaceTimeGrid grid, int components, FieldMeta meta)
    : grid_(std::move(grid)), m_(components), meta_(std::move(meta)) {
  slices_.reserve(grid_.slices());
  for (int k = 0; k < grid_.slices(); ++k) slices_.emplace_back(grid_.space(), components, meta_);
}

void SpaceTimeField::require_finite() const {
  for (const auto& s : slices_) s.require_finite();
}

}  // namespace monotone
