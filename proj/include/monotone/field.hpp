#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monotone/grid.hpp"

namespace monotone {

enum class Provenance { Exact, Solved, Manufactured, Loaded, Rescaled };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct FieldMeta {
  Provenance provenance = Provenance::Exact;
  std::string model;   // model name used to produce the field, if any
  std::string source;  // catalog key, file path or rescaling note
  double solver_residual = 0.0;
};

/// m-component nodal values on a Cartesian grid, stored node-major:
/// values[node * m + component].
class Field {
 public:
  Field() = default;
  Field(CartesianGrid grid, int components, FieldMeta meta = {});

  const CartesianGrid& grid() const { return grid_; }
  int components() const { return m_; }
  int dim() const { return grid_.dim(); }
  std::size_t node_count() const { return grid_.node_count(); }

  double& at(std::size_t node, int c) { return values_[node * m_ + c]; }
  double at(std::size_t node, int c) const { return values_[node * m_ + c]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  FieldMeta& meta() { return meta_; }
  const FieldMeta& meta() const { return meta_; }

  /// Throws ArgumentError when a value is NaN or infinite.
  void require_finite() const;
  double max_abs() const;

 private:
  CartesianGrid grid_;
  int m_ = 1;
  std::vector<double> values_;
  FieldMeta meta_;
};

/// Sequence of Fields on identical spatial grids at the times of a SpaceTimeGrid.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(SpaceTimeGrid grid, int components, FieldMeta meta = {});

  const SpaceTimeGrid& grid() const { return grid_; }
  const CartesianGrid& space() const { return grid_.space(); }
  int components() const { return m_; }
  int dim() const { return grid_.space().dim(); }
  int slices() const { return grid_.slices(); }
  double time(int k) const { return grid_.time(k); }

  Field& slice(int k) { return slices_[k]; }
  const Field& slice(int k) const { return slices_[k]; }

  FieldMeta& meta() { return meta_; }
  const FieldMeta& meta() const { return meta_; }

  void require_finite() const;

 private:
  SpaceTimeGrid grid_;
  int m_ = 1;
  std::vector<Field> slices_;
  FieldMeta meta_;
};

}  // namespace monotone
