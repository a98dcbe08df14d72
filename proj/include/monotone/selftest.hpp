#pragma once

#include <string>
#include <vector>

#include "monotone/kernel.hpp"
#include "monotone/quadrature.hpp"
#include "monotone/report_io.hpp"

namespace monotone {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Quadrature config with every sphere rule set from one node budget: circle_nodes = nodes,
/// polar x azimuth ~ nodes for n = 3.
QuadratureConfig sphere_node_config(int nodes, QuadratureConfig base = {});

/// Sphere area and second-moment oracles for n = 2, 3 (relative error vs 1e-8).
std::vector<CheckResult> sphere_checks(const QuadratureConfig& q);

/// Kernel mass |int G dx| = 1 after truncation (1e-6) and the finite-difference
/// backward heat equation residual (1e-4) for n = 1, 2, 3. Plus-side mass checks
/// are only run under the decaying convention.
std::vector<CheckResult> kernel_checks(const QuadratureConfig& q, const LayerConfig& layer);

enum class CriterionStatus { Pass, Fail, Skipped };
const char* criterion_status_name(CriterionStatus s);

struct CriterionResult {
  int id = 0;
  std::string title;
  CriterionStatus status = CriterionStatus::Fail;
  std::vector<CheckResult> checks;
  std::string note;  // skip reason or error text
};

struct SelftestOptions {
  KernelConvention convention = KernelConvention::SignedAbsExponent;
  int sphere_nodes = 0;  // 0 keeps the default rules
  /// Criterion 11 reruns criteria 1-10 and compares the serialized reports.
  bool determinism_rerun = true;
};

struct SelftestReport {
  KernelConvention convention = KernelConvention::SignedAbsExponent;
  int sphere_nodes = 0;
  std::vector<CriterionResult> criteria;
  bool passed() const;
  /// Title of the first failing criterion, empty when all pass or skip.
  std::string first_failure() const;
};

SelftestReport selftest(const SelftestOptions& opt = {});

Json to_json(const SelftestReport& r);
/// One line per criterion, then one indented line per check (measured vs tolerance).
std::string format_table(const SelftestReport& r);

}  // namespace monotone
