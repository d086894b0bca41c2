#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zlab::suite {

struct Criterion {
  std::string id, title;
  std::vector<std::string> tags;
};

/// A1 .. A10 in order.
const std::vector<Criterion>& criteria();

/// Ids selected by a comma-separated filter of ids or tags (case-insensitive);
/// an empty filter selects everything.
std::vector<std::string> select(const std::string& filter);

struct CriterionResult {
  std::string id, title;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> details;
  /// Measured quantities, for independent cross-checks.
  std::map<std::string, double> observed;
  /// Moment labels emitted on PDE-generated traces.
  std::set<std::string> labels;
  std::string error;  // "module: message" when the run threw
};

/// Runs one criterion. A5 inspects `pde_labels`; when null it gathers
/// labels from a fixed set of builtin runs instead.
CriterionResult run_criterion(const std::string& id, std::uint64_t seed,
                              const std::set<std::string>* pde_labels = nullptr);

struct SuiteOptions {
  std::string filter;
  std::uint64_t seed = 20240611;
  int jobs = 1;
};

struct SuiteSummary {
  std::vector<CriterionResult> results;
  double seconds = 0.0;

  bool passed() const;
  /// One row per criterion plus indented detail lines.
  std::string table(bool verbose = false) const;
};

/// Runs the selected criteria on `jobs` threads. Results are independent of
/// the thread count; A5 runs last on the labels of the others.
SuiteSummary run_suite(const SuiteOptions& opts);

}  // namespace zlab::suite
