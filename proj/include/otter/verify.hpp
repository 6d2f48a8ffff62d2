#pragma once

// The invariant suite behind `otter verify`. Every check is named; a failed
// check reports the identity it violated.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "otter/series.hpp"

namespace otter {

/// Values frozen from oracle runs, read from fixtures/thresholds.json.
struct Thresholds {
  double rho_reference = 0.338321;
  double c_a_reference = 0.439924;
  double c_f_reference = 0.53495;
  double constant_tolerance = 1e-5;
  /// max |ratio - 1| at n = 400.
  double rooted_ratio_400 = 0.0;
  double free_ratio_400 = 0.0;
  /// max over n <= 400 of |a_n/f_n - n/E[X]|.
  double second_order_bound = 0.0;
  std::map<std::size_t, Rational> tv_profile;
  /// Degrees {1,3}, admissible n only.
  std::map<std::size_t, Rational> restricted_tv_profile;
  /// Mass of P(N = k | S_N = 200) outside |k - 200/E[X]| < 200^0.75.
  double concentration_tail_200 = 1e-3;
  double chi_square_significance = 1e-3;
  double rejection_tolerance = 0.1;
};

std::string default_thresholds_path();
/// Throws std::runtime_error when the file is missing or malformed.
Thresholds load_thresholds(const std::string& path);

enum class VerifyLevel { quick, full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Runs every check at the given level; `on_check` sees each result as it
/// completes.
VerifyReport run_verify(VerifyLevel level, const Thresholds& thresholds,
                        const std::function<void(const CheckResult&)>& on_check = {});

/// Pearson statistic and upper-tail p-value for observed counts against a
/// uniform law on observed.size() cells.
struct ChiSquare {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t degrees_of_freedom = 0;
};
ChiSquare chi_square_uniform(const std::vector<std::size_t>& observed);

}  // namespace otter
