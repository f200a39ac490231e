#ifndef SPECSHIFT_VERIFY_HPP
#define SPECSHIFT_VERIFY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specshift/operator_core.hpp"

namespace specshift {

struct CheckRecord {
  std::string name;    // family/case
  std::string anchor;  // identity being checked, in words
  double lhs = 0.0;    // magnitude of the left side (worst case in the family)
  double rhs = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool relative = true;  // which error column the tolerance applies to
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 20240815;
  int pair_count = 50;
  int min_dim = 2;
  int max_dim = 8;
  int max_order = 5;
  double wide_scale = 0.0;  // > 0: spectra spanning [-scale, scale], relaxed tolerances
  std::map<std::string, double> tol_overrides;
  // When nonempty, replaces the generated ensemble for the operator-pair suites.
  std::vector<std::pair<HermitianOperator, HermitianOperator>> explicit_pairs;

  double tol(const std::string& name, double fallback) const;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckRecord> records;
  bool pass = false;
  double seconds = 0.0;
};

// The thirteen acceptance families, in order.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts);

struct VerifyReport {
  std::vector<CheckRecord> records;  // sorted by name
  int passed = 0;
  int failed = 0;
  double wall_seconds = 0.0;
};

// Acceptance families plus the auxiliary transform-module invariants.
VerifyReport run_full_verification(const VerifyOptions& opts);

std::string report_to_json(const VerifyReport& report);

// Deterministic ensembles.
HermitianOperator random_hermitian(std::uint64_t seed, int dim, double scale);
std::pair<HermitianOperator, HermitianOperator> random_pair(std::uint64_t seed, int dim);
std::pair<HermitianOperator, HermitianOperator> wide_spectrum_pair(std::uint64_t seed,
                                                                   int dim, double scale);

}  // namespace specshift

#endif
