// Acceptance gate: runs the thirteen criterion families at their default
// configuration and prints one pass/fail line per criterion.
#include <cstdio>
#include <exception>

#include "specshift/verify.hpp"

int main() {
  using namespace specshift;
  VerifyOptions opts;  // 50 seeded pairs, dims 2..8, orders 1..5
  std::vector<CriterionResult> results;
  try {
    results = run_acceptance(opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  double total = 0.0;
  for (const auto& cr : results) {
    total += cr.seconds;
    std::printf("%s  criterion %2d: %s (%.2f s, %zu checks)\n",
                cr.pass ? "PASS" : "FAIL", cr.id, cr.title.c_str(), cr.seconds,
                cr.records.size());
    for (const auto& r : cr.records) {
      if (r.pass) continue;
      std::printf("      failed %s: %s error %.3e vs tolerance %.3e (lhs %.6g, rhs "
                  "%.6g)\n",
                  r.name.c_str(), r.relative ? "relative" : "absolute",
                  r.relative ? r.rel_error : r.abs_error, r.tolerance, r.lhs, r.rhs);
    }
    if (!cr.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed (%.2f s)\n",
              static_cast<int>(results.size()) - failed, results.size(), total);
  return failed == 0 ? 0 : 1;
}
