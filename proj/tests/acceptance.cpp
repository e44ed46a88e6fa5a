// Acceptance suite: runs every oracle-equivalence and property check once and
// prints one pass/fail line per check. Exit status is nonzero on any failure.
//
// Usage: acceptance [seed]

#include <cstdio>
#include <cstdlib>

#include "lorcomp/verify.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = lorcomp::verify::kDefaultSeed;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  const std::vector<lorcomp::verify::CheckResult> results =
      lorcomp::verify::run_acceptance_checks(seed);

  int failures = 0;
  for (const lorcomp::verify::CheckResult& r : results) {
    std::printf("%s %d/%zu %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, results.size(),
                r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failures;
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu checks passed (seed %llu)\n", results.size(),
                static_cast<unsigned long long>(seed));
    return 0;
  }
  std::printf("acceptance: %d of %zu checks FAILED (seed %llu)\n", failures, results.size(),
              static_cast<unsigned long long>(seed));
  return 1;
}
