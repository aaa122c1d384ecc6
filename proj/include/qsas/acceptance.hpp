#pragma once

// End-to-end acceptance checks for the library: basis orthonormality, the
// analytic-vs-numeric propagator cross-checks, spectral closed forms,
// singular-value scans, the two filter-triviality statements, the working
// reservoir, the measurement composition, CPTP structural properties, and
// the representation-equivalence checks. Tolerances are fixed here.

#include <string>
#include <vector>

namespace qsas {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // observed vs expected summary
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string filter;      // run only checks whose name contains this
  double tol_scale = 1.0;  // scales every tolerance; 1 is the pinned suite
};

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options = {});

}  // namespace qsas
