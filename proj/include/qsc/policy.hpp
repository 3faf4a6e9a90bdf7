#pragma once

// Global numeric policy. Every tolerance and dimension cap used across the
// library lives here so that validity checks, reconstruction targets and
// solver stopping rules are configured in one place.

namespace qsc {

struct NumericPolicy {
  double validity_tol = 1e-10;        // hermiticity / positivity / norm checks
  double reconstruction_tol = 1e-9;   // eig, svd and purification round trips
  double solver_tol = 1e-9;           // target gap for the convex solvers
  int dimension_cap = 64;             // protocol-facing register spaces
  int internal_dimension_cap = 1024;  // attack-side augmented spaces
};

NumericPolicy& policy();

}  // namespace qsc
