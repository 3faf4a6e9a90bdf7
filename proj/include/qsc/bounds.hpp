#pragma once

#include <string>

#include "qsc/protocol.hpp"

// Length limits for commitments grown out of smaller ones.
//
// A protocol that commits an ell-bit string while staying eps-hiding and
// Delta-sum-binding cannot stretch its resource too far. Writing
//
//   g = (1 - Delta)^2 / 4 - sqrt(2 eps),
//
// a protocol built on n bits of ideal classical commitment obeys
//
//   ell <= n - 2 log2(g) - 1,
//
// and one built on n ideal qubit commitments obeys
//
//   ell <= 2n - 2 log2(g) - 1.
//
// The engine behind both is entropic: eps-hiding keeps H_min(X|B) near
// ell, removing the resource charges at most log2 dim(C) of min-entropy
// per conditioning step (used twice for quantum C), the leftover-hash
// bound converts the residual H_min(X|BC) into a balanced hash whose two
// preimage classes look delta-close to Bob, and the Uhlmann attack turns
// that closeness into a binding break of at least 1 - 2 sqrt(delta).
// When g <= 0 the inequality is vacuous: it constrains nothing, and the
// report says so explicitly instead of hiding it in an infinite rhs.
//
// entropy_gap_check measures the chain-rule step on a concrete protocol:
// H_min(X|BC) >= H_min(X|B) - capacity with capacity = n for classical
// resources and 2n for qubit resources. The plain copy protocol meets it
// with equality; every protocol must meet it with nonnegative slack.

namespace qsc {

struct BoundReport {
  std::string kind;  // "classical" or "quantum"
  int n = 0;
  int ell = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double argument = 0.0;       // g = (1 - delta)^2 / 4 - sqrt(2 eps)
  bool argument_valid = true;  // g > 0; false makes the bound vacuous
  double rhs = 0.0;            // allowed ell; +infinity when vacuous
  bool satisfied = true;       // ell <= rhs (always true when vacuous)
  double margin = 0.0;         // rhs - ell
};

// ell <= n - 2 log2(g) - 1. Throws on n < 1, ell < 1, epsilon or delta
// outside [0, 1].
BoundReport classical_bound(int n, int ell, double epsilon, double delta);

// ell <= 2n - 2 log2(g) - 1.
BoundReport quantum_bound(int n, int ell, double epsilon, double delta);

struct EntropyGapReport {
  std::string kind;       // resource kind the protocol consumes
  double hmin_b = 0.0;    // H_min(X|B) after resource removal
  double hmin_bc = 0.0;   // H_min(X|BC) after resource removal
  double capacity = 0.0;  // min-entropy charged for conditioning on C
  double slack = 0.0;     // hmin_bc - (hmin_b - capacity)
  bool holds = false;     // slack >= -1e-7
};

// Removes the resource and measures both sides of the chain-rule step.
EntropyGapReport entropy_gap_check(const ProtocolIR& p);

}  // namespace qsc
