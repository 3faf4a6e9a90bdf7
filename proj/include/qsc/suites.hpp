#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Seeded property suites for the inequalities the attack pipeline rests
// on. Every check draws its instances from a forked random stream keyed by
// (seed, check index, trial), so a seed fixes every instance regardless of
// scheduling, and reports the largest violation it saw:
//
//   triangle / FvdG / purification: trace-distance geometry
//   cq mixture identity:            blockwise distance == embedded distance
//   uhlmann overlap + steering:     attainability of the marginal fidelity
//   helstrom / entangled / classical: min-entropy against known optima
//   chain rules:                    conditioning charges at most log dim
//   leftover hashing:               extracted bit vs min-entropy bound
//
// A check passes when its worst violation stays within tolerance. Wall
// time is recorded for reporting but is not part of the pass decision.

namespace qsc {

struct SuiteCheck {
  std::string name;
  int trials = 0;
  double worst = 0.0;      // largest violation over all trials
  double tolerance = 0.0;  // allowed violation
  double millis = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;
  bool all_passed() const;
};

// jobs > 1 distributes whole checks across threads; results and draws are
// identical for every jobs value.
SuiteReport run_lemma_suite(std::uint64_t seed, int jobs = 1);

}  // namespace qsc
