#pragma once

#include <string>
#include <vector>

#include "qsc/hashing.hpp"
#include "qsc/protocol.hpp"

// The generic commitment attack.
//
// Alice picks a balanced hash f on the string space, commits the uniform
// superposition over a preimage class X_z = f^{-1}(z), keeping a purifier
// X' that indexes the class member, and runs the commit phase honestly.
// Conditioned on the classical transcript t, the two class states
// |psi_z^t> are pure, and everything outside Alice's hands has marginals
// rho_z^t on (B, C). Uhlmann's theorem gives a unitary U_t on Alice's
// registers with
//
//   |<psi_1^t| (U_t (x) 1) |psi_0^t>| = F(rho_0^t, rho_1^t),
//
// realized through the singular factors of K = M_0 M_1^dagger, where M_z
// reshapes the state vector into an (Alice) x (rest) matrix: |tr(U K)| is
// maximized at the nuclear norm ||K||_1 = F. Aggregating over the
// transcript with the mixture identity, the attacked commitment sits at
//
//   D = (1/2) sum_t rank-2 norm(p_0^t, p_1^t, overlap_t)  <=  sqrt(2 eps)
//
// whenever the (B, C) views of the two classes are eps-close. The
// min-entropy chain bounds that eps by delta = eps~ + (1/2) sqrt(2^(1 -
// Hmin(X|BC))) for the best balanced hash, so the certificate carries
// delta_bound = 2 sqrt(delta) as the guaranteed cheat distance.
//
// All attacks here act by unitaries on Alice's side only, so the achieved
// distance is an upper bound for the optimal cheat and 1 - achieved is a
// lower bound on how far binding is broken.

namespace qsc {

struct UhlmannResult {
  Mat u;           // unitary on the named part, basis in the caller's order
  double overlap;  // |<psi1| (U (x) 1) |psi0>| = F of the complement marginals
};

// Both states must share one register layout; `part` lists the registers U
// may act on. Throws on zero-norm inputs.
UhlmannResult uhlmann_unitary(const PureState& psi0, const PureState& psi1,
                              const std::vector<std::string>& part);

// Commit-phase execution of (1/sqrt|X_z|) sum_{x in X_z} |x>_X |i(x)>_Xp
// against the resource-free protocol, where i(x) indexes the class member
// (the Xp register is omitted when the class is a singleton).
struct SuperpositionCommit {
  BalancedHash f;
  int z = 0;
  std::vector<int> preimage;  // increasing
  ExecutionResult result;
};

SuperpositionCommit commit_superposition(const ProtocolIR& p_free,
                                         const BalancedHash& f, int z);

struct BranchAttack {
  std::vector<int> key;  // transcript values shared by the matched branches
  double p0 = 0.0, p1 = 0.0;
  double overlap = 0.0;  // after the branch unitary
  Mat u;
};

struct ConditionedAttack {
  std::vector<std::string> alice_part;
  std::vector<BranchAttack> branches;   // transcripts seen from either side
  double aggregate_distance = 1.0;
};

// Matches the branches of two superposition commits by transcript, builds
// the Uhlmann unitary on Alice's registers per branch, and aggregates the
// attacked-vs-target distance blockwise.
ConditionedAttack classical_conditioned_attack(const ExecutionResult& from,
                                               const ExecutionResult& to);

struct AttackCertificate {
  BalancedHash f;
  int z = 0;                      // attacked class: commit X_z, open in X_1-z
  double measured_eps = 0.0;      // hiding of the resource-free protocol
  double eps_tilde = 0.0;         // sqrt(2 measured_eps), Bob-side class gap
  double hmin_xbc = 0.0;          // Hmin(X | B C) at smoothing 0
  double delta = 0.0;             // eps_tilde + (1/2) sqrt(2^(1 - hmin))
  double delta_bound = 1.0;       // 2 sqrt(delta), the guaranteed distance
  double hash_distance = 1.0;     // measured D of the two class (B, C) views
  double achieved_distance = 1.0; // aggregate distance of this attack
  double implied_binding = 0.0;   // 1 - achieved_distance, a lower bound on
                                  // how strongly binding fails
  int hashes_searched = 0;
  ConditionedAttack attack;
};

// Full pipeline: remove the resource, measure hiding, take Hmin(X|BC),
// search every balanced hash for the closest split, commit the z = 0
// superposition, and steer it to the z = 1 class. Requires ell <= 4.
AttackCertificate synthesize_attack(const ProtocolIR& p);

}  // namespace qsc
