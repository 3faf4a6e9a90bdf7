#pragma once

#include <cstdint>
#include <vector>

#include "qsc/metrics.hpp"

// Balanced one-bit hashes of ell-bit strings.
//
// A hash f: {0,1}^ell -> {0,1} is balanced when both preimages have size
// 2^{ell-1}. Hashing the X register of a CQ state splits it into the binary
// CQ state with weights w_z = sum_{f(x)=z} P(x) and normalized conditional
// states; the hash distance is the trace distance between the two
// conditionals. The two-universal family used here is
//   f_{a,b}(x) = <a, x> xor b,   a != 0,
// inner products over GF(2), with 2 (2^ell - 1) members and collision
// frequency (2^{ell-1} - 1)/(2^ell - 1) < 1/2 on every pair of distinct
// inputs. Averaged over such a family, the extracted bit is close to
// uniform:
//   avg_f duni(Z_f | B) <= eps + (1/2) sqrt(2^{1 - H_min^eps(X|B)}),
// so some member must achieve hash distance at most twice that bound.

namespace qsc {

struct BalancedHash {
  int ell = 1;
  std::vector<std::uint8_t> table;  // size 2^ell, entries 0/1, balanced

  int operator()(int x) const { return table.at(static_cast<size_t>(x)); }

  static BalancedHash from_table(int ell, std::vector<std::uint8_t> table);
  // f(x) = parity(a & x) xor b with a != 0.
  static BalancedHash inner_product(int ell, int a, int b);
};

// All f_{a,b}: 2 (2^ell - 1) members, every one balanced.
std::vector<BalancedHash> build_toeplitz_family(int ell);

// Every balanced hash, lexicographic in the set of inputs mapped to one;
// C(2^ell, 2^{ell-1}) members, limited to ell <= 4.
std::vector<BalancedHash> enumerate_balanced(int ell);

// max(0, collision frequency - 1/2) over all pairs of distinct inputs.
double universality_defect(const std::vector<BalancedHash>& family, int ell);

// Binary CQ state of the hashed register: weights w_z, normalized
// conditionals; a weightless branch gets the maximally mixed state.
CQState split_state(const CQState& cq, const BalancedHash& f);

// Trace distance between the two normalized split conditionals; 1 when a
// branch has no weight (such a hash cannot be used to cheat).
double hash_distance(const CQState& cq, const BalancedHash& f);

struct HashSearchResult {
  BalancedHash hash;
  double distance = 1.0;
  int searched = 0;
};

// The candidate with the smallest hash distance (first wins ties).
HashSearchResult best_hash(const CQState& cq,
                           const std::vector<BalancedHash>& candidates);

// avg_f duni(Z_f | B) over the family.
double family_average_duni(const CQState& cq,
                           const std::vector<BalancedHash>& family);

// eps + (1/2) sqrt(2^{1 - hmin_bits}).
double leftover_hash_bound(double eps, double hmin_bits);
// Twice the above: what the best family member's hash distance must meet.
double balanced_split_distance_bound(double eps, double hmin_bits);

}  // namespace qsc
