#include "qsc/hashing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qsc {

namespace {

void check_ell(int ell, int max_ell) {
  if (ell < 1 || ell > max_ell)
    throw std::invalid_argument("balanced hash: ell must lie in [1, " +
                                std::to_string(max_ell) + "]");
}

}  // namespace

BalancedHash BalancedHash::from_table(int ell,
                                      std::vector<std::uint8_t> table) {
  check_ell(ell, 20);
  const size_t n = size_t(1) << ell;
  if (table.size() != n)
    throw std::invalid_argument("balanced hash: table size mismatch");
  size_t ones = 0;
  for (std::uint8_t v : table) {
    if (v > 1)
      throw std::invalid_argument("balanced hash: table entries must be 0/1");
    ones += v;
  }
  if (ones * 2 != n)
    throw std::invalid_argument("balanced hash: table is not balanced");
  BalancedHash f;
  f.ell = ell;
  f.table = std::move(table);
  return f;
}

BalancedHash BalancedHash::inner_product(int ell, int a, int b) {
  check_ell(ell, 20);
  const int n = 1 << ell;
  if (a < 1 || a >= n)
    throw std::invalid_argument("balanced hash: a must be a nonzero mask");
  if (b != 0 && b != 1)
    throw std::invalid_argument("balanced hash: b must be a bit");
  std::vector<std::uint8_t> t(n);
  for (int x = 0; x < n; ++x)
    t[x] = static_cast<std::uint8_t>(
        (std::popcount(static_cast<unsigned>(a & x)) & 1) ^ b);
  return from_table(ell, std::move(t));
}

std::vector<BalancedHash> build_toeplitz_family(int ell) {
  check_ell(ell, 20);
  std::vector<BalancedHash> fam;
  fam.reserve(2 * ((size_t(1) << ell) - 1));
  for (int a = 1; a < (1 << ell); ++a)
    for (int b = 0; b < 2; ++b) fam.push_back(BalancedHash::inner_product(ell, a, b));
  return fam;
}

std::vector<BalancedHash> enumerate_balanced(int ell) {
  check_ell(ell, 4);
  const int n = 1 << ell;
  const int k = n / 2;
  std::vector<BalancedHash> all;
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<std::uint8_t> t(n, 0);
    for (int p : pick) t[p] = 1;
    all.push_back(BalancedHash::from_table(ell, std::move(t)));
    // Next k-combination of {0..n-1} in lexicographic order.
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return all;
}

double universality_defect(const std::vector<BalancedHash>& family, int ell) {
  check_ell(ell, 20);
  if (family.empty())
    throw std::invalid_argument("universality defect: empty family");
  const int n = 1 << ell;
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      int hits = 0;
      for (const BalancedHash& f : family) {
        if (f.ell != ell)
          throw std::invalid_argument("universality defect: ell mismatch");
        if (f(x) == f(y)) ++hits;
      }
      worst = std::max(worst, double(hits) / double(family.size()));
    }
  return std::max(0.0, worst - 0.5);
}

CQState split_state(const CQState& cq, const BalancedHash& f) {
  if (f.ell != cq.ell)
    throw std::invalid_argument("split state: hash and CQ state disagree on ell");
  const int d = cq.quantum_space.total_dim();
  double w[2] = {0.0, 0.0};
  Mat acc[2] = {Mat::zero(d, d), Mat::zero(d, d)};
  for (size_t i = 0; i < cq.alphabet.size(); ++i) {
    const int z = f(cq.alphabet[i]);
    w[z] += cq.weights[i];
    acc[z] = add(acc[z], scale(cq.conditionals[i], cx(cq.weights[i], 0.0)));
  }
  std::vector<Mat> cond;
  for (int z = 0; z < 2; ++z) {
    if (w[z] > 1e-15)
      cond.push_back(scale(acc[z], cx(1.0 / w[z], 0.0)));
    else
      cond.push_back(scale(Mat::identity(d), cx(1.0 / d, 0.0)));
  }
  return make_cq_state(1, cq.quantum_space, {0, 1}, {w[0], w[1]},
                       std::move(cond));
}

double hash_distance(const CQState& cq, const BalancedHash& f) {
  const CQState split = split_state(cq, f);
  if (split.weights[0] < 1e-12 || split.weights[1] < 1e-12) return 1.0;
  return trace_distance(split.conditionals[0], split.conditionals[1]);
}

HashSearchResult best_hash(const CQState& cq,
                           const std::vector<BalancedHash>& candidates) {
  if (candidates.empty())
    throw std::invalid_argument("best hash: no candidates");
  HashSearchResult out;
  out.distance = 2.0;
  for (const BalancedHash& f : candidates) {
    const double d = hash_distance(cq, f);
    ++out.searched;
    if (d < out.distance) {
      out.distance = d;
      out.hash = f;
    }
  }
  return out;
}

double family_average_duni(const CQState& cq,
                           const std::vector<BalancedHash>& family) {
  if (family.empty())
    throw std::invalid_argument("family average: empty family");
  double sum = 0.0;
  for (const BalancedHash& f : family)
    sum += dist_from_uniform(split_state(cq, f)).value;
  return sum / double(family.size());
}

double leftover_hash_bound(double eps, double hmin_bits) {
  if (eps < 0.0)
    throw std::invalid_argument("leftover hash bound: eps must be >= 0");
  return eps + 0.5 * std::sqrt(std::exp2(1.0 - hmin_bits));
}

double balanced_split_distance_bound(double eps, double hmin_bits) {
  return 2.0 * leftover_hash_bound(eps, hmin_bits);
}

}  // namespace qsc
