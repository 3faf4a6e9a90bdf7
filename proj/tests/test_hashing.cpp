#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "qsc/entropy.hpp"
#include "qsc/hashing.hpp"
#include "qsc/random.hpp"

// Oracles: family sizes and collision frequencies are counted directly from
// the tables, split states are compared against hand-built mixtures, and the
// extraction bounds are checked against the min-entropy module on random CQ
// states.

using namespace qsc;

namespace {

CQState uniform_cq(int ell, const RegisterSpace& qs, std::vector<Mat> cond) {
  const int n = 1 << ell;
  std::vector<int> alpha;
  std::vector<double> w;
  for (int x = 0; x < n; ++x) {
    alpha.push_back(x);
    w.push_back(1.0 / n);
  }
  return make_cq_state(ell, qs, alpha, w, std::move(cond));
}

Mat basis_proj(int d, int k) {
  Mat m = Mat::zero(d, d);
  m(k, k) = cx(1.0, 0.0);
  return m;
}

}  // namespace

TEST_CASE("table validation") {
  CHECK_THROWS_AS(BalancedHash::from_table(1, {0, 1, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BalancedHash::from_table(2, {0, 1, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BalancedHash::from_table(2, {0, 1, 1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BalancedHash::from_table(0, {}), std::invalid_argument);

  BalancedHash f = BalancedHash::from_table(2, {0, 1, 1, 0});
  CHECK(f(0) == 0);
  CHECK(f(2) == 1);
}

TEST_CASE("inner-product family: size, balance, collision frequency") {
  for (int ell = 1; ell <= 3; ++ell) {
    const std::vector<BalancedHash> fam = build_toeplitz_family(ell);
    const int n = 1 << ell;
    CHECK(static_cast<int>(fam.size()) == 2 * (n - 1));
    for (const BalancedHash& f : fam) {
      int ones = 0;
      for (int x = 0; x < n; ++x) ones += f(x);
      CHECK(ones == n / 2);
    }
    CHECK(universality_defect(fam, ell) == 0.0);

    // Exact collision frequency on every pair of distinct inputs.
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        int hits = 0;
        for (const BalancedHash& f : fam)
          if (f(x) == f(y)) ++hits;
        CHECK(hits * (n - 1) == static_cast<int>(fam.size()) * (n / 2 - 1));
      }
  }
  CHECK_THROWS_AS(BalancedHash::inner_product(2, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BalancedHash::inner_product(2, 4, 0), std::invalid_argument);
}

TEST_CASE("exhaustive enumeration of balanced hashes") {
  CHECK(enumerate_balanced(1).size() == 2);
  CHECK(enumerate_balanced(2).size() == 6);
  CHECK(enumerate_balanced(3).size() == 70);
  CHECK(enumerate_balanced(4).size() == 12870);
  CHECK_THROWS_AS(enumerate_balanced(5), std::invalid_argument);

  // Distinct, all balanced.
  std::set<std::vector<std::uint8_t>> seen;
  for (const BalancedHash& f : enumerate_balanced(3)) {
    CHECK(seen.insert(f.table).second);
    int ones = 0;
    for (int x = 0; x < 8; ++x) ones += f(x);
    CHECK(ones == 4);
  }

  // A single-member family has collision frequency 1 on equal-value pairs.
  std::vector<BalancedHash> solo = {BalancedHash::inner_product(2, 1, 0)};
  CHECK(universality_defect(solo, 2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("split states are the expected preimage mixtures") {
  RegisterSpace qs({{"B", 2}});
  std::vector<Mat> cond = {basis_proj(2, 0), basis_proj(2, 1), basis_proj(2, 0),
                           basis_proj(2, 1)};
  CQState cq = uniform_cq(2, qs, cond);

  // Low bit: preimages {0,2} and {1,3}; the split conditionals are |0><0|
  // and |1><1|.
  BalancedHash low = BalancedHash::from_table(2, {0, 1, 0, 1});
  CQState split = split_state(cq, low);
  CHECK(split.ell == 1);
  CHECK(split.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max_abs(sub(split.conditionals[0], basis_proj(2, 0))) <= 1e-12);
  CHECK(max_abs(sub(split.conditionals[1], basis_proj(2, 1))) <= 1e-12);
  CHECK(hash_distance(cq, low) == doctest::Approx(1.0).epsilon(1e-9));

  // High bit: both preimages mix |0><0| and |1><1| equally.
  BalancedHash high = BalancedHash::from_table(2, {0, 0, 1, 1});
  CQState hsplit = split_state(cq, high);
  const Mat half = scale(Mat::identity(2), cx(0.5, 0.0));
  CHECK(max_abs(sub(hsplit.conditionals[0], half)) <= 1e-12);
  CHECK(max_abs(sub(hsplit.conditionals[1], half)) <= 1e-12);
  CHECK(hash_distance(cq, high) <= 1e-9);

  // ell mismatch is rejected.
  CHECK_THROWS_AS(split_state(cq, BalancedHash::inner_product(3, 1, 0)),
                  std::invalid_argument);

  // A missing symbol just carries zero weight.
  CQState partial = make_cq_state(2, qs, {0, 1, 2}, {0.5, 0.25, 0.25},
                                  {basis_proj(2, 0), basis_proj(2, 1),
                                   basis_proj(2, 0)});
  CQState psplit = split_state(partial, low);
  CHECK(psplit.weights[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(psplit.weights[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("identical conditionals make every hash distance zero") {
  RandomSource rng(11);
  RegisterSpace qs({{"B", 3}});
  const Mat r = rng.density_matrix(3);
  CQState cq = uniform_cq(2, qs, {r, r, r, r});
  for (const BalancedHash& f : enumerate_balanced(2))
    CHECK(hash_distance(cq, f) <= 1e-10);
  HashSearchResult best = best_hash(cq, enumerate_balanced(2));
  CHECK(best.searched == 6);
  CHECK(best.distance <= 1e-10);
}

TEST_CASE("family-averaged extraction error meets the leftover hash bound") {
  RandomSource rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    RandomSource sub = rng.fork(trial);
    RegisterSpace qs({{"B", 2}});
    std::vector<Mat> cond;
    for (int x = 0; x < 4; ++x) cond.push_back(sub.density_matrix(2));
    CQState cq = uniform_cq(2, qs, cond);

    const double hmin = -std::log2(guessing_probability(cq));
    const double bound = leftover_hash_bound(0.0, hmin);
    const double avg = family_average_duni(cq, build_toeplitz_family(2));
    CHECK(avg <= bound + 1e-9);

    // The best family member beats twice the bound.
    HashSearchResult fam_best = best_hash(cq, build_toeplitz_family(2));
    CHECK(fam_best.distance <= balanced_split_distance_bound(0.0, hmin) + 1e-9);

    // Widening the search can only improve the distance.
    HashSearchResult all_best = best_hash(cq, enumerate_balanced(2));
    CHECK(all_best.distance <= fam_best.distance + 1e-12);
  }
}

TEST_CASE("bound helpers") {
  CHECK(leftover_hash_bound(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(leftover_hash_bound(0.1, 3.0) ==
        doctest::Approx(0.1 + 0.25).epsilon(1e-12));
  CHECK(balanced_split_distance_bound(0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(leftover_hash_bound(-0.01, 1.0), std::invalid_argument);
}
