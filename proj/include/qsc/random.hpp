#pragma once

#include <cstdint>
#include <random>

#include "qsc/matrix.hpp"

// Deterministic random sampling for the property suites. All sampling is
// built on mt19937_64 plus a hand-rolled Box-Muller transform so that a seed
// fixes every draw across platforms. fork(stream) derives an independent
// child source from (seed, stream) without advancing the parent, which keeps
// per-trial results identical no matter how trials are scheduled.

namespace qsc {

uint64_t mix_seed(uint64_t seed, uint64_t stream);  // splitmix64 based

class RandomSource {
 public:
  explicit RandomSource(uint64_t seed);

  uint64_t seed() const { return seed_; }
  RandomSource fork(uint64_t stream) const;

  uint64_t next_u64();
  double uniform();                  // [0, 1)
  int uniform_int(int lo, int hi);   // inclusive bounds
  double gaussian();                 // standard normal
  cx gaussian_cx();                  // independent N(0,1) per component

  Vec pure_state(int dim);
  Mat unitary(int dim);
  Mat hermitian(int dim);                  // Gaussian Hermitian ensemble
  Mat density_matrix(int dim, int rank = 0);  // Wishart, normalized; 0 = full
  std::vector<double> distribution(int n);    // positive, sums to 1

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qsc
