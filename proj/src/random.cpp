#include "qsc/random.hpp"

#include <cmath>
#include <stdexcept>

namespace qsc {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 1));
}

RandomSource::RandomSource(uint64_t seed) : seed_(seed), eng_(seed) {}

RandomSource RandomSource::fork(uint64_t stream) const {
  return RandomSource(mix_seed(seed_, stream));
}

uint64_t RandomSource::next_u64() { return eng_(); }

double RandomSource::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RandomSource::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi) - lo + 1;
  // Rejection keeps the draw unbiased; span is tiny relative to 2^64.
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + static_cast<int>(v % span);
}

double RandomSource::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

cx RandomSource::gaussian_cx() { return cx(gaussian(), gaussian()); }

Vec RandomSource::pure_state(int dim) {
  Vec v(dim);
  for (cx& z : v) z = gaussian_cx();
  double n = vec_norm(v);
  if (n == 0.0) return pure_state(dim);
  for (cx& z : v) z /= n;
  return v;
}

Mat RandomSource::unitary(int dim) {
  Mat g(dim, dim);
  for (cx& z : g.a) z = gaussian_cx();
  orthonormalize_columns(g);
  return g;
}

Mat RandomSource::hermitian(int dim) {
  Mat g(dim, dim);
  for (cx& z : g.a) z = gaussian_cx();
  return hermitize(g);
}

Mat RandomSource::density_matrix(int dim, int rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  Mat g(dim, rank);
  for (cx& z : g.a) z = gaussian_cx();
  Mat w = mul(g, adjoint(g));
  double t = trace(w).real();
  return scale(w, 1.0 / t);
}

std::vector<double> RandomSource::distribution(int n) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform());
    s += v;
  }
  for (double& v : p) v /= s;
  return p;
}

}  // namespace qsc
