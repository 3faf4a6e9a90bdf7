#include "qsc/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "qsc/attack.hpp"
#include "qsc/eig.hpp"
#include "qsc/entropy.hpp"
#include "qsc/hashing.hpp"
#include "qsc/metrics.hpp"
#include "qsc/random.hpp"

namespace qsc {

namespace {

struct CheckSpec {
  std::string name;
  int trials = 0;
  double tol = 0.0;
  std::uint64_t stream = 0;
  std::function<double(RandomSource&)> violation;
};

CQState random_cq(RandomSource& rng, int ell, int bdim) {
  int n = 1 << ell;
  std::vector<int> alphabet(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) alphabet[static_cast<size_t>(x)] = x;
  std::vector<double> weights = rng.distribution(n);
  std::vector<Mat> conds;
  conds.reserve(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) conds.push_back(rng.density_matrix(bdim));
  return make_cq_state(ell, RegisterSpace({{"B", bdim}}), std::move(alphabet),
                       std::move(weights), std::move(conds));
}

DensityOperator random_xbz(RandomSource& rng, int dx, int db, int dz,
                           bool z_classical, const std::string& z_name) {
  RegisterSpace sp({{"X", dx}, {"B", db}, {z_name, dz}});
  if (!z_classical)
    return DensityOperator::make(sp, rng.density_matrix(dx * db * dz));
  std::vector<double> pz = rng.distribution(dz);
  Mat rho = Mat::zero(dx * db * dz, dx * db * dz);
  for (int z = 0; z < dz; ++z) {
    Mat zproj = Mat::zero(dz, dz);
    zproj(z, z) = cx(pz[static_cast<size_t>(z)], 0.0);
    rho = add(rho, kron(rng.density_matrix(dx * db), zproj));
  }
  return DensityOperator::make(sp, std::move(rho));
}

std::vector<CheckSpec> check_table() {
  std::vector<CheckSpec> t;

  t.push_back({"triangle_inequality", 500, 1e-9, 1, [](RandomSource& rng) {
                 int d = rng.uniform_int(2, 6);
                 Mat rho = rng.density_matrix(d);
                 Mat sigma = rng.density_matrix(d);
                 Mat tau = rng.density_matrix(d);
                 return trace_distance(rho, tau) - trace_distance(rho, sigma) -
                        trace_distance(sigma, tau);
               }});

  t.push_back({"fvdg_bounds", 500, 1e-9, 2, [](RandomSource& rng) {
                 int d = rng.uniform_int(2, 6);
                 Mat rho = rng.density_matrix(d);
                 Mat tau = rng.density_matrix(d, rng.uniform_int(1, d));
                 double dist = trace_distance(rho, tau);
                 double fid = fidelity(rho, tau);
                 double low = (1.0 - fid) - dist;
                 double high =
                     dist - std::sqrt(std::max(0.0, 1.0 - fid * fid));
                 return std::max(low, high);
               }});

  t.push_back({"purified_vs_trace", 500, 1e-9, 3, [](RandomSource& rng) {
                 int d = rng.uniform_int(2, 6);
                 RegisterSpace sp({{"B", d}});
                 DensityOperator rho =
                     DensityOperator::make(sp, rng.density_matrix(d));
                 DensityOperator tau = DensityOperator::make(
                     sp, rng.density_matrix(d, rng.uniform_int(1, d)));
                 return purified_distance(rho, tau) -
                        std::sqrt(2.0 * trace_distance(rho, tau));
               }});

  t.push_back({"cq_mixture_identity", 500, 1e-9, 4, [](RandomSource& rng) {
                 int ell = rng.uniform_int(1, 2);
                 int db = rng.uniform_int(2, 3);
                 CQState a = random_cq(rng, ell, db);
                 CQState b = random_cq(rng, ell, db);
                 double blockwise = cq_mixture_distance(a, b);
                 double direct = 0.5 * trace_norm_hermitian(
                                           sub(cq_density(a), cq_density(b)));
                 return std::abs(blockwise - direct);
               }});

  t.push_back({"uhlmann_overlap", 100, 1e-8, 5, [](RandomSource& rng) {
                 int da = rng.uniform_int(2, 4);
                 int db = rng.uniform_int(2, 4);
                 RegisterSpace sp({{"A", da}, {"B", db}});
                 PureState psi0 = PureState::make(sp, rng.pure_state(da * db));
                 PureState psi1 = PureState::make(sp, rng.pure_state(da * db));
                 UhlmannResult uh = uhlmann_unitary(psi0, psi1, {"A"});
                 return std::abs(uh.overlap - fidelity(marginal(psi0, {"B"}),
                                                       marginal(psi1, {"B"})));
               }});

  t.push_back({"uhlmann_steering", 100, 1e-7, 6, [](RandomSource& rng) {
                 int da = rng.uniform_int(2, 4);
                 int db = rng.uniform_int(2, 4);
                 RegisterSpace sp({{"A", da}, {"B", db}});
                 PureState psi0 = PureState::make(sp, rng.pure_state(da * db));
                 PureState psi1 = PureState::make(sp, rng.pure_state(da * db));
                 UhlmannResult uh = uhlmann_unitary(psi0, psi1, {"A"});
                 double steered =
                     std::sqrt(std::max(0.0, 1.0 - uh.overlap * uh.overlap));
                 double dist = trace_distance(marginal(psi0, {"B"}),
                                              marginal(psi1, {"B"}));
                 return steered - std::sqrt(2.0 * dist);
               }});

  t.push_back({"helstrom_binary", 100, 1e-6, 7, [](RandomSource& rng) {
                 int db = rng.uniform_int(2, 5);
                 CQState cq = random_cq(rng, 1, db);
                 double pguess = guessing_probability(cq);
                 Mat gap =
                     sub(scale(cq.conditionals[0], cx(cq.weights[0], 0.0)),
                         scale(cq.conditionals[1], cx(cq.weights[1], 0.0)));
                 double helstrom = 0.5 * (1.0 + trace_norm_hermitian(gap));
                 return std::abs(pguess - helstrom);
               }});

  t.push_back({"entangled_guessing", 1, 1e-6, 8, [](RandomSource&) {
                 double worst = 0.0;
                 for (int dim = 2; dim <= 4; ++dim) {
                   RegisterSpace sp({{"A", dim}, {"B", dim}});
                   Vec amps(static_cast<size_t>(dim * dim), cx(0.0, 0.0));
                   for (int i = 0; i < dim; ++i)
                     amps[static_cast<size_t>(i * dim + i)] =
                         cx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0);
                   DensityOperator rho = density(PureState::make(sp, amps));
                   double lambda = min_entropy(rho, {"B"}).lambda;
                   worst = std::max(worst,
                                    std::abs(lambda + std::log2(
                                                          static_cast<double>(
                                                              dim))));
                 }
                 return worst;
               }});

  t.push_back({"classical_min_entropy", 50, 1e-6, 9, [](RandomSource& rng) {
                 int ell = rng.uniform_int(1, 3);
                 int n = 1 << ell;
                 std::vector<int> alphabet(static_cast<size_t>(n));
                 std::vector<double> weights(static_cast<size_t>(n), 1.0 / n);
                 std::vector<Mat> indep, corr;
                 Mat shared = rng.density_matrix(2);
                 for (int x = 0; x < n; ++x) {
                   alphabet[static_cast<size_t>(x)] = x;
                   indep.push_back(shared);
                   Mat proj = Mat::zero(n, n);
                   proj(x, x) = cx(1.0, 0.0);
                   corr.push_back(proj);
                 }
                 CQState independent =
                     make_cq_state(ell, RegisterSpace({{"B", 2}}), alphabet,
                                   weights, std::move(indep));
                 CQState correlated =
                     make_cq_state(ell, RegisterSpace({{"B", n}}), alphabet,
                                   weights, std::move(corr));
                 double v1 =
                     std::abs(-std::log2(guessing_probability(independent)) -
                              static_cast<double>(ell));
                 double v2 =
                     std::abs(-std::log2(guessing_probability(correlated)));
                 return std::max(v1, v2);
               }});

  t.push_back({"classical_chain_rule", 200, 1e-7, 10, [](RandomSource& rng) {
                 int dx = rng.uniform_int(2, 3);
                 int db = rng.uniform_int(2, 3);
                 int dz = rng.uniform_int(2, 3);
                 DensityOperator rho = random_xbz(rng, dx, db, dz, true, "Z");
                 InequalityReport rep =
                     check_classical_chain_rule(rho, {"X"}, {"B"}, "Z", 0.0);
                 return -rep.slack;
               }});

  t.push_back({"measurement_bound", 200, 1e-7, 11, [](RandomSource& rng) {
                 int dx = rng.uniform_int(2, 3);
                 int db = rng.uniform_int(2, 3);
                 int dc = rng.uniform_int(2, 3);
                 DensityOperator rho = random_xbz(rng, dx, db, dc, false, "C");
                 InequalityReport rep = check_measurement_bound(
                     rho, {"X"}, {"B"}, "C", rng.unitary(dc), 0.0);
                 return -rep.slack;
               }});

  t.push_back({"quantum_chain_rule", 200, 1e-7, 12, [](RandomSource& rng) {
                 int dx = rng.uniform_int(2, 3);
                 int db = rng.uniform_int(2, 3);
                 int dc = rng.uniform_int(2, 3);
                 DensityOperator rho = random_xbz(rng, dx, db, dc, false, "C");
                 InequalityReport rep =
                     check_quantum_chain_rule(rho, {"X"}, {"B"}, "C", 0.0);
                 return -rep.slack;
               }});

  t.push_back({"leftover_hashing", 100, 1e-7, 13, [](RandomSource& rng) {
                 int db = rng.uniform_int(2, 3);
                 CQState cq = random_cq(rng, 3, db);
                 double hmin = -std::log2(guessing_probability(cq));
                 std::vector<BalancedHash> family = build_toeplitz_family(3);
                 double avg = family_average_duni(cq, family);
                 double v1 = avg - leftover_hash_bound(0.0, hmin);
                 double best = 2.0;
                 for (const BalancedHash& f : family)
                   best = std::min(best, hash_distance(cq, f));
                 double v2 = best - balanced_split_distance_bound(0.0, hmin);
                 return std::max(v1, v2);
               }});

  return t;
}

SuiteCheck run_check(const CheckSpec& spec, const RandomSource& base) {
  SuiteCheck c;
  c.name = spec.name;
  c.trials = spec.trials;
  c.tolerance = spec.tol;
  RandomSource src = base.fork(spec.stream);
  auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < spec.trials; ++t) {
    RandomSource trial = src.fork(static_cast<std::uint64_t>(t));
    c.worst = std::max(c.worst, spec.violation(trial));
  }
  auto t1 = std::chrono::steady_clock::now();
  c.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  c.passed = c.worst <= c.tolerance;
  return c;
}

}  // namespace

bool SuiteReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SuiteCheck& c) { return c.passed; });
}

SuiteReport run_lemma_suite(std::uint64_t seed, int jobs) {
  if (jobs < 1)
    throw std::invalid_argument("lemma suite: jobs must be positive");
  std::vector<CheckSpec> specs = check_table();
  SuiteReport report;
  report.seed = seed;
  report.checks.resize(specs.size());
  RandomSource base(seed);

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < specs.size();)
      report.checks[i] = run_check(specs[i], base);
  };
  size_t workers = std::min(static_cast<size_t>(jobs), specs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return report;
}

}  // namespace qsc
