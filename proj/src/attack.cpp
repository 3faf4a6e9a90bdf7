#include "qsc/attack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "qsc/eig.hpp"
#include "qsc/entropy.hpp"
#include "qsc/policy.hpp"

// Uhlmann steering. K = M_0 M_1^dagger reshapes the two pure states into
// (part) x (rest) matrices; its singular triples (sigma_i, p_i, q_i) are
// read off the Hermitian dilation [[0, K], [K^dagger, 0]], whose +sigma_i
// eigenvector is (p_i; q_i)/sqrt(2). U = Q P^dagger then attains
//
//   tr(U K) = sum_i sigma_i = ||K||_1 = F(rho_0^rest, rho_1^rest),
//
// the largest value |tr(U K)| can take over unitaries. The dilation route
// keeps small singular values that a Gram-matrix SVD would square away.
//
// Per transcript branch the attacked and target blocks are p_0 |phi><phi|
// vs p_1 |psi><psi| with overlap c = |<psi|phi>|; the trace norm of their
// difference has the closed form sqrt((p_0 - p_1)^2 + 4 p_0 p_1 (1 - c^2))
// from the two nonzero eigenvalues (sum p_0 - p_1, product
// -p_0 p_1 (1 - c^2)), and the blocks over distinct transcripts are
// orthogonal, so the aggregate distance is half the sum of branch terms.

namespace qsc {

namespace {

constexpr double kUnitaryTol = 1e-9;

// Density of everything outside Alice's hands: the transcript events
// embedded as classical registers, tensored with the marginal on Bob's
// registers. Used to certify that a superposition commit looks exactly
// like the class-averaged honest commit from the outside.
Mat outside_density(const ExecutionResult& ex) {
  if (ex.branches.empty())
    throw std::invalid_argument("outside view: execution has no branches");
  const std::vector<Event>& tmpl = ex.branches.front().events;
  std::vector<std::string> kept_regs;
  for (const std::string& n : ex.space.names())
    if (ex.owners.at(n) == Owner::bob) kept_regs.push_back(n);

  long d_ev = 1;
  for (const Event& e : tmpl) d_ev *= e.dim;
  int d_regs = 1;
  for (const std::string& n : kept_regs) d_regs *= ex.space.dim_of(n);
  long dv = d_ev * d_regs;
  if (dv > policy().internal_dimension_cap)
    throw std::invalid_argument("outside view: embedded dimension " +
                                std::to_string(dv) + " exceeds the cap");

  Mat m = Mat::zero(static_cast<int>(dv), static_cast<int>(dv));
  for (const Branch& b : ex.branches) {
    if (b.events.size() != tmpl.size())
      throw std::invalid_argument("outside view: ragged transcript");
    long e_idx = 0;
    for (size_t e = 0; e < tmpl.size(); ++e)
      e_idx = e_idx * tmpl[e].dim + b.events[e].value;
    DensityOperator marg = marginal(b.state, kept_regs);
    int off = static_cast<int>(e_idx) * d_regs;
    for (int i = 0; i < d_regs; ++i)
      for (int j = 0; j < d_regs; ++j)
        m(off + i, off + j) += b.prob * marg.rho(i, j);
  }
  return m;
}

std::map<std::vector<int>, const Branch*> branches_by_transcript(
    const ExecutionResult& ex) {
  std::map<std::vector<int>, const Branch*> out;
  for (const Branch& b : ex.branches) {
    std::vector<int> key;
    key.reserve(b.events.size());
    for (const Event& e : b.events) {
      if (!e.bob_sees)
        throw std::invalid_argument(
            "conditioned attack: event on '" + e.reg +
            "' is hidden from Bob; remove the resource first");
      key.push_back(e.value);
    }
    if (!out.emplace(std::move(key), &b).second)
      throw std::runtime_error(
          "conditioned attack: two branches share one transcript");
  }
  return out;
}

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw std::runtime_error("attack synthesis [" + name + "]: " + e.what());
  }
}

}  // namespace

UhlmannResult uhlmann_unitary(const PureState& psi0, const PureState& psi1,
                              const std::vector<std::string>& part) {
  if (!psi0.space.same_layout(psi1.space))
    throw std::invalid_argument(
        "uhlmann_unitary: states live on different register layouts");
  if (std::abs(vec_norm(psi0.amps) - 1.0) > 1e-7 ||
      std::abs(vec_norm(psi1.amps) - 1.0) > 1e-7)
    throw std::invalid_argument("uhlmann_unitary: states must be normalized");
  IndexMap im = make_index_map(psi0.space, part);
  const int da = im.sub_dim, dr = im.rest_dim;

  Mat k = Mat::zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      cx s(0.0, 0.0);
      for (int r = 0; r < dr; ++r)
        s += psi0.amps[im.global(i, r)] * std::conj(psi1.amps[im.global(j, r)]);
      k(i, j) = s;
    }

  Mat h = Mat::zero(2 * da, 2 * da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      h(i, da + j) = k(i, j);
      h(da + j, i) = std::conj(k(i, j));
    }
  EigResult eg = eig_hermitian(h);
  const double smax = std::max(0.0, eg.values.front());
  const double cut = 1e-12 * std::max(1.0, smax);
  std::vector<int> keep;
  for (int c = 0; c < 2 * da && static_cast<int>(keep.size()) < da; ++c)
    if (eg.values[c] > cut) keep.push_back(c);

  Mat u;
  if (keep.empty()) {
    u = Mat::identity(da);
  } else {
    const int rank = static_cast<int>(keep.size());
    const double rt2 = std::sqrt(2.0);
    Mat pthin = Mat::zero(da, rank), qthin = Mat::zero(da, rank);
    for (int c = 0; c < rank; ++c)
      for (int i = 0; i < da; ++i) {
        pthin(i, c) = rt2 * eg.vectors(i, keep[c]);
        qthin(i, c) = rt2 * eg.vectors(da + i, keep[c]);
      }
    orthonormalize_columns(pthin);
    orthonormalize_columns(qthin);
    u = mul(complete_orthonormal(qthin), adjoint(complete_orthonormal(pthin)));
  }

  cx t(0.0, 0.0);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) t += u(i, j) * k(j, i);
  return {std::move(u), std::abs(t)};
}

SuperpositionCommit commit_superposition(const ProtocolIR& p_free,
                                         const BalancedHash& f, int z) {
  if (p_free.resources.kind != ResourceDecl::Kind::none)
    throw std::invalid_argument(
        "commit_superposition: protocol still calls a resource; remove it "
        "first");
  if (f.ell != p_free.ell)
    throw std::invalid_argument(
        "commit_superposition: hash arity does not match the protocol");
  if (z != 0 && z != 1)
    throw std::invalid_argument("commit_superposition: z must be 0 or 1");

  const int n = 1 << p_free.ell;
  std::vector<int> preimage;
  for (int x = 0; x < n; ++x)
    if (f(x) == z) preimage.push_back(x);
  const int m = static_cast<int>(preimage.size());
  if (m == 0)
    throw std::invalid_argument("commit_superposition: empty preimage class");

  std::vector<Register> regs{{"X", n}};
  if (m > 1) regs.push_back({"Xp", m});
  for (const RegisterDecl& d : p_free.registers) regs.push_back({d.name, d.dim});
  RegisterSpace sp(regs, policy().internal_dimension_cap);
  Vec amps(static_cast<size_t>(sp.total_dim()), cx(0.0, 0.0));
  const double a = 1.0 / std::sqrt(static_cast<double>(m));
  for (int idx = 0; idx < m; ++idx) {
    std::vector<int> digits(static_cast<size_t>(sp.count()), 0);
    digits[0] = preimage[idx];
    if (m > 1) digits[1] = idx;
    amps[static_cast<size_t>(basis_index(sp, digits))] = cx(a, 0.0);
  }

  SuperpositionCommit out{
      f, z, preimage,
      run_protocol(p_free, PureState::make(sp, amps), Phase::commit)};

  // From the outside a class superposition must be indistinguishable from
  // committing a uniformly drawn class member.
  Mat seen = outside_density(out.result);
  Mat avg = Mat::zero(seen.rows, seen.cols);
  for (int x : preimage) {
    Mat one = outside_density(execute_fixed(p_free, x, Phase::commit));
    avg = add(avg, scale(one, cx(1.0 / m, 0.0)));
  }
  const double dev = max_abs(sub(seen, avg));
  if (dev > policy().reconstruction_tol)
    throw std::runtime_error(
        "commit_superposition: transcript-visible marginal deviates from the "
        "class average by " + std::to_string(dev));
  return out;
}

ConditionedAttack classical_conditioned_attack(const ExecutionResult& from,
                                               const ExecutionResult& to) {
  if (!from.space.same_layout(to.space))
    throw std::invalid_argument(
        "conditioned attack: executions use different register layouts");
  if (from.owners != to.owners)
    throw std::invalid_argument(
        "conditioned attack: executions disagree on register ownership");
  ConditionedAttack out;
  out.alice_part = from.owned_by(Owner::alice);
  if (out.alice_part.empty())
    throw std::invalid_argument(
        "conditioned attack: Alice holds no registers to steer with");

  auto m0 = branches_by_transcript(from);
  auto m1 = branches_by_transcript(to);

  double total = 0.0;
  auto it0 = m0.begin();
  auto it1 = m1.begin();
  while (it0 != m0.end() || it1 != m1.end()) {
    bool only0 = it1 == m1.end() ||
                 (it0 != m0.end() && it0->first < it1->first);
    bool only1 = it0 == m0.end() ||
                 (it1 != m1.end() && it1->first < it0->first);
    BranchAttack ba;
    if (only0) {
      ba.key = it0->first;
      ba.p0 = it0->second->prob;
      total += ba.p0;
      ++it0;
    } else if (only1) {
      ba.key = it1->first;
      ba.p1 = it1->second->prob;
      total += ba.p1;
      ++it1;
    } else {
      const Branch& b0 = *it0->second;
      const Branch& b1 = *it1->second;
      ba.key = it0->first;
      ba.p0 = b0.prob;
      ba.p1 = b1.prob;
      UhlmannResult uh = uhlmann_unitary(b0.state, b1.state, out.alice_part);
      Mat g = mul(adjoint(uh.u), uh.u);
      if (max_abs(sub(g, Mat::identity(uh.u.rows))) > kUnitaryTol)
        throw std::runtime_error(
            "conditioned attack: branch steering operator is not unitary");
      PureState moved = b0.state;
      apply_unitary(moved, uh.u, out.alice_part);
      const double c = std::abs(vec_dot(b1.state.amps, moved.amps));
      ba.overlap = c;
      ba.u = std::move(uh.u);
      const double gap = ba.p0 - ba.p1;
      total += std::sqrt(gap * gap + 4.0 * ba.p0 * ba.p1 *
                                         std::max(0.0, 1.0 - c * c));
      ++it0;
      ++it1;
    }
    out.branches.push_back(std::move(ba));
  }
  out.aggregate_distance = 0.5 * total;
  return out;
}

AttackCertificate synthesize_attack(const ProtocolIR& p) {
  if (p.ell > 4)
    throw std::invalid_argument(
        "synthesize_attack: exhaustive hash search needs ell <= 4");
  AttackCertificate cert;

  ProtocolIR free_p =
      stage("resource removal", [&] { return resource_free(p); });
  UniformExecution ue = stage("honest commit", [&] {
    return execute_uniform(free_p, Phase::commit);
  });
  cert.measured_eps = stage("hiding", [&] { return measure_hiding(ue); });

  CQState xbc =
      stage("record view", [&] { return cq_view(ue, ViewKind::bob_and_c); });
  cert.hmin_xbc = stage("min-entropy", [&] {
    DensityOperator joint = cq_joint(xbc);
    std::vector<std::string> cond;
    for (const std::string& n : joint.space.names())
      if (n != "X") cond.push_back(n);
    return min_entropy(joint, cond).lambda;
  });

  HashSearchResult hs = stage("hash search", [&] {
    return best_hash(xbc, enumerate_balanced(p.ell));
  });
  cert.f = hs.hash;
  cert.hash_distance = hs.distance;
  cert.hashes_searched = hs.searched;
  cert.z = 0;

  SuperpositionCommit sc0 = stage("class superposition", [&] {
    return commit_superposition(free_p, cert.f, 0);
  });
  SuperpositionCommit sc1 = stage("class superposition", [&] {
    return commit_superposition(free_p, cert.f, 1);
  });
  cert.attack = stage("steering", [&] {
    return classical_conditioned_attack(sc0.result, sc1.result);
  });

  cert.eps_tilde = std::sqrt(2.0 * cert.measured_eps);
  cert.delta =
      cert.eps_tilde + 0.5 * std::sqrt(std::exp2(1.0 - cert.hmin_xbc));
  cert.delta_bound = 2.0 * std::sqrt(cert.delta);
  cert.achieved_distance = cert.attack.aggregate_distance;
  cert.implied_binding = 1.0 - cert.achieved_distance;
  return cert;
}

}  // namespace qsc
