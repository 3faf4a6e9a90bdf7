#include "qsc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "qsc/policy.hpp"

// Execution keeps a list of branches, one per assignment of every classical
// value recorded so far. A classical send or a classical resource commit
// measures one register in the canonical basis and splits each branch over
// the outcomes; the collapsed register is removed from the state and its
// value lives on in the branch's event list. All branches therefore share
// one register layout and one event structure, and each branch state stays
// pure and normalized.

namespace qsc {

namespace {

constexpr double kBranchPruneTol = 1e-15;
constexpr double kGateUnitarityTol = 1e-9;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("protocol: " + where + ": " + what);
}

std::string round_label(size_t i) { return "round " + std::to_string(i); }

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
  int k = 0;
  while ((1 << k) < v) ++k;
  return k;
}

// |y, c> -> |y, c + y mod d>, the coherent copy of one d-valued register
// into a fresh one prepared in |0>.
Mat addmod_gate(int d) {
  Mat m(d * d, d * d);
  for (int y = 0; y < d; ++y)
    for (int c = 0; c < d; ++c) m(y * d + (c + y) % d, y * d + c) = 1.0;
  return m;
}

struct ReplayReg {
  int dim = 2;
  Owner owner = Owner::alice;
  bool committed = false;
  bool opened = false;
  bool quantum_commit = false;
  bool sent_to_c = false;
  Actor source = Actor::alice;  // committer or to_c sender
};

Owner owner_of(Actor a) {
  return a == Actor::alice ? Owner::alice : Owner::bob;
}

}  // namespace

void validate_protocol(const ProtocolIR& p) {
  if (p.ell < 1 || p.ell > 6) fail("header", "ell must be in [1, 6]");
  const ResourceDecl& rd = p.resources;
  if (rd.n_a < 0 || rd.n_b < 0) fail("resources", "negative capacity");
  if (rd.kind == ResourceDecl::Kind::none && rd.total() != 0)
    fail("resources", "kind 'none' cannot carry capacity");
  if (rd.kind != ResourceDecl::Kind::none && rd.total() == 0)
    fail("resources", "declared resource has zero capacity");
  if (rd.kind == ResourceDecl::Kind::qubit_bc && rd.n_b != 0)
    fail("resources", "the qubit resource takes commitments from Alice only");

  std::map<std::string, ReplayReg> regs;
  regs["X"] = ReplayReg{1 << p.ell, Owner::alice};
  for (const RegisterDecl& d : p.registers) {
    if (d.name.empty()) fail("registers", "empty register name");
    if (d.name == "X" || d.name == "Xp")
      fail("registers", "'" + d.name + "' is reserved");
    if (regs.count(d.name)) fail("registers", "duplicate name '" + d.name + "'");
    if (d.dim < 2 || d.dim > policy().dimension_cap)
      fail("registers", "register '" + d.name + "' has invalid dimension");
    regs[d.name] = ReplayReg{d.dim, owner_of(d.owner)};
  }
  for (const std::string& n : p.c_registers)
    if (!regs.count(n) || n == "X")
      fail("c_registers", "unknown register '" + n + "'");

  bool open_seen = false;
  int events = 0;
  int bits_a = 0, bits_b = 0;
  for (size_t i = 0; i < p.rounds.size(); ++i) {
    const Round& r = p.rounds[i];
    const std::string where = round_label(i);
    if (r.phase == Phase::open)
      open_seen = true;
    else if (open_seen)
      fail(where, "commit-phase round after the open phase began");
    if (r.to_c && r.kind != RoundKind::send_classical)
      fail(where, "to_c applies to classical sends only");
    if (r.kind != RoundKind::gate && !r.when.empty())
      fail(where, "conditions apply to gate rounds only");
    if (r.regs.empty()) fail(where, "no target registers");

    auto live = [&](const std::string& n) -> ReplayReg& {
      auto it = regs.find(n);
      if (it == regs.end()) fail(where, "unknown register '" + n + "'");
      return it->second;
    };
    auto held = [&](const std::string& n) -> ReplayReg& {
      ReplayReg& g = live(n);
      if (g.owner == Owner::consumed)
        fail(where, "register '" + n + "' was already measured away");
      if (g.owner == Owner::escrow)
        fail(where, "register '" + n + "' sits in resource escrow");
      if (g.owner != owner_of(r.actor))
        fail(where, "actor does not hold register '" + n + "'");
      return g;
    };

    switch (r.kind) {
      case RoundKind::gate: {
        std::set<std::string> seen;
        long dim = 1;
        for (const std::string& n : r.regs) {
          if (!seen.insert(n).second)
            fail(where, "duplicate gate target '" + n + "'");
          dim *= held(n).dim;
        }
        if (dim > policy().internal_dimension_cap)
          fail(where, "gate dimension exceeds the internal cap");
        if (r.matrix.rows != dim || r.matrix.cols != dim)
          fail(where, "gate matrix shape does not match its registers");
        Mat gap = mul(adjoint(r.matrix), r.matrix);
        for (int k = 0; k < gap.rows; ++k) gap(k, k) -= 1.0;
        if (max_abs(gap) > kGateUnitarityTol)
          fail(where, "gate matrix is not unitary");
        for (const TranscriptCondition& c : r.when) {
          if (c.event < 0 || c.event >= events)
            fail(where, "condition references event " + std::to_string(c.event) +
                            " which has not happened yet");
          if (c.value < 0) fail(where, "condition value is negative");
        }
        break;
      }
      case RoundKind::send_classical:
        for (const std::string& n : r.regs) {
          ReplayReg& g = held(n);
          g.owner = Owner::consumed;
          if (r.to_c) {
            g.sent_to_c = true;
            g.source = r.actor;
          }
          ++events;
        }
        break;
      case RoundKind::send_quantum:
        for (const std::string& n : r.regs)
          held(n).owner = owner_of(r.actor) == Owner::alice ? Owner::bob
                                                            : Owner::alice;
        break;
      case RoundKind::resource_commit: {
        if (rd.kind == ResourceDecl::Kind::none)
          fail(where, "resource commit without a declared resource");
        if (r.phase != Phase::commit)
          fail(where, "resource commit outside the commit phase");
        for (const std::string& n : r.regs) {
          ReplayReg& g = held(n);
          if (!is_pow2(g.dim))
            fail(where, "committed register '" + n +
                            "' must have power-of-two dimension");
          (r.actor == Actor::alice ? bits_a : bits_b) += log2_exact(g.dim);
          g.committed = true;
          g.source = r.actor;
          if (rd.kind == ResourceDecl::Kind::classical_bc) {
            g.owner = Owner::consumed;
            ++events;
          } else {
            if (r.actor != Actor::alice)
              fail(where, "the qubit resource takes commitments from Alice only");
            g.owner = Owner::escrow;
            g.quantum_commit = true;
          }
        }
        break;
      }
      case RoundKind::resource_open:
        if (r.phase != Phase::open)
          fail(where, "resource open outside the open phase");
        for (const std::string& n : r.regs) {
          ReplayReg& g = live(n);
          bool committed_here = g.committed && g.source == r.actor;
          bool ca_here = g.sent_to_c && g.source == r.actor;
          if (!committed_here && !ca_here)
            fail(where, "register '" + n + "' was not committed by this actor");
          if (g.opened) fail(where, "register '" + n + "' opened twice");
          g.opened = true;
          if (g.quantum_commit)
            g.owner = r.actor == Actor::alice ? Owner::bob : Owner::alice;
          else
            ++events;
        }
        break;
    }
  }

  if (rd.kind == ResourceDecl::Kind::classical_bc &&
      (bits_a != rd.n_a || bits_b != rd.n_b))
    fail("resources", "committed bits (" + std::to_string(bits_a) + ", " +
                          std::to_string(bits_b) +
                          ") do not match the declared capacity");
  if (rd.kind == ResourceDecl::Kind::qubit_bc && bits_a != rd.n_a)
    fail("resources", "committed qubits (" + std::to_string(bits_a) +
                          ") do not match the declared capacity");
  for (const std::string& n : p.reveal)
    if (!regs.count(n)) fail("reveal", "unknown register '" + n + "'");
}

namespace {

bool when_matches(const std::vector<Event>& ev,
                  const std::vector<TranscriptCondition>& when) {
  for (const TranscriptCondition& c : when) {
    if (c.event >= static_cast<int>(ev.size())) return false;
    if (ev[c.event].value != c.value) return false;
  }
  return true;
}

void measure_register(std::vector<Branch>& branches, const std::string& reg,
                      const std::string& tag, bool bob_sees) {
  std::vector<Branch> next;
  next.reserve(branches.size());
  for (Branch& b : branches) {
    int d = b.state.space.dim_of(reg);
    for (int v = 0; v < d; ++v) {
      auto [pr, post] = project_out(b.state, reg, v);
      double w = b.prob * pr;
      if (w <= kBranchPruneTol) continue;
      Branch nb;
      nb.prob = w;
      nb.state = std::move(post);
      nb.events = b.events;
      nb.events.push_back(Event{tag, reg, d, v, bob_sees});
      next.push_back(std::move(nb));
    }
  }
  if (next.empty())
    throw std::runtime_error(
        "protocol execution lost all probability measuring '" + reg + "'");
  branches = std::move(next);
}

}  // namespace

std::vector<std::string> ExecutionResult::owned_by(Owner o) const {
  std::vector<std::string> out;
  for (const std::string& n : space.names()) {
    auto it = owners.find(n);
    if (it != owners.end() && it->second == o) out.push_back(n);
  }
  return out;
}

PureState initial_state(const ProtocolIR& p, int x) {
  validate_protocol(p);
  if (x < 0 || x >= (1 << p.ell))
    throw std::invalid_argument("protocol input: x out of range");
  std::vector<Register> regs{{"X", 1 << p.ell}};
  for (const RegisterDecl& d : p.registers) regs.push_back({d.name, d.dim});
  RegisterSpace sp(regs, policy().internal_dimension_cap);
  std::vector<int> digits(regs.size(), 0);
  digits[0] = x;
  return basis_state(sp, digits);
}

ExecutionResult run_protocol(const ProtocolIR& p, const PureState& input,
                             Phase upto) {
  validate_protocol(p);
  const RegisterSpace& sp = input.space;
  if (!sp.has("X") || sp.dim_of("X") != (1 << p.ell))
    throw std::invalid_argument(
        "protocol input: register X of dimension 2^ell is required");
  for (const RegisterDecl& d : p.registers)
    if (!sp.has(d.name) || sp.dim_of(d.name) != d.dim)
      throw std::invalid_argument("protocol input: declared register '" +
                                  d.name + "' missing or mis-sized");

  std::map<std::string, Owner> owner;
  for (const std::string& n : sp.names()) owner[n] = Owner::alice;
  for (const RegisterDecl& d : p.registers) owner[d.name] = owner_of(d.owner);

  std::vector<Branch> branches;
  branches.push_back(Branch{1.0, input, {}});

  for (const Round& r : p.rounds) {
    if (upto == Phase::commit && r.phase == Phase::open) break;
    switch (r.kind) {
      case RoundKind::gate:
        for (Branch& b : branches)
          if (when_matches(b.events, r.when))
            apply_unitary(b.state, r.matrix, r.regs);
        break;
      case RoundKind::send_classical:
        for (const std::string& n : r.regs) {
          measure_register(branches, n, r.to_c ? "ca" : "cl", true);
          owner[n] = Owner::consumed;
        }
        break;
      case RoundKind::send_quantum:
        for (const std::string& n : r.regs)
          owner[n] = r.actor == Actor::alice ? Owner::bob : Owner::alice;
        break;
      case RoundKind::resource_commit:
        for (const std::string& n : r.regs) {
          if (p.resources.kind == ResourceDecl::Kind::classical_bc) {
            measure_register(branches, n, "rc", r.actor == Actor::bob);
            owner[n] = Owner::consumed;
          } else {
            owner[n] = Owner::escrow;
          }
        }
        break;
      case RoundKind::resource_open:
        for (const std::string& n : r.regs) {
          if (owner.at(n) == Owner::escrow) {
            owner[n] = r.actor == Actor::alice ? Owner::bob : Owner::alice;
            continue;
          }
          for (Branch& b : branches) {
            int found = -1;
            for (int e = static_cast<int>(b.events.size()) - 1; e >= 0; --e)
              if (b.events[e].reg == n &&
                  (b.events[e].tag == "rc" || b.events[e].tag == "ca")) {
                found = e;
                break;
              }
            if (found < 0)
              throw std::runtime_error(
                  "protocol open: no committed value recorded for '" + n + "'");
            const Event& src = b.events[found];
            b.events.push_back(
                Event{"op", n, src.dim, src.value, r.actor == Actor::alice});
          }
        }
        break;
    }
  }

  ExecutionResult res;
  res.protocol = p;
  res.upto = upto;
  res.space = branches.front().state.space;
  res.branches = std::move(branches);
  res.owners = std::move(owner);
  return res;
}

ExecutionResult execute_fixed(const ProtocolIR& p, int x, Phase upto) {
  return run_protocol(p, initial_state(p, x), upto);
}

UniformExecution execute_uniform(const ProtocolIR& p, Phase upto) {
  UniformExecution ue;
  ue.protocol = p;
  ue.upto = upto;
  int nx = 1 << p.ell;
  ue.per_x.reserve(nx);
  for (int x = 0; x < nx; ++x) ue.per_x.push_back(execute_fixed(p, x, upto));
  return ue;
}

CQState cq_view(const UniformExecution& ue, ViewKind kind) {
  const ProtocolIR& p = ue.protocol;
  int nx = 1 << p.ell;
  if (static_cast<int>(ue.per_x.size()) != nx)
    throw std::invalid_argument("cq_view: one execution per string required");
  const ExecutionResult& ex0 = ue.per_x.front();
  if (ex0.branches.empty()) throw std::invalid_argument("cq_view: no branches");
  const std::vector<Event>& tmpl = ex0.branches.front().events;

  auto in_c = [&](const std::string& n) {
    return std::find(p.c_registers.begin(), p.c_registers.end(), n) !=
           p.c_registers.end();
  };
  auto keep_event = [&](const Event& e) {
    switch (kind) {
      case ViewKind::bob:
        return e.bob_sees && e.tag != "ca";
      case ViewKind::bob_and_c:
        return e.bob_sees;
      case ViewKind::transcript_and_registers:
        return true;
    }
    return false;
  };
  auto keep_reg = [&](const std::string& n) {
    Owner o = ex0.owners.at(n);
    switch (kind) {
      case ViewKind::bob:
        return o == Owner::bob && !in_c(n);
      case ViewKind::bob_and_c:
        return o == Owner::bob;
      case ViewKind::transcript_and_registers:
        return true;
    }
    return false;
  };

  std::vector<int> kept_events;
  for (int e = 0; e < static_cast<int>(tmpl.size()); ++e)
    if (keep_event(tmpl[e])) kept_events.push_back(e);
  std::vector<std::string> kept_regs;
  for (const std::string& n : ex0.space.names())
    if (keep_reg(n)) kept_regs.push_back(n);

  std::vector<Register> view_regs;
  for (int ke : kept_events) {
    std::string en = "ev" + std::to_string(ke);
    if (ex0.space.has(en))
      throw std::invalid_argument("cq_view: register name '" + en +
                                  "' collides with a transcript slot");
    view_regs.push_back({en, tmpl[ke].dim});
  }
  int d_regs = 1;
  for (const std::string& n : kept_regs) {
    view_regs.push_back({n, ex0.space.dim_of(n)});
    d_regs *= ex0.space.dim_of(n);
  }
  RegisterSpace vsp(view_regs, policy().internal_dimension_cap);
  int dv = vsp.total_dim();

  std::vector<int> alphabet(nx);
  std::vector<double> weights(nx, 1.0 / nx);
  std::vector<Mat> conds;
  conds.reserve(nx);
  for (int x = 0; x < nx; ++x) {
    alphabet[x] = x;
    const ExecutionResult& ex = ue.per_x[x];
    if (!ex.space.same_layout(ex0.space))
      throw std::invalid_argument(
          "cq_view: executions disagree on the register layout");
    Mat m(dv, dv);
    for (const Branch& b : ex.branches) {
      if (b.events.size() != tmpl.size())
        throw std::invalid_argument(
            "cq_view: executions disagree on the transcript shape");
      long e_idx = 0;
      for (int ke : kept_events) e_idx = e_idx * tmpl[ke].dim + b.events[ke].value;
      DensityOperator marg = marginal(b.state, kept_regs);
      int off = static_cast<int>(e_idx) * d_regs;
      for (int i = 0; i < d_regs; ++i)
        for (int j = 0; j < d_regs; ++j)
          m(off + i, off + j) += b.prob * marg.rho(i, j);
    }
    conds.push_back(std::move(m));
  }
  return make_cq_state(p.ell, vsp, std::move(alphabet), std::move(weights),
                       std::move(conds));
}

double measure_hiding(const UniformExecution& ue) {
  if (ue.upto != Phase::commit)
    throw std::invalid_argument(
        "measure_hiding: commit-phase execution required");
  return dist_from_uniform(cq_view(ue, ViewKind::bob)).value;
}

double honest_open_success(const ProtocolIR& p) {
  validate_protocol(p);
  if (p.reveal.empty())
    throw std::invalid_argument(
        "honest_open_success: protocol declares no reveal registers");
  double worst = 1.0;
  for (int x = 0; x < (1 << p.ell); ++x) {
    ExecutionResult ex = execute_fixed(p, x, Phase::open);
    double ok = 0.0;
    for (const Branch& b : ex.branches) {
      long xhat = 0, span = 1;
      for (const std::string& n : p.reveal) {
        int found = -1;
        for (int e = static_cast<int>(b.events.size()) - 1; e >= 0; --e) {
          const Event& ev = b.events[e];
          if (ev.reg == n && ev.bob_sees &&
              (ev.tag == "cl" || ev.tag == "op" || ev.tag == "ca")) {
            found = e;
            break;
          }
        }
        if (found < 0)
          throw std::runtime_error("honest_open_success: register '" + n +
                                   "' never revealed a value to Bob");
        xhat = xhat * b.events[found].dim + b.events[found].value;
        span *= b.events[found].dim;
      }
      if (span != (1L << p.ell))
        throw std::runtime_error(
            "honest_open_success: revealed digits span " +
            std::to_string(span) + " values, expected 2^ell");
      if (xhat == x) ok += b.prob;
    }
    worst = std::min(worst, ok);
  }
  return worst;
}

ProtocolIR remove_resource(const ProtocolIR& p) {
  validate_protocol(p);
  if (p.resources.kind != ResourceDecl::Kind::classical_bc)
    throw std::invalid_argument(
        "remove_resource: protocol does not use the classical resource");
  ProtocolIR q = p;
  q.name = p.name.empty() ? "resource-free" : p.name + " (resource-free)";
  q.resources = ResourceDecl{};
  q.removed = p.resources;
  q.rounds.clear();
  int copies = 0;
  auto dim_of = [&](const std::string& n) {
    if (n == "X") return 1 << p.ell;
    for (const RegisterDecl& d : p.registers)
      if (d.name == n) return d.dim;
    throw std::invalid_argument("remove_resource: unknown register '" + n +
                                "'");
  };
  for (const Round& r : p.rounds) {
    if (r.kind == RoundKind::resource_commit) {
      for (const std::string& n : r.regs) {
        if (r.actor == Actor::alice) {
          Round s;
          s.actor = Actor::alice;
          s.phase = r.phase;
          s.kind = RoundKind::send_classical;
          s.regs = {n};
          s.to_c = true;
          q.rounds.push_back(std::move(s));
        } else {
          std::string cb = "CB" + std::to_string(copies++);
          for (const RegisterDecl& d : q.registers)
            if (d.name == cb)
              throw std::invalid_argument("remove_resource: register name '" +
                                          cb + "' is already taken");
          int d = dim_of(n);
          q.registers.push_back({cb, d, Actor::bob});
          q.c_registers.push_back(cb);
          Round g;
          g.actor = Actor::bob;
          g.phase = r.phase;
          g.kind = RoundKind::gate;
          g.regs = {n, cb};
          g.matrix = addmod_gate(d);
          q.rounds.push_back(std::move(g));
        }
      }
    } else if (r.kind == RoundKind::resource_open) {
      if (r.actor == Actor::alice) {
        q.rounds.push_back(r);
      } else {
        for (const std::string& n : r.regs) {
          Round s;
          s.actor = Actor::bob;
          s.phase = Phase::open;
          s.kind = RoundKind::send_classical;
          s.regs = {n};
          q.rounds.push_back(std::move(s));
        }
      }
    } else {
      q.rounds.push_back(r);
    }
  }
  validate_protocol(q);
  return q;
}

ProtocolIR remove_quantum_resource(const ProtocolIR& p) {
  validate_protocol(p);
  if (p.resources.kind != ResourceDecl::Kind::qubit_bc)
    throw std::invalid_argument(
        "remove_quantum_resource: protocol does not use the qubit resource");
  ProtocolIR q = p;
  q.name = p.name.empty() ? "resource-free" : p.name + " (resource-free)";
  q.resources = ResourceDecl{};
  q.removed = p.resources;
  q.rounds.clear();
  for (const Round& r : p.rounds) {
    if (r.kind == RoundKind::resource_commit) {
      Round s;
      s.actor = r.actor;
      s.phase = r.phase;
      s.kind = RoundKind::send_quantum;
      s.regs = r.regs;
      q.rounds.push_back(std::move(s));
      for (const std::string& n : r.regs) q.c_registers.push_back(n);
    } else if (r.kind == RoundKind::resource_open) {
      continue;  // the receiver already holds the register
    } else {
      q.rounds.push_back(r);
    }
  }
  validate_protocol(q);
  return q;
}

ProtocolIR resource_free(const ProtocolIR& p) {
  switch (p.resources.kind) {
    case ResourceDecl::Kind::classical_bc:
      return remove_resource(p);
    case ResourceDecl::Kind::qubit_bc:
      return remove_quantum_resource(p);
    case ResourceDecl::Kind::none:
      break;
  }
  validate_protocol(p);
  return p;
}

}  // namespace qsc
