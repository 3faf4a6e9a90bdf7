#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "qsc/entropy.hpp"
#include "qsc/metrics.hpp"
#include "qsc/protocol.hpp"

using namespace qsc;

namespace {

template <class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

double hmin_view(const UniformExecution& ue, ViewKind k) {
  CQState cq = cq_view(ue, k);
  DensityOperator joint = cq_joint(cq, "X");
  return min_entropy(joint, cq.quantum_space.names()).lambda;
}

double total_prob(const ExecutionResult& ex) {
  double s = 0.0;
  for (const Branch& b : ex.branches) s += b.prob;
  return s;
}

}  // namespace

TEST_CASE("protocol validation rejects malformed structures") {
  CHECK(contains(thrown_message([] {
          ProtocolIR p;
          p.ell = 0;
          validate_protocol(p);
        }),
        "ell"));

  CHECK(contains(thrown_message([] {
          ProtocolIR p;
          p.ell = 1;
          p.registers.push_back({"X", 2, Actor::alice});
          validate_protocol(p);
        }),
        "reserved"));

  CHECK(contains(thrown_message([] {
          ProtocolIR p;
          p.ell = 1;
          p.registers.push_back({"Q", 2, Actor::alice});
          p.registers.push_back({"Q", 2, Actor::bob});
          validate_protocol(p);
        }),
        "duplicate"));

  // Bob cannot act on Alice's register.
  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit:0.5");
    p.rounds[0].actor = Actor::bob;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "does not hold"));
  }

  // A gate matrix must be unitary.
  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit:0.5");
    p.rounds[0].matrix(0, 0) = 0.5;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "not unitary"));
  }

  // Commit-phase rounds cannot follow the open phase.
  {
    ProtocolIR p = builtin_protocol("trivial:1");
    p.rounds.front().phase = Phase::open;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "open phase"));
  }

  // Resource rounds need a declared resource of matching capacity.
  {
    ProtocolIR p = builtin_protocol("trivial:1");
    p.resources = ResourceDecl{};
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "without a declared resource"));
  }
  {
    ProtocolIR p = builtin_protocol("trivial:2");
    p.resources.n_a = 1;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "declared capacity"));
  }

  // Only the committer can open, and only once.
  {
    ProtocolIR p = builtin_protocol("trivial:1");
    p.rounds.back().actor = Actor::bob;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "not committed by this actor"));
  }

  {
    ProtocolIR p = builtin_protocol("trivial:1");
    p.reveal = {"nope"};
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "unknown register"));
  }

  // Conditions may only reference events that already happened.
  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit:0.5");
    p.rounds[0].when.push_back({0, 1});
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "has not happened"));
  }

  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit:0.5");
    p.rounds[0].to_c = true;
    CHECK(contains(thrown_message([&] { validate_protocol(p); }),
                   "classical sends"));
  }

  CHECK_THROWS_AS((void)builtin_protocol("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS((void)builtin_protocol("trivial"), std::invalid_argument);
  CHECK_THROWS_AS((void)builtin_protocol("trivial:9"), std::invalid_argument);
}

TEST_CASE("trivial commitment hides through the resource and opens exactly") {
  ProtocolIR p = builtin_protocol("trivial:2");

  ExecutionResult ex = execute_fixed(p, 1, Phase::open);  // bits (0, 1)
  REQUIRE(ex.branches.size() == 1);
  CHECK(ex.branches[0].prob == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Event>& ev = ex.branches[0].events;
  REQUIRE(ev.size() == 4);
  CHECK(ev[0].tag == "rc");
  CHECK(ev[0].reg == "R0");
  CHECK(ev[0].value == 0);
  CHECK_FALSE(ev[0].bob_sees);
  CHECK(ev[1].tag == "rc");
  CHECK(ev[1].value == 1);
  CHECK(ev[2].tag == "op");
  CHECK(ev[2].value == 0);
  CHECK(ev[2].bob_sees);
  CHECK(ev[3].tag == "op");
  CHECK(ev[3].value == 1);

  CHECK(honest_open_success(p) == doctest::Approx(1.0).epsilon(1e-12));

  UniformExecution ue = execute_uniform(p, Phase::commit);
  // Bob sees nothing before the open: the view is trivial and hiding is 0.
  CQState bview = cq_view(ue, ViewKind::bob);
  CHECK(bview.quantum_space.total_dim() == 1);
  CHECK(measure_hiding(ue) <= 1e-9);
}

TEST_CASE("resource removal turns trivial commits into messages Bob records") {
  ProtocolIR p = builtin_protocol("trivial:2");
  ProtocolIR q = remove_resource(p);

  CHECK(q.resources.kind == ResourceDecl::Kind::none);
  CHECK(q.removed.kind == ResourceDecl::Kind::classical_bc);
  CHECK(q.removed.n_a == 2);
  CHECK(q.c_registers.empty());  // Alice-side commits carry no copy register

  ExecutionResult ex = execute_fixed(q, 2, Phase::commit);  // bits (1, 0)
  REQUIRE(ex.branches.size() == 1);
  const std::vector<Event>& ev = ex.branches[0].events;
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].tag == "ca");
  CHECK(ev[0].value == 1);
  CHECK(ev[0].bob_sees);
  CHECK(ev[1].tag == "ca");
  CHECK(ev[1].value == 0);

  UniformExecution ue = execute_uniform(q, Phase::commit);
  CHECK(hmin_view(ue, ViewKind::bob) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(hmin_view(ue, ViewKind::bob_and_c)) <= 1e-6);

  // The open phase still reveals the committed values faithfully.
  CHECK(honest_open_success(q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bob-side commitments become coherent copies on removal") {
  ProtocolIR p;
  p.name = "bob-commit";
  p.ell = 1;
  p.resources = {ResourceDecl::Kind::classical_bc, 0, 1};
  p.registers.push_back({"W", 2, Actor::bob});
  Mat h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h(0, 0) = s;
  h(0, 1) = s;
  h(1, 0) = s;
  h(1, 1) = -s;
  Round g;
  g.actor = Actor::bob;
  g.kind = RoundKind::gate;
  g.regs = {"W"};
  g.matrix = h;
  p.rounds.push_back(g);
  Round c;
  c.actor = Actor::bob;
  c.kind = RoundKind::resource_commit;
  c.regs = {"W"};
  p.rounds.push_back(c);
  Round o;
  o.actor = Actor::bob;
  o.phase = Phase::open;
  o.kind = RoundKind::resource_open;
  o.regs = {"W"};
  p.rounds.push_back(o);
  validate_protocol(p);

  // Original: the resource measures W, Bob keeps the outcome.
  ExecutionResult orig = execute_fixed(p, 0, Phase::commit);
  REQUIRE(orig.branches.size() == 2);
  CHECK(orig.branches[0].events[0].tag == "rc");
  CHECK(orig.branches[0].events[0].bob_sees);
  CHECK(total_prob(orig) == doctest::Approx(1.0).epsilon(1e-12));

  ProtocolIR q = remove_resource(p);
  REQUIRE(q.c_registers.size() == 1);
  CHECK(q.c_registers[0] == "CB0");
  bool has_cb = false;
  for (const RegisterDecl& d : q.registers)
    if (d.name == "CB0") {
      has_cb = true;
      CHECK(d.dim == 2);
      CHECK(d.owner == Actor::bob);
    }
  CHECK(has_cb);

  // Transformed: a single pure branch holding (|00> + |11>)/sqrt(2).
  ExecutionResult ex = execute_fixed(q, 0, Phase::commit);
  REQUIRE(ex.branches.size() == 1);
  DensityOperator pair = marginal(ex.branches[0].state, {"W", "CB0"});
  Mat bell(4, 4);
  bell(0, 0) = 0.5;
  bell(0, 3) = 0.5;
  bell(3, 0) = 0.5;
  bell(3, 3) = 0.5;
  CHECK(trace_distance(pair.rho, bell) <= 1e-12);

  // W stays in Bob's working view; the copy CB0 is counted only in C.
  UniformExecution ue = execute_uniform(q, Phase::commit);
  CQState bview = cq_view(ue, ViewKind::bob);
  CHECK(bview.quantum_space.has("W"));
  CHECK_FALSE(bview.quantum_space.has("CB0"));
  CQState cview = cq_view(ue, ViewKind::bob_and_c);
  CHECK(cview.quantum_space.has("CB0"));

  // Opening in the transformed protocol announces W publicly.
  ExecutionResult full = execute_fixed(q, 0, Phase::open);
  CHECK(total_prob(full) == doctest::Approx(1.0).epsilon(1e-12));
  bool saw_cl = false;
  for (const Event& e : full.branches[0].events)
    if (e.tag == "cl" && e.reg == "W") saw_cl = true;
  CHECK(saw_cl);
}

TEST_CASE("naive angle qubit matches the two-state analysis") {
  const double pi = 4.0 * std::atan(1.0);

  // theta = pi/4: the committed states overlap in |sin theta|, so their
  // trace distance is cos(theta) and hiding sits strictly between 0 and 1/2.
  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit");  // default pi/4
    UniformExecution ue = execute_uniform(p, Phase::commit);
    CQState cq = cq_view(ue, ViewKind::bob);
    REQUIRE(cq.conditionals.size() == 2);
    CHECK(trace_distance(cq.conditionals[0], cq.conditionals[1]) ==
          doctest::Approx(std::cos(pi / 4)).epsilon(1e-9));

    CQState manual;
    {
      RegisterSpace qs({{"Q", 2}});
      Mat c0(2, 2), c1(2, 2);
      c0(0, 0) = 1.0;
      double a = -std::sin(pi / 4), b = std::cos(pi / 4);
      c1(0, 0) = a * a;
      c1(0, 1) = a * b;
      c1(1, 0) = a * b;
      c1(1, 1) = b * b;
      manual = make_cq_state(1, qs, {0, 1}, {0.5, 0.5}, {c0, c1});
    }
    double via_protocol = measure_hiding(ue);
    double via_manual = dist_from_uniform(manual).value;
    CHECK(via_protocol == doctest::Approx(via_manual).epsilon(1e-7));
    CHECK(via_protocol > 0.1);
    CHECK(via_protocol < 0.5);

    CHECK(honest_open_success(p) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // theta = 0 commits |x> itself: orthogonal states, hiding exactly 1/2.
  {
    ProtocolIR p = builtin_protocol("naive_angle_qubit:0");
    UniformExecution ue = execute_uniform(p, Phase::commit);
    CHECK(measure_hiding(ue) == doctest::Approx(0.5).epsilon(1e-6));
  }

  // theta = pi/2 commits the same state for both strings: perfect hiding.
  // std::to_string would truncate theta and leave a real 1e-7 gap between
  // the two committed states, so format at full precision.
  {
    char arg[48];
    std::snprintf(arg, sizeof arg, "naive_angle_qubit:%.17g", pi / 2);
    ProtocolIR p = builtin_protocol(arg);
    UniformExecution ue = execute_uniform(p, Phase::commit);
    CHECK(measure_hiding(ue) <= 1e-7);
  }
}

TEST_CASE("sending x in the clear is half-distinguishable from uniform") {
  ProtocolIR p;
  p.name = "in-the-clear";
  p.ell = 1;
  Round r;
  r.actor = Actor::alice;
  r.kind = RoundKind::send_classical;
  r.regs = {"X"};
  p.rounds.push_back(r);
  p.reveal = {"X"};
  validate_protocol(p);

  UniformExecution ue = execute_uniform(p, Phase::commit);
  CHECK(measure_hiding(ue) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(honest_open_success(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("superdense coding hides perfectly and opens deterministically") {
  ProtocolIR p = builtin_protocol("superdense");
  CHECK(p.ell == 2);
  CHECK(p.resources.kind == ResourceDecl::Kind::qubit_bc);
  CHECK(p.resources.n_a == 1);

  CHECK(honest_open_success(p) >= 1.0 - 1e-9);

  UniformExecution ue = execute_uniform(p, Phase::commit);
  CHECK(measure_hiding(ue) <= 1e-9);
}

TEST_CASE("quantum resource removal hands the committed qubits to Bob") {
  ProtocolIR p = builtin_protocol("superdense");
  ProtocolIR q = remove_quantum_resource(p);

  CHECK(q.resources.kind == ResourceDecl::Kind::none);
  CHECK(q.removed.kind == ResourceDecl::Kind::qubit_bc);
  REQUIRE(q.c_registers.size() == 1);
  CHECK(q.c_registers[0] == "E1");

  ExecutionResult ex = execute_fixed(q, 0, Phase::commit);
  std::vector<std::string> bob = ex.owned_by(Owner::bob);
  REQUIRE(bob.size() == 2);
  CHECK(bob[0] == "E1");
  CHECK(bob[1] == "E2");
  std::vector<std::string> alice = ex.owned_by(Owner::alice);
  REQUIRE(alice.size() == 1);
  CHECK(alice[0] == "X");

  UniformExecution ue = execute_uniform(q, Phase::commit);
  CHECK(hmin_view(ue, ViewKind::bob) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(hmin_view(ue, ViewKind::bob_and_c)) <= 1e-6);

  // Bell decoding still works once the qubits sit with Bob from the start.
  CHECK(honest_open_success(q) >= 1.0 - 1e-9);
}

TEST_CASE("hashed compression leaves one bit of min-entropy given the record") {
  ProtocolIR p = builtin_protocol("hashed_compression");
  CHECK(p.ell == 3);
  CHECK(honest_open_success(p) == doctest::Approx(1.0).epsilon(1e-12));

  UniformExecution orig = execute_uniform(p, Phase::commit);
  CHECK(measure_hiding(orig) <= 1e-9);

  ProtocolIR q = remove_resource(p);
  UniformExecution ue = execute_uniform(q, Phase::commit);
  CHECK(hmin_view(ue, ViewKind::bob) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(hmin_view(ue, ViewKind::bob_and_c) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("transcript conditioning and branching conserve probability") {
  ProtocolIR p;
  p.name = "coin-and-react";
  p.ell = 1;
  p.registers.push_back({"Q", 2, Actor::alice});
  p.registers.push_back({"W", 2, Actor::bob});
  Mat h(2, 2), x(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h(0, 0) = s;
  h(0, 1) = s;
  h(1, 0) = s;
  h(1, 1) = -s;
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  Round r1;
  r1.actor = Actor::alice;
  r1.kind = RoundKind::gate;
  r1.regs = {"Q"};
  r1.matrix = h;
  p.rounds.push_back(r1);
  Round r2;
  r2.actor = Actor::alice;
  r2.kind = RoundKind::send_classical;
  r2.regs = {"Q"};
  p.rounds.push_back(r2);
  Round r3;
  r3.actor = Actor::bob;
  r3.kind = RoundKind::gate;
  r3.regs = {"W"};
  r3.matrix = x;
  r3.when = {{0, 1}};
  p.rounds.push_back(r3);
  validate_protocol(p);

  ExecutionResult ex = execute_fixed(p, 0, Phase::commit);
  REQUIRE(ex.branches.size() == 2);
  CHECK(total_prob(ex) == doctest::Approx(1.0).epsilon(1e-12));
  for (const Branch& b : ex.branches) {
    CHECK(b.prob == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(b.events.size() == 1);
    CHECK(b.events[0].tag == "cl");
    CHECK(b.events[0].dim == 2);
    // W was flipped exactly on the branch that saw outcome 1.
    int w = b.events[0].value;
    int idx = basis_index(ex.space, {0, w});
    CHECK(std::abs(b.state.amps[idx] - cx(1.0, 0.0)) <= 1e-12);
  }

  // The coin is uncorrelated with x, so Bob learns nothing (up to the
  // cutting-plane solver's generic accuracy).
  UniformExecution ue = execute_uniform(p, Phase::commit);
  CHECK(measure_hiding(ue) <= 1e-7);
}

TEST_CASE("resource removal never lowers Bob's information") {
  for (const char* spec : {"trivial:2", "hashed_compression"}) {
    ProtocolIR p = builtin_protocol(spec);
    ProtocolIR q = remove_resource(p);
    double h_orig = hmin_view(execute_uniform(p, Phase::commit), ViewKind::bob);
    double h_free = hmin_view(execute_uniform(q, Phase::commit), ViewKind::bob);
    CHECK(h_free <= h_orig + 1e-7);
  }
  {
    ProtocolIR p = builtin_protocol("superdense");
    ProtocolIR q = remove_quantum_resource(p);
    double h_orig = hmin_view(execute_uniform(p, Phase::commit), ViewKind::bob);
    double h_free = hmin_view(execute_uniform(q, Phase::commit), ViewKind::bob);
    CHECK(h_free <= h_orig + 1e-7);
  }
}

TEST_CASE("json protocols load, execute, and report precise errors") {
  const double ct = std::cos(0.6), st = std::sin(0.6);
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string text = std::string() +
      "{\n"
      "  \"name\": \"naive json\",\n"
      "  \"ell\": 1,\n"
      "  \"registers\": [{\"name\": \"Q\", \"dim\": 2, \"owner\": \"alice\"}],\n"
      "  \"rounds\": [\n"
      "    {\"actor\": \"alice\", \"type\": \"gate\", \"registers\": [\"X\", \"Q\"],\n"
      "     \"matrix\": [\n"
      "       [[1, 0], [0, 0], [0, 0], [0, 0]],\n"
      "       [[0, 0], [1, 0], [0, 0], [0, 0]],\n"
      "       [[0, 0], [0, 0], [" + num(-st) + ", 0], [" + num(ct) + ", 0]],\n"
      "       [[0, 0], [0, 0], [" + num(ct) + ", 0], [" + num(st) + ", 0]]\n"
      "     ]},\n"
      "    {\"actor\": \"alice\", \"type\": \"send_quantum\", \"registers\": [\"Q\"]},\n"
      "    {\"actor\": \"alice\", \"phase\": \"open\", \"type\": \"send_classical\",\n"
      "     \"registers\": [\"X\"]}\n"
      "  ],\n"
      "  \"reveal\": [\"X\"]\n"
      "}\n";

  ProtocolIR p = parse_protocol_json(text);
  CHECK(p.name == "naive json");
  CHECK(p.ell == 1);
  REQUIRE(p.rounds.size() == 3);
  CHECK(honest_open_success(p) == doctest::Approx(1.0).epsilon(1e-12));

  double via_json = measure_hiding(execute_uniform(p, Phase::commit));
  ProtocolIR b = builtin_protocol("naive_angle_qubit:0.6");
  double via_builtin = measure_hiding(execute_uniform(b, Phase::commit));
  CHECK(via_json == doctest::Approx(via_builtin).epsilon(1e-9));

  // Round-trip through a file.
  {
    std::ofstream out("tmp_protocol.json", std::ios::binary);
    out << text;
  }
  ProtocolIR fp = load_protocol_file("tmp_protocol.json");
  CHECK(fp.ell == 1);
  std::remove("tmp_protocol.json");
  CHECK_THROWS_AS((void)load_protocol_file("no_such_file.json"),
                  std::runtime_error);

  // Parse errors carry the line; semantic errors carry the field path.
  CHECK(contains(thrown_message(
                     [] { (void)parse_protocol_json("{\n  \"ell\": 1,\n"); }),
                 "line"));
  CHECK(contains(thrown_message([] {
          (void)parse_protocol_json(
              "{\"ell\": 1, \"rounds\": [{\"actor\": \"alice\", \"type\": "
              "\"gate\", \"registers\": [\"X\"], \"gate\": \"WAT\"}]}");
        }),
        "rounds[0].gate"));
  CHECK(contains(thrown_message([] {
          (void)parse_protocol_json("{\"rounds\": []}");
        }),
        "missing field 'ell'"));
  CHECK(contains(thrown_message([] {
          (void)parse_protocol_json(
              "{\"ell\": 1, \"rounds\": [{\"actor\": \"alice\", \"type\": "
              "\"gate\", \"registers\": [\"X\"], \"matrix\": [[[1, 0]], "
              "[[0, 0]]]}]}");
        }),
        "row"));
  CHECK(contains(thrown_message([] {
          (void)parse_protocol_json(
              "{\"ell\": 2, \"rounds\": [{\"actor\": \"alice\", \"type\": "
              "\"gate\", \"registers\": [\"X\"], \"gate\": \"H\"}]}");
        }),
        "shape"));
}
