#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsc/metrics.hpp"
#include "qsc/states.hpp"

// Two-party string-commitment protocols as executable IR.
//
// A protocol commits an ell-bit string held in the reserved register X.
// Rounds act on declared registers: unitary gates (optionally conditioned
// on earlier transcript values), classical sends (measure in the canonical
// basis, record the outcome, drop the collapsed register), quantum sends
// (ownership transfer), and resource calls against ideal bit commitments
// (classical values escrowed until opened, or whole qubits escrowed).
// Conditioning on every recorded classical value keeps each execution
// branch pure, so an execution is a list of (probability, pure state,
// event transcript) branches over one shared register layout.
//
// The resource-removal transformations produce resource-free protocols in
// which Bob additionally holds a record register C: committed classical
// values become classical messages into C (tag "ca"), Bob's own commitments
// become coherent copies |y> -> |y>|y> into fresh CB registers, and
// committed qubits are sent to Bob directly. B-views ignore C; C-views
// include it. Hiding is the distance from uniform of the X-vs-B-view CQ
// state at the end of the commit phase.

namespace qsc {

enum class Actor { alice, bob };
enum class Phase { commit, open };
enum class RoundKind {
  gate,
  send_classical,
  send_quantum,
  resource_commit,
  resource_open
};
enum class Owner { alice, bob, escrow, consumed };

struct ResourceDecl {
  enum class Kind { none, classical_bc, qubit_bc };
  Kind kind = Kind::none;
  int n_a = 0;  // bits (or qubits) committed by Alice
  int n_b = 0;  // bits committed by Bob (classical kind only)
  int total() const { return n_a + n_b; }
};

struct RegisterDecl {
  std::string name;
  int dim = 2;
  Actor owner = Actor::alice;
};

struct TranscriptCondition {
  int event = 0;  // index into the branch's event list
  int value = 0;
};

struct Round {
  Actor actor = Actor::alice;
  Phase phase = Phase::commit;
  RoundKind kind = RoundKind::gate;
  std::vector<std::string> regs;
  Mat matrix;                             // gate only
  std::vector<TranscriptCondition> when;  // gate only
  bool to_c = false;  // send_classical: message lands in Bob's record C
};

struct ProtocolIR {
  std::string name;
  int ell = 1;
  ResourceDecl resources;
  ResourceDecl removed;  // what a resource-removal transformation took out
  std::vector<RegisterDecl> registers;
  std::vector<Round> rounds;
  std::vector<std::string> reveal;  // registers spelling x at open, MSB first
  std::vector<std::string> c_registers;  // live registers counted as C
};

// Structural checks: reserved names, dimensions, phase ordering, gate
// unitarity, ownership replay, resource accounting. Throws with a message
// naming the offending round.
void validate_protocol(const ProtocolIR& p);

struct Event {
  std::string tag;  // "cl" public, "ca" into C, "rc" escrowed, "op" opened
  std::string reg;
  int dim = 2;
  int value = 0;
  bool bob_sees = false;
};

struct Branch {
  double prob = 1.0;
  PureState state;
  std::vector<Event> events;
};

struct ExecutionResult {
  ProtocolIR protocol;
  Phase upto = Phase::open;
  RegisterSpace space;  // layout shared by every branch state
  std::vector<Branch> branches;
  std::map<std::string, Owner> owners;

  std::vector<std::string> owned_by(Owner o) const;  // canonical order
};

// |x>_X (x) |0...0> over X and the declared registers.
PureState initial_state(const ProtocolIR& p, int x);

// Runs rounds up to and including the given phase. The input state must
// contain X and every declared register; extra registers ride along as
// Alice-owned ancillas (the attack keeps its purifier there).
ExecutionResult run_protocol(const ProtocolIR& p, const PureState& input,
                             Phase upto);

ExecutionResult execute_fixed(const ProtocolIR& p, int x, Phase upto);

struct UniformExecution {
  ProtocolIR protocol;
  Phase upto = Phase::commit;
  std::vector<ExecutionResult> per_x;  // index = committed string
};

UniformExecution execute_uniform(const ProtocolIR& p, Phase upto);

// bob: Bob-held registers and the transcript he sees, without the record C.
// bob_and_c: the above plus C registers and "ca" values.
// transcript_and_registers: every event and every live register.
enum class ViewKind { bob, bob_and_c, transcript_and_registers };

CQState cq_view(const UniformExecution& ue, ViewKind kind);

// dist_from_uniform of the commit-phase X-vs-B-view CQ state.
double measure_hiding(const UniformExecution& ue);

// Minimum over x of the probability that the opened values decode to x.
double honest_open_success(const ProtocolIR& p);

ProtocolIR remove_resource(const ProtocolIR& p);          // classical_bc
ProtocolIR remove_quantum_resource(const ProtocolIR& p);  // qubit_bc
ProtocolIR resource_free(const ProtocolIR& p);            // dispatch on kind

// "trivial:<ell>", "superdense[:n]", "naive_angle_qubit[:theta]",
// "hashed_compression".
ProtocolIR builtin_protocol(const std::string& spec);

// JSON protocol files; parse errors cite the line, semantic errors the
// field path.
ProtocolIR parse_protocol_json(const std::string& text);
ProtocolIR load_protocol_file(const std::string& path);

}  // namespace qsc
