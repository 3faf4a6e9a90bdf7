#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsc/protocol.hpp"

// Built-in protocols.
//
//   trivial:<ell>        commit every bit of x through the classical resource
//   superdense[:n]       Bob shares n EPR pairs, Alice dense-codes 2n bits
//                        into her halves and commits them to the qubit
//                        resource; x = (Z-bit block)(X-bit block), MSB first
//   naive_angle_qubit[:theta]
//                        one qubit |0> or R(theta)|1> sent to Bob, x announced
//                        at open; no resource
//   hashed_compression   commit only g(x) = x >> 1 (two bits) for a 3-bit x
//                        through the classical resource, announce x at open

namespace qsc {

namespace {

Mat perm_gate(int d, const std::vector<int>& image) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) m(image[i], i) = 1.0;
  return m;
}

Mat gate_h_pow(int n) {
  Mat h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h(0, 0) = s;
  h(0, 1) = s;
  h(1, 0) = s;
  h(1, 1) = -s;
  Mat out = h;
  for (int i = 1; i < n; ++i) out = kron(out, h);
  return out;
}

// |e, f> -> |e, f xor e> on two same-sized registers: pairwise CNOTs with
// every control in the first register.
Mat xor_gate(int d) {
  std::vector<int> image(d * d);
  for (int e = 0; e < d; ++e)
    for (int f = 0; f < d; ++f) image[e * d + f] = e * d + (f ^ e);
  return perm_gate(d * d, image);
}

// |x, c> -> |x, c xor bit_k(x)> where bit 0 is the most significant of ell.
Mat copy_bit_gate(int ell, int k) {
  int dx = 1 << ell;
  std::vector<int> image(dx * 2);
  for (int x = 0; x < dx; ++x) {
    int bit = (x >> (ell - 1 - k)) & 1;
    for (int c = 0; c < 2; ++c) image[x * 2 + c] = x * 2 + (c ^ bit);
  }
  return perm_gate(dx * 2, image);
}

// |x, c> -> |x, c xor (x >> 1)> for 3-bit x and 2-bit c.
Mat compress_gate() {
  std::vector<int> image(8 * 4);
  for (int x = 0; x < 8; ++x)
    for (int c = 0; c < 4; ++c) image[x * 4 + c] = x * 4 + (c ^ (x >> 1));
  return perm_gate(8 * 4, image);
}

// sum_x |x><x| (x) P_x on (X, E1) where P_x applies Z^{z_i} X^{x_i} to qubit
// i of E1, x = (z_0 .. z_{n-1} x_0 .. x_{n-1}) MSB first.
Mat dense_code_gate(int n) {
  int dx = 1 << (2 * n), de = 1 << n, d = dx * de;
  Mat m(d, d);
  for (int x = 0; x < dx; ++x) {
    for (int e = 0; e < de; ++e) {
      int out = 0;
      double sign = 1.0;
      for (int i = 0; i < n; ++i) {
        int zi = (x >> (2 * n - 1 - i)) & 1;
        int xi = (x >> (n - 1 - i)) & 1;
        int ei = (e >> (n - 1 - i)) & 1;
        int fo = ei ^ xi;
        if (zi && fo) sign = -sign;
        out = out * 2 + fo;
      }
      m(x * de + out, x * de + e) = sign;
    }
  }
  return m;
}

Round gate_round(Actor a, Phase ph, std::vector<std::string> regs, Mat m) {
  Round r;
  r.actor = a;
  r.phase = ph;
  r.kind = RoundKind::gate;
  r.regs = std::move(regs);
  r.matrix = std::move(m);
  return r;
}

Round simple_round(Actor a, Phase ph, RoundKind k,
                   std::vector<std::string> regs) {
  Round r;
  r.actor = a;
  r.phase = ph;
  r.kind = k;
  r.regs = std::move(regs);
  return r;
}

ProtocolIR make_trivial(int ell) {
  if (ell < 1 || ell > 5)
    throw std::invalid_argument("builtin trivial: ell must be in [1, 5]");
  ProtocolIR p;
  p.name = "trivial:" + std::to_string(ell);
  p.ell = ell;
  p.resources = {ResourceDecl::Kind::classical_bc, ell, 0};
  std::vector<std::string> bits;
  for (int k = 0; k < ell; ++k) {
    std::string rn = "R" + std::to_string(k);
    p.registers.push_back({rn, 2, Actor::alice});
    bits.push_back(rn);
  }
  for (int k = 0; k < ell; ++k)
    p.rounds.push_back(gate_round(Actor::alice, Phase::commit, {"X", bits[k]},
                                  copy_bit_gate(ell, k)));
  p.rounds.push_back(
      simple_round(Actor::alice, Phase::commit, RoundKind::resource_commit,
                   bits));
  p.rounds.push_back(
      simple_round(Actor::alice, Phase::open, RoundKind::resource_open, bits));
  p.reveal = bits;
  return p;
}

ProtocolIR make_superdense(int n) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("builtin superdense: n must be in [1, 2]");
  ProtocolIR p;
  p.name = "superdense:" + std::to_string(n);
  p.ell = 2 * n;
  p.resources = {ResourceDecl::Kind::qubit_bc, n, 0};
  int de = 1 << n;
  p.registers.push_back({"E1", de, Actor::bob});
  p.registers.push_back({"E2", de, Actor::bob});
  p.rounds.push_back(
      gate_round(Actor::bob, Phase::commit, {"E1"}, gate_h_pow(n)));
  p.rounds.push_back(
      gate_round(Actor::bob, Phase::commit, {"E1", "E2"}, xor_gate(de)));
  p.rounds.push_back(simple_round(Actor::bob, Phase::commit,
                                  RoundKind::send_quantum, {"E1"}));
  p.rounds.push_back(
      gate_round(Actor::alice, Phase::commit, {"X", "E1"}, dense_code_gate(n)));
  p.rounds.push_back(simple_round(Actor::alice, Phase::commit,
                                  RoundKind::resource_commit, {"E1"}));
  p.rounds.push_back(simple_round(Actor::alice, Phase::open,
                                  RoundKind::resource_open, {"E1"}));
  p.rounds.push_back(
      gate_round(Actor::bob, Phase::open, {"E1", "E2"}, xor_gate(de)));
  p.rounds.push_back(gate_round(Actor::bob, Phase::open, {"E1"}, gate_h_pow(n)));
  p.rounds.push_back(simple_round(Actor::bob, Phase::open,
                                  RoundKind::send_classical, {"E1"}));
  p.rounds.push_back(simple_round(Actor::bob, Phase::open,
                                  RoundKind::send_classical, {"E2"}));
  p.reveal = {"E1", "E2"};
  return p;
}

ProtocolIR make_naive_angle(double theta) {
  ProtocolIR p;
  p.name = "naive_angle_qubit:" + std::to_string(theta);
  p.ell = 1;
  p.registers.push_back({"Q", 2, Actor::alice});
  Mat m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  // R(theta) X block: columns are R(theta)|1>, R(theta)|0>
  m(2, 2) = -std::sin(theta);
  m(3, 2) = std::cos(theta);
  m(2, 3) = std::cos(theta);
  m(3, 3) = std::sin(theta);
  p.rounds.push_back(gate_round(Actor::alice, Phase::commit, {"X", "Q"}, m));
  p.rounds.push_back(simple_round(Actor::alice, Phase::commit,
                                  RoundKind::send_quantum, {"Q"}));
  p.rounds.push_back(simple_round(Actor::alice, Phase::open,
                                  RoundKind::send_classical, {"X"}));
  p.reveal = {"X"};
  return p;
}

ProtocolIR make_hashed_compression() {
  ProtocolIR p;
  p.name = "hashed_compression";
  p.ell = 3;
  p.resources = {ResourceDecl::Kind::classical_bc, 2, 0};
  p.registers.push_back({"G", 4, Actor::alice});
  p.rounds.push_back(
      gate_round(Actor::alice, Phase::commit, {"X", "G"}, compress_gate()));
  p.rounds.push_back(simple_round(Actor::alice, Phase::commit,
                                  RoundKind::resource_commit, {"G"}));
  p.rounds.push_back(simple_round(Actor::alice, Phase::open,
                                  RoundKind::send_classical, {"X"}));
  p.rounds.push_back(simple_round(Actor::alice, Phase::open,
                                  RoundKind::resource_open, {"G"}));
  p.reveal = {"X"};
  return p;
}

}  // namespace

ProtocolIR builtin_protocol(const std::string& spec) {
  std::string name = spec, arg;
  if (auto pos = spec.find(':'); pos != std::string::npos) {
    name = spec.substr(0, pos);
    arg = spec.substr(pos + 1);
  }
  auto int_arg = [&](int fallback, bool required) {
    if (arg.empty()) {
      if (required)
        throw std::invalid_argument("builtin " + name +
                                    ": a parameter is required, e.g. '" + name +
                                    ":2'");
      return fallback;
    }
    try {
      size_t used = 0;
      int v = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("builtin " + name + ": bad parameter '" +
                                  arg + "'");
    }
  };
  ProtocolIR p;
  if (name == "trivial") {
    p = make_trivial(int_arg(0, true));
  } else if (name == "superdense") {
    p = make_superdense(int_arg(1, false));
  } else if (name == "naive_angle_qubit") {
    double theta = std::atan(1.0);  // pi/4
    if (!arg.empty()) {
      try {
        size_t used = 0;
        theta = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw std::invalid_argument("builtin naive_angle_qubit: bad angle '" +
                                    arg + "'");
      }
    }
    p = make_naive_angle(theta);
  } else if (name == "hashed_compression") {
    if (!arg.empty())
      throw std::invalid_argument(
          "builtin hashed_compression takes no parameter");
    p = make_hashed_compression();
  } else {
    throw std::invalid_argument(
        "unknown builtin '" + name +
        "' (try trivial:<ell>, superdense[:n], naive_angle_qubit[:theta], "
        "hashed_compression)");
  }
  validate_protocol(p);
  return p;
}

}  // namespace qsc
