#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qsc/protocol.hpp"

// JSON protocol files.
//
// {
//   "name": "...",                            optional
//   "ell": 1,
//   "resources": {"kind": "classical_bc", "n_a": 1, "n_b": 0},   optional
//   "registers": [{"name": "Q", "dim": 2, "owner": "alice"}],
//   "rounds": [
//     {"actor": "alice", "phase": "commit", "type": "gate",
//      "registers": ["X", "Q"],
//      "gate": "H" | "matrix": [[[re, im], ...], ...],
//      "when": [{"event": 0, "value": 1}]},
//     {"actor": "alice", "type": "send_classical", "registers": ["X"],
//      "to_c": false}
//   ],
//   "reveal": ["X"],
//   "c_registers": []                         optional
// }
//
// Named gates: H, X, Z, CNOT, SWAP, RY(<angle>). Matrices are row-major
// with [re, im] entries. Parse errors cite the line and column; semantic
// errors cite the field path.

namespace qsc {

namespace {

using nlohmann::json;

[[noreturn]] void jfail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("protocol json: " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) jfail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) jfail(path, std::string("missing field '") + key + "'");
  return *it;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) jfail(path, "expected an integer");
  return j.get<int>();
}

double get_num(const json& j, const std::string& path) {
  if (!j.is_number()) jfail(path, "expected a number");
  return j.get<double>();
}

std::string get_str(const json& j, const std::string& path) {
  if (!j.is_string()) jfail(path, "expected a string");
  return j.get<std::string>();
}

Actor get_actor(const json& j, const std::string& path) {
  std::string s = get_str(j, path);
  if (s == "alice") return Actor::alice;
  if (s == "bob") return Actor::bob;
  jfail(path, "expected 'alice' or 'bob', got '" + s + "'");
}

std::vector<std::string> get_names(const json& j, const std::string& path) {
  if (!j.is_array()) jfail(path, "expected an array of register names");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(get_str(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Mat named_gate(const std::string& g, const std::string& path) {
  const double s = 1.0 / std::sqrt(2.0);
  if (g == "H") {
    Mat m(2, 2);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    return m;
  }
  if (g == "X") {
    Mat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
  }
  if (g == "Z") {
    Mat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
  }
  if (g == "CNOT") {
    Mat m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
  }
  if (g == "SWAP") {
    Mat m(4, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = 1.0;
    return m;
  }
  if (g.rfind("RY(", 0) == 0 && g.back() == ')') {
    std::string inner = g.substr(3, g.size() - 4);
    double th = 0.0;
    try {
      size_t used = 0;
      th = std::stod(inner, &used);
      if (used != inner.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      jfail(path, "bad rotation angle '" + inner + "'");
    }
    Mat m(2, 2);
    m(0, 0) = std::cos(th);
    m(0, 1) = -std::sin(th);
    m(1, 0) = std::sin(th);
    m(1, 1) = std::cos(th);
    return m;
  }
  jfail(path, "unknown gate '" + g +
                  "' (known: H, X, Z, CNOT, SWAP, RY(<angle>))");
}

Mat matrix_gate(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) jfail(path, "expected a non-empty array of rows");
  int n = static_cast<int>(j.size());
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      jfail(rp, "expected a row of " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const json& e = row[c];
      std::string ep = rp + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2)
        jfail(ep, "expected an [re, im] pair");
      m(r, c) = cx(get_num(e[0], ep), get_num(e[1], ep));
    }
  }
  return m;
}

Round parse_round(const json& j, const std::string& path) {
  Round r;
  r.actor = get_actor(need(j, "actor", path), path + ".actor");
  if (j.contains("phase")) {
    std::string ph = get_str(j["phase"], path + ".phase");
    if (ph == "commit")
      r.phase = Phase::commit;
    else if (ph == "open")
      r.phase = Phase::open;
    else
      jfail(path + ".phase", "expected 'commit' or 'open', got '" + ph + "'");
  }
  std::string type = get_str(need(j, "type", path), path + ".type");
  if (type == "gate")
    r.kind = RoundKind::gate;
  else if (type == "send_classical")
    r.kind = RoundKind::send_classical;
  else if (type == "send_quantum")
    r.kind = RoundKind::send_quantum;
  else if (type == "resource_commit")
    r.kind = RoundKind::resource_commit;
  else if (type == "resource_open")
    r.kind = RoundKind::resource_open;
  else
    jfail(path + ".type", "unknown round type '" + type + "'");
  r.regs = get_names(need(j, "registers", path), path + ".registers");

  if (r.kind == RoundKind::gate) {
    bool has_g = j.contains("gate"), has_m = j.contains("matrix");
    if (has_g == has_m)
      jfail(path, "a gate round needs exactly one of 'gate' or 'matrix'");
    if (has_g)
      r.matrix = named_gate(get_str(j["gate"], path + ".gate"), path + ".gate");
    else
      r.matrix = matrix_gate(j["matrix"], path + ".matrix");
    if (j.contains("when")) {
      const json& w = j["when"];
      std::string wp = path + ".when";
      if (!w.is_array()) jfail(wp, "expected an array of conditions");
      for (size_t k = 0; k < w.size(); ++k) {
        std::string kp = wp + "[" + std::to_string(k) + "]";
        TranscriptCondition c;
        c.event = get_int(need(w[k], "event", kp), kp + ".event");
        c.value = get_int(need(w[k], "value", kp), kp + ".value");
        r.when.push_back(c);
      }
    }
  } else if (j.contains("gate") || j.contains("matrix") || j.contains("when")) {
    jfail(path, "'gate', 'matrix' and 'when' apply to gate rounds only");
  }
  if (j.contains("to_c")) {
    const json& t = j["to_c"];
    if (!t.is_boolean()) jfail(path + ".to_c", "expected a boolean");
    r.to_c = t.get<bool>();
  }
  return r;
}

}  // namespace

ProtocolIR parse_protocol_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument("protocol json: line " + std::to_string(line) +
                                ", column " + std::to_string(col) + ": " +
                                e.what());
  }
  if (!j.is_object()) jfail("$", "top level must be an object");

  ProtocolIR p;
  if (j.contains("name")) p.name = get_str(j["name"], "name");
  p.ell = get_int(need(j, "ell", "$"), "ell");

  if (j.contains("resources")) {
    const json& r = j["resources"];
    std::string kind = get_str(need(r, "kind", "resources"), "resources.kind");
    if (kind == "none")
      p.resources.kind = ResourceDecl::Kind::none;
    else if (kind == "classical_bc")
      p.resources.kind = ResourceDecl::Kind::classical_bc;
    else if (kind == "qubit_bc")
      p.resources.kind = ResourceDecl::Kind::qubit_bc;
    else
      jfail("resources.kind", "unknown kind '" + kind + "'");
    if (r.contains("n_a")) p.resources.n_a = get_int(r["n_a"], "resources.n_a");
    if (r.contains("n_b")) p.resources.n_b = get_int(r["n_b"], "resources.n_b");
  }

  if (j.contains("registers")) {
    const json& regs = j["registers"];
    if (!regs.is_array()) jfail("registers", "expected an array");
    for (size_t i = 0; i < regs.size(); ++i) {
      std::string rp = "registers[" + std::to_string(i) + "]";
      RegisterDecl d;
      d.name = get_str(need(regs[i], "name", rp), rp + ".name");
      d.dim = get_int(need(regs[i], "dim", rp), rp + ".dim");
      d.owner = get_actor(need(regs[i], "owner", rp), rp + ".owner");
      p.registers.push_back(std::move(d));
    }
  }

  const json& rounds = need(j, "rounds", "$");
  if (!rounds.is_array()) jfail("rounds", "expected an array");
  for (size_t i = 0; i < rounds.size(); ++i)
    p.rounds.push_back(
        parse_round(rounds[i], "rounds[" + std::to_string(i) + "]"));

  if (j.contains("reveal")) p.reveal = get_names(j["reveal"], "reveal");
  if (j.contains("c_registers"))
    p.c_registers = get_names(j["c_registers"], "c_registers");

  validate_protocol(p);
  return p;
}

ProtocolIR load_protocol_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("protocol json: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_protocol_json(buf.str());
}

}  // namespace qsc
