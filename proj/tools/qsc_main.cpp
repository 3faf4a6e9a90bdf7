#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsc/attack.hpp"
#include "qsc/bounds.hpp"
#include "qsc/eig.hpp"
#include "qsc/entropy.hpp"
#include "qsc/policy.hpp"
#include "qsc/suites.hpp"

// Front end for the commitment laboratory.
//
//   attack        synthesize the generic attack and report its certificate
//   verify-bound  attack + entropy gap + length bound for one protocol
//   lemma-suite   seeded property suites behind the analysis
//   entropy       min-entropy of a density matrix from a JSON state file
//
// Exit codes: 0 success, 1 input error, 2 a checked inequality failed,
// 3 a solver did not converge. json and csv output is byte-deterministic
// for a fixed command line; wall-clock timings appear only in text mode.

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kTheoremViolation = 2;
constexpr int kNoConvergence = 3;

struct Options {
  std::string protocol_file;
  std::string builtin_spec;
  std::string state_file;
  std::string format = "text";
  std::uint64_t seed = 42;
  double tol = 1e-7;
  int jobs = 1;
};

qsc::ProtocolIR load_target(const Options& o) {
  if (o.protocol_file.empty() == o.builtin_spec.empty())
    throw std::invalid_argument(
        "pass exactly one of --protocol <file> or --builtin <spec>");
  if (!o.protocol_file.empty())
    return qsc::load_protocol_file(o.protocol_file);
  return qsc::builtin_protocol(o.builtin_spec);
}

const char* kind_name(qsc::ResourceDecl::Kind k) {
  switch (k) {
    case qsc::ResourceDecl::Kind::none: return "none";
    case qsc::ResourceDecl::Kind::classical_bc: return "classical_bc";
    case qsc::ResourceDecl::Kind::qubit_bc: return "qubit_bc";
  }
  return "none";
}

ojson protocol_doc(const qsc::ProtocolIR& p) {
  ojson r;
  r["name"] = p.name;
  r["ell"] = p.ell;
  r["resource"]["kind"] = kind_name(p.resources.kind);
  r["resource"]["n_a"] = p.resources.n_a;
  r["resource"]["n_b"] = p.resources.n_b;
  return r;
}

ojson chain_doc(const qsc::AttackCertificate& cert) {
  ojson c;
  c["eps"] = cert.measured_eps;
  c["eps_tilde"] = cert.eps_tilde;
  c["hmin_xbc"] = cert.hmin_xbc;
  c["delta"] = cert.delta;
  c["delta_bound"] = cert.delta_bound;
  c["achieved_distance"] = cert.achieved_distance;
  c["implied_binding"] = cert.implied_binding;
  return c;
}

ojson hash_doc(const qsc::AttackCertificate& cert) {
  ojson h;
  h["z"] = cert.z;
  h["table"] = ojson::array();
  for (std::uint8_t v : cert.f.table) h["table"].push_back(static_cast<int>(v));
  h["distance"] = cert.hash_distance;
  h["searched"] = cert.hashes_searched;
  return h;
}

ojson branches_doc(const qsc::ConditionedAttack& a) {
  ojson arr = ojson::array();
  for (const qsc::BranchAttack& b : a.branches) {
    ojson e;
    e["key"] = b.key;
    e["p0"] = b.p0;
    e["p1"] = b.p1;
    e["overlap"] = b.overlap;
    arr.push_back(std::move(e));
  }
  return arr;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_flatten(const ojson& j, const std::string& prefix,
                 std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& item : j.items())
      csv_flatten(item.value(),
                  prefix.empty() ? item.key() : prefix + "." + item.key(),
                  rows);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j)
      csv_flatten(v, prefix + "[" + std::to_string(i++) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

void emit_json(const ojson& doc) { std::printf("%s\n", doc.dump(2).c_str()); }

void emit_csv(const ojson& doc) {
  std::vector<std::pair<std::string, std::string>> rows;
  csv_flatten(doc, "", rows);
  std::printf("quantity,value\n");
  for (const auto& [k, v] : rows)
    std::printf("%s,%s\n", csv_escape(k).c_str(), csv_escape(v).c_str());
}

void text_protocol_line(const qsc::ProtocolIR& p) {
  std::printf("protocol %s  (ell = %d, resource = %s", p.name.c_str(), p.ell,
              kind_name(p.resources.kind));
  if (p.resources.kind != qsc::ResourceDecl::Kind::none)
    std::printf(", n_a = %d, n_b = %d", p.resources.n_a, p.resources.n_b);
  std::printf(")\n");
}

void text_chain(const qsc::AttackCertificate& cert) {
  std::printf("  hiding                        eps = %.12g\n",
              cert.measured_eps);
  std::printf("  sqrt(2 eps)                  eps~ = %.12g\n", cert.eps_tilde);
  std::printf("  min-entropy            Hmin(X|BC) = %.12g\n", cert.hmin_xbc);
  std::printf("  best balanced hash split distance = %.12g  (%d searched)\n",
              cert.hash_distance, cert.hashes_searched);
  std::printf("  delta = eps~ + sqrt(2^(1-Hmin))/2 = %.12g\n", cert.delta);
  std::printf("  guarantee           2 sqrt(delta) = %.12g\n",
              cert.delta_bound);
  std::printf("  achieved distance                 = %.12g\n",
              cert.achieved_distance);
  std::printf("  implied binding break            >= %.12g\n",
              cert.implied_binding);
}

int cmd_attack(const Options& o) {
  qsc::ProtocolIR p = load_target(o);
  qsc::AttackCertificate cert = qsc::synthesize_attack(p);
  bool respected = cert.achieved_distance <= cert.delta_bound + o.tol;

  ojson doc;
  doc["command"] = "attack";
  doc["protocol"] = protocol_doc(p);
  doc["tolerance"] = o.tol;
  doc["chain"] = chain_doc(cert);
  doc["hash"] = hash_doc(cert);
  doc["branches"] = branches_doc(cert.attack);
  doc["bound_respected"] = respected;

  if (o.format == "json") {
    emit_json(doc);
  } else if (o.format == "csv") {
    emit_csv(doc);
  } else {
    text_protocol_line(p);
    text_chain(cert);
    std::printf("bound respected (achieved <= guarantee + %g): %s\n", o.tol,
                respected ? "yes" : "NO");
  }
  return respected ? kOk : kTheoremViolation;
}

int cmd_verify_bound(const Options& o) {
  qsc::ProtocolIR p = load_target(o);

  qsc::ProtocolIR free_p = qsc::resource_free(p);
  qsc::UniformExecution ue =
      qsc::execute_uniform(free_p, qsc::Phase::commit);
  qsc::UniformDistanceResult hiding =
      qsc::dist_from_uniform(qsc::cq_view(ue, qsc::ViewKind::bob));
  qsc::CQState xbc = qsc::cq_view(ue, qsc::ViewKind::bob_and_c);
  qsc::MinEntropyResult me =
      qsc::min_entropy(qsc::cq_joint(xbc), xbc.quantum_space.names());

  qsc::AttackCertificate cert = qsc::synthesize_attack(p);
  qsc::EntropyGapReport gap = qsc::entropy_gap_check(p);
  double delta_lower = std::max(0.0, cert.implied_binding);

  bool applicable = p.resources.kind != qsc::ResourceDecl::Kind::none;
  qsc::BoundReport bound;
  if (applicable) {
    if (p.resources.kind == qsc::ResourceDecl::Kind::classical_bc)
      bound = qsc::classical_bound(p.resources.total(), p.ell,
                                   cert.measured_eps, delta_lower);
    else
      bound = qsc::quantum_bound(p.resources.n_a, p.ell, cert.measured_eps,
                                 delta_lower);
  }

  bool attack_ok = cert.achieved_distance <= cert.delta_bound + o.tol;
  bool ok = attack_ok && gap.holds && (!applicable || bound.satisfied);

  ojson doc;
  doc["command"] = "verify-bound";
  doc["protocol"] = protocol_doc(p);
  doc["tolerance"] = o.tol;
  doc["solvers"]["hiding_converged"] = hiding.converged;
  doc["solvers"]["min_entropy_converged"] = me.converged;
  doc["chain"] = chain_doc(cert);
  doc["entropy_gap"]["kind"] = gap.kind;
  doc["entropy_gap"]["hmin_b"] = gap.hmin_b;
  doc["entropy_gap"]["hmin_bc"] = gap.hmin_bc;
  doc["entropy_gap"]["capacity"] = gap.capacity;
  doc["entropy_gap"]["slack"] = gap.slack;
  doc["entropy_gap"]["holds"] = gap.holds;
  doc["bound"]["applicable"] = applicable;
  if (applicable) {
    doc["bound"]["kind"] = bound.kind;
    doc["bound"]["n"] = bound.n;
    doc["bound"]["ell"] = bound.ell;
    doc["bound"]["epsilon"] = bound.epsilon;
    doc["bound"]["delta"] = bound.delta;
    doc["bound"]["argument"] = bound.argument;
    doc["bound"]["argument_valid"] = bound.argument_valid;
    doc["bound"]["rhs"] = bound.rhs;      // infinity serializes as null
    doc["bound"]["margin"] = bound.margin;
    doc["bound"]["satisfied"] = bound.satisfied;
  }
  doc["verdict"] = ok ? "ok" : "violated";

  if (o.format == "json") {
    emit_json(doc);
  } else if (o.format == "csv") {
    emit_csv(doc);
  } else {
    text_protocol_line(p);
    text_chain(cert);
    std::printf(
        "entropy gap [%s]: Hmin(X|BC) = %.9g >= Hmin(X|B) - capacity = %.9g - "
        "%.9g   slack = %.3g (%s)\n",
        gap.kind.c_str(), gap.hmin_bc, gap.hmin_b, gap.capacity, gap.slack,
        gap.holds ? "holds" : "VIOLATED");
    if (!applicable) {
      std::printf("length bound: not applicable (no resource consumed)\n");
    } else if (!bound.argument_valid) {
      std::printf(
          "length bound [%s]: vacuous, argument %.6g <= 0 constrains "
          "nothing\n",
          bound.kind.c_str(), bound.argument);
    } else {
      std::printf(
          "length bound [%s]: ell = %d <= rhs = %.9g   margin = %.9g (%s)\n",
          bound.kind.c_str(), bound.ell, bound.rhs, bound.margin,
          bound.satisfied ? "satisfied" : "VIOLATED");
    }
    std::printf("verdict: %s\n", ok ? "ok" : "violated");
  }
  if (!hiding.converged || !me.converged) return kNoConvergence;
  return ok ? kOk : kTheoremViolation;
}

int cmd_lemma_suite(const Options& o) {
  qsc::SuiteReport rep = qsc::run_lemma_suite(o.seed, o.jobs);

  ojson doc;
  doc["command"] = "lemma-suite";
  doc["seed"] = rep.seed;
  doc["checks"] = ojson::array();
  for (const qsc::SuiteCheck& c : rep.checks) {
    ojson e;
    e["name"] = c.name;
    e["trials"] = c.trials;
    e["worst"] = c.worst;
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    doc["checks"].push_back(std::move(e));
  }
  doc["all_passed"] = rep.all_passed();

  if (o.format == "json") {
    emit_json(doc);
  } else if (o.format == "csv") {
    std::printf("name,trials,worst,tolerance,passed\n");
    for (const qsc::SuiteCheck& c : rep.checks)
      std::printf("%s,%d,%s,%s,%s\n", c.name.c_str(), c.trials,
                  ojson(c.worst).dump().c_str(),
                  ojson(c.tolerance).dump().c_str(),
                  c.passed ? "true" : "false");
  } else {
    std::printf("lemma suite, seed %llu, %d job(s)\n",
                static_cast<unsigned long long>(rep.seed), o.jobs);
    for (const qsc::SuiteCheck& c : rep.checks)
      std::printf("  %-22s %4d trials  worst %.3e  tol %.0e  %s  (%.0f ms)\n",
                  c.name.c_str(), c.trials, c.worst, c.tolerance,
                  c.passed ? "pass" : "FAIL", c.millis);
    std::printf("%s\n", rep.all_passed() ? "all checks passed"
                                         : "SOME CHECKS FAILED");
  }
  return rep.all_passed() ? kOk : kTheoremViolation;
}

struct StateFile {
  qsc::RegisterSpace space;
  std::vector<std::string> condition_on;
  qsc::Mat rho;
};

StateFile parse_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  ojson j;
  try {
    j = ojson::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("state file: " + std::string(e.what()));
  }
  if (!j.is_object()) throw std::runtime_error("state file: object expected");
  if (!j.contains("registers") || !j["registers"].is_array() ||
      j["registers"].empty())
    throw std::runtime_error(
        "state file: nonempty 'registers' array required before 'data'");

  std::vector<qsc::Register> regs;
  std::vector<std::string> names;
  for (const auto& r : j["registers"]) {
    if (!r.is_object() || !r.contains("name") || !r.contains("dim") ||
        !r["name"].is_string() || !r["dim"].is_number_integer())
      throw std::runtime_error(
          "state file: each register needs a name and an integer dim");
    regs.push_back({r["name"].get<std::string>(), r["dim"].get<int>()});
    names.push_back(regs.back().name);
  }
  qsc::RegisterSpace sp(regs, qsc::policy().internal_dimension_cap);
  const int d = sp.total_dim();

  std::vector<std::string> cond;
  if (j.contains("condition_on")) {
    if (!j["condition_on"].is_array())
      throw std::runtime_error("state file: condition_on must be an array");
    for (const auto& n : j["condition_on"]) {
      if (!n.is_string())
        throw std::runtime_error("state file: condition_on entries are names");
      cond.push_back(n.get<std::string>());
    }
  } else {
    cond.assign(names.begin() + 1, names.end());
  }

  if (!j.contains("data") || !j["data"].is_array() ||
      static_cast<int>(j["data"].size()) != d)
    throw std::runtime_error("state file: 'data' must be a " +
                             std::to_string(d) + "x" + std::to_string(d) +
                             " matrix of [re, im] pairs");
  qsc::Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = j["data"][static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw std::runtime_error("state file: data row " + std::to_string(i) +
                               " must have " + std::to_string(d) + " entries");
    for (int k = 0; k < d; ++k) {
      const auto& e = row[static_cast<size_t>(k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw std::runtime_error("state file: data[" + std::to_string(i) +
                                 "][" + std::to_string(k) +
                                 "] must be an [re, im] pair");
      m(i, k) = qsc::cx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return {std::move(sp), std::move(cond), std::move(m)};
}

int cmd_entropy(const Options& o) {
  StateFile st = parse_state_file(o.state_file);

  const double herm_defect = qsc::max_abs(qsc::sub(st.rho, qsc::adjoint(st.rho)));
  if (herm_defect > 1e-9)
    throw std::invalid_argument("state is not Hermitian (defect " +
                                std::to_string(herm_defect) + ")");
  std::vector<double> evals = qsc::eigvals_hermitian(qsc::hermitize(st.rho));
  const double scale = std::max(1.0, std::abs(evals.front()));
  if (evals.back() < -1e-9 * scale) {
    ojson doc;
    doc["command"] = "entropy";
    doc["error"] = "state is not positive semidefinite";
    doc["eigenvalues"] = evals;
    if (o.format == "json") {
      emit_json(doc);
    } else if (o.format == "csv") {
      emit_csv(doc);
    } else {
      std::printf("state is not positive semidefinite; eigenvalues:\n");
      for (double v : evals) std::printf("  %.12g\n", v);
    }
    return kInputError;
  }
  const double tr = qsc::trace(st.rho).real();
  if (!(tr > 0.0) || tr > 1.0 + 1e-9)
    throw std::invalid_argument("state trace " + std::to_string(tr) +
                                " is outside (0, 1]");

  qsc::DensityOperator rho = qsc::DensityOperator::make(st.space, st.rho);
  qsc::MinEntropyResult res = qsc::min_entropy(rho, st.condition_on);

  ojson doc;
  doc["command"] = "entropy";
  doc["condition_on"] = st.condition_on;
  doc["trace"] = tr;
  doc["hmin"] = res.lambda;
  doc["iterations"] = res.iterations;
  doc["feasibility_gap"] = res.feasibility_gap;
  doc["converged"] = res.converged;

  if (o.format == "json") {
    emit_json(doc);
  } else if (o.format == "csv") {
    emit_csv(doc);
  } else {
    std::printf("Hmin(rest | ");
    for (size_t i = 0; i < st.condition_on.size(); ++i)
      std::printf("%s%s", i ? ", " : "", st.condition_on[i].c_str());
    std::printf(") = %.12g bits  (trace %.9g, %d iterations, %s)\n",
                res.lambda, tr, res.iterations,
                res.converged ? "converged" : "NOT CONVERGED");
  }
  return res.converged ? kOk : kNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toy string-commitment laboratory"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* s, bool takes_protocol) {
    s->add_option("--format", opt.format, "text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    s->add_option("--tol", opt.tol,
                  "slack allowed when comparing against guarantees");
    s->add_option("--seed", opt.seed, "seed for the randomized suites");
    s->add_option("--jobs", opt.jobs, "worker threads for the suites")
        ->check(CLI::PositiveNumber);
    if (takes_protocol) {
      s->add_option("--protocol", opt.protocol_file, "protocol JSON file");
      s->add_option("--builtin", opt.builtin_spec,
                    "builtin spec: trivial:<ell>, superdense[:n], "
                    "naive_angle_qubit[:theta], hashed_compression");
    }
  };

  CLI::App* attack =
      app.add_subcommand("attack", "synthesize the generic attack");
  add_common(attack, true);
  CLI::App* verify = app.add_subcommand(
      "verify-bound", "attack, entropy gap, and length bound");
  add_common(verify, true);
  CLI::App* suite =
      app.add_subcommand("lemma-suite", "seeded property suites");
  add_common(suite, false);
  CLI::App* entropy =
      app.add_subcommand("entropy", "min-entropy of a JSON state file");
  add_common(entropy, false);
  entropy->add_option("state", opt.state_file, "state JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (attack->parsed()) return cmd_attack(opt);
    if (verify->parsed()) return cmd_verify_bound(opt);
    if (suite->parsed()) return cmd_lemma_suite(opt);
    return cmd_entropy(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
}
