#pragma once

#include "tcq/classify.hpp"
#include "tcq/tcp.hpp"
#include "tcq/tensor.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

// JSON tensor documents and result serialization. The document format is
//   {"kind":"dense","order":m,"dim":n,"entries":[...]}   (row-major, first
//   index slowest) or
//   {"kind":"decomp","order":m,"dim":n,"terms":[{"mu":r,"w":[...]},...]}.
// nlohmann's default object keeps keys sorted, so output is stable-ordered.

namespace tcq {

inline Vector parse_vector(const json& j) {
  if (!j.is_array()) throw std::runtime_error("expected a JSON array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::runtime_error("expected a number in array");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

inline TensorDoc parse_tensor_doc(const json& j) {
  if (!j.is_object()) throw std::runtime_error("tensor document must be an object");
  const std::string kind = j.value("kind", "");
  if (!j.contains("order") || !j["order"].is_number_integer())
    throw std::runtime_error("tensor document needs an integer \"order\"");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw std::runtime_error("tensor document needs an integer \"dim\"");
  const int m = j["order"].get<int>();
  const int n = j["dim"].get<int>();
  if (m < 2) throw std::runtime_error("order must be >= 2");
  if (n < 1) throw std::runtime_error("dim must be >= 1");

  if (kind == "dense") {
    if (!j.contains("entries"))
      throw std::runtime_error("dense tensor document needs \"entries\"");
    DenseTensor A(m, n);
    const Vector e = parse_vector(j["entries"]);
    if (e.size() != A.entries.size())
      throw std::runtime_error("entries length must be dim^order");
    A.entries = e;
    if (!A.all_finite()) throw std::runtime_error("entries must be finite");
    return A;
  }
  if (kind == "decomp") {
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
      throw std::runtime_error("decomp tensor document needs nonempty \"terms\"");
    SymOuterDecomp D;
    D.order = m;
    D.dim = n;
    for (const auto& t : j["terms"]) {
      if (!t.is_object() || !t.contains("mu") || !t.contains("w"))
        throw std::runtime_error("each term needs \"mu\" and \"w\"");
      SymOuterDecomp::Term term;
      term.mu = t["mu"].get<double>();
      term.w = parse_vector(t["w"]);
      if (term.w.size() != n) throw std::runtime_error("generator length must be dim");
      D.terms.push_back(std::move(term));
    }
    try {
      D.validate();
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(e.what());
    }
    return D;
  }
  throw std::runtime_error("\"kind\" must be \"dense\" or \"decomp\"");
}

inline json tensor_to_json(const TensorDoc& T) {
  json j;
  if (const auto* A = std::get_if<DenseTensor>(&T)) {
    j["kind"] = "dense";
    j["order"] = A->order;
    j["dim"] = A->dim;
    j["entries"] = detail::vec_to_json(A->entries);
  } else {
    const auto& D = std::get<SymOuterDecomp>(T);
    j["kind"] = "decomp";
    j["order"] = D.order;
    j["dim"] = D.dim;
    j["terms"] = json::array();
    for (const auto& t : D.terms)
      j["terms"].push_back({{"mu", t.mu}, {"w", detail::vec_to_json(t.w)}});
  }
  return j;
}

inline json solution_to_json(const TcpSolution& s) {
  json sup = json::array();
  for (int i : s.support) sup.push_back(i + 1);
  return {{"u", detail::vec_to_json(s.u)},
          {"w", detail::vec_to_json(s.w)},
          {"support", sup},
          {"residual", s.residual}};
}

inline json solve_outcome_to_json(const SolveOutcome& out) {
  json sols = json::array();
  for (const auto& s : out.solutions) sols.push_back(solution_to_json(s));
  return {{"solutions", sols}, {"exhaustive", out.exhaustive}};
}

inline json verdict_to_json(const Verdict& v) {
  json j;
  j["verdict"] = to_string(v.value);
  if (!v.method.empty()) j["method"] = v.method;
  if (!v.witness.is_null()) j["witness"] = v.witness;
  return j;
}

inline json class_report_to_json(const ClassReport& rep) {
  json j;
  j["positive"] = verdict_to_json(rep.positive);
  j["nonnegative"] = verdict_to_json(rep.nonnegative);
  j["S"] = verdict_to_json(rep.s);
  j["R0"] = verdict_to_json(rep.r0);
  j["Q"] = verdict_to_json(rep.q);
  if (!rep.metadata.empty()) j["metadata"] = rep.metadata;
  return j;
}

}  // namespace tcq
