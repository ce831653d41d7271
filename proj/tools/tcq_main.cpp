// tcq: solve and classify tensor complementarity problems on small dense
// tensors. Subcommands: solve, classify, reproduce, proptest.

#include "tcq/campaigns.hpp"
#include "tcq/classify.hpp"
#include "tcq/decomp.hpp"
#include "tcq/json_io.hpp"
#include "tcq/tcp.hpp"
#include "tcq/tensor.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>

namespace {

constexpr int kExitSolution = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitParse = 64;
constexpr int kExitUnsupported = 65;

tcq::SolveOptions options_from_env() {
  tcq::SolveOptions opts;
  if (const char* tol = std::getenv("TCQ_TOL")) {
    try {
      const double v = std::stod(tol);
      if (v > 0.0) opts.accept = v;
    } catch (...) {
      std::cerr << "warning: ignoring unparsable TCQ_TOL\n";
    }
  }
  return opts;
}

tcq::TensorDoc load_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  tcq::json j;
  in >> j;
  return tcq::parse_tensor_doc(j);
}

int tensor_dim(const tcq::TensorDoc& T) {
  return std::visit([](const auto& A) { return A.dim; }, T);
}

int cmd_solve(const std::string& input, const std::string& q_text) {
  tcq::TensorDoc T{tcq::DenseTensor(2, 1)};
  tcq::Vector q;
  try {
    T = load_tensor(input);
    q = tcq::parse_vector(tcq::json::parse(q_text));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  const int n = tensor_dim(T);
  if (q.size() != n) {
    std::cerr << "error: q length " << q.size() << " does not match dim " << n << "\n";
    return kExitParse;
  }
  const tcq::SolveOptions opts = options_from_env();
  tcq::SolveOutcome out;
  try {
    if (n == 1) {
      const tcq::DenseTensor A = std::holds_alternative<tcq::DenseTensor>(T)
                                     ? std::get<tcq::DenseTensor>(T)
                                     : tcq::materialize(std::get<tcq::SymOuterDecomp>(T));
      out = tcq::solve_tcp_n1(A, q, opts);
    } else if (n == 2) {
      out = tcq::solve_tcp_n2(T, q, opts);
    } else if (const auto* D = std::get_if<tcq::SymOuterDecomp>(&T);
               D && D->terms.size() == 1) {
      out = tcq::solve_tcp_rank_one(D->terms[0].mu, D->terms[0].w, D->order, q, opts);
    } else {
      std::cerr << "error: unsupported dimension " << n << " for this input kind\n";
      return kExitUnsupported;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  }
  std::cout << tcq::solve_outcome_to_json(out).dump(2) << "\n";
  if (!out.solutions.empty()) return kExitSolution;
  return out.exhaustive ? kExitNoSolution : kExitInconclusive;
}

int cmd_classify(const std::string& input) {
  tcq::TensorDoc T{tcq::DenseTensor(2, 1)};
  try {
    T = load_tensor(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  const tcq::ClassReport rep = tcq::classify_tensor(T, options_from_env());
  std::cout << tcq::class_report_to_json(rep).dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce

struct Row {
  std::string name;
  bool pass = false;
  std::string detail;
};

using tcq::Truth;
using tcq::Vector;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Row row_example_31() {
  Row r{"example-3.1", false, ""};
  const tcq::DenseTensor A =
      tcq::outer_rank_one({vec2(-1, -1), vec2(1, -1), vec2(-1, 1)});
  const double expect[8] = {1, -1, -1, 1, 1, -1, -1, 1};
  for (int f = 0; f < 8; ++f)
    if (A.entries[f] != expect[f]) {
      r.detail = "entry mismatch at flat index " + std::to_string(f);
      return r;
    }
  if (tcq::is_positive(A).value != Truth::No) {
    r.detail = "expected positive=No";
    return r;
  }
  const tcq::Verdict q = tcq::q_by_slice_criterion(A);
  if (q.value != Truth::Yes) {
    r.detail = "expected Q=Yes via slice criterion";
    return r;
  }
  r.pass = true;
  r.detail = "8 entries exact; positive=No; Q=Yes (slice criterion)";
  return r;
}

Row row_example_32() {
  Row r{"example-3.2", false, ""};
  const tcq::DenseTensor A =
      tcq::outer_rank_one({vec2(1, 1), vec2(1, -1), vec2(-1, -1), vec2(-1, 1)});
  const double row_expect[8] = {1, -1, 1, -1, -1, 1, -1, 1};
  for (int i = 0; i < 2; ++i)
    for (int f = 0; f < 8; ++f)
      if (A.entries[i * 8 + f] != row_expect[f]) {
        r.detail = "entry mismatch at flat index " + std::to_string(i * 8 + f);
        return r;
      }
  if (tcq::q_by_slice_criterion(A).value != Truth::Yes) {
    r.detail = "expected Q=Yes via slice criterion";
    return r;
  }
  r.pass = true;
  r.detail = "16 entries exact; Q=Yes (slice criterion)";
  return r;
}

tcq::DenseTensor example_33() {
  tcq::DenseTensor A(3, 2);
  A.entries << 4, 0, -4, 1, 4, 0, -4, 1;
  return A;
}

Row row_example_33() {
  Row r{"example-3.3-not-R0", false, ""};
  const tcq::DenseTensor A = example_33();
  const Vector v = tcq::eval_poly_map(A, vec2(1, 2));
  if (v[0] != 0.0 || v[1] != 0.0) {
    r.detail = "A(1,2)^2 != (0,0)";
    return r;
  }
  const tcq::SolveOutcome rays = tcq::solve_tcp_zero_n2(A);
  bool found = false;
  for (const auto& s : rays.solutions)
    if (!s.support.empty() && std::abs(s.u[0] - 1.0 / 3.0) <= 1e-9) found = true;
  if (!found) {
    r.detail = "ray theta=1/3 (direction (1,2)) not found";
    return r;
  }
  const tcq::ClassReport rep = tcq::classify_tensor(tcq::TensorDoc(A));
  if (rep.q.value != Truth::Yes || rep.r0.value != Truth::No) {
    r.detail = "expected Q=Yes, R0=No";
    return r;
  }
  r.pass = true;
  r.detail = "eval(1,2)=(0,0); ray (1,2) at theta=1/3; Q=Yes, R0=No";
  return r;
}

Row row_proposition_positive() {
  Row r{"proposition-positive", false, ""};
  const struct {
    Vector w;
    int m;
  } cases[] = {{vec2(1, 2), 3}, {vec2(-1, -2), 3}, {vec2(1, -1), 2}};
  for (const auto& c : cases)
    if (!tcq::check_generator_proposition(c.w, c.m).holds) {
      r.detail = "proposition fails on a fixed instance";
      return r;
    }
  const tcq::CampaignResult batch = tcq::campaign_generator_proposition(7, 200);
  if (batch.failures != 0) {
    r.detail = "random batch found a violation";
    return r;
  }
  r.pass = true;
  r.detail = "positive <-> unisigned generator holds on fixed + 200 random cases";
  return r;
}

Row row_theorem_equivalent() {
  Row r{"theorem-equivalent-rank-one", false, ""};
  {
    const auto eq = tcq::rank_one_equivalence(vec2(1, 2), 3);
    if (!(eq.agree && eq.positive.value == Truth::Yes)) {
      r.detail = "w=(1,2): expected all four Yes";
      return r;
    }
  }
  {
    const auto eq = tcq::rank_one_equivalence(vec2(-1, 1), 3);
    if (!(eq.agree && eq.positive.value == Truth::No)) {
      r.detail = "w=(-1,1): expected all four No";
      return r;
    }
    const tcq::DenseTensor A = tcq::sym_rank_one(vec2(-1, 1), 3);
    if (!tcq::verify_solution(A, Vector::Zero(2), vec2(1, 1))) {
      r.detail = "w=(-1,1): u=(1,1) must solve TCP(A,0)";
      return r;
    }
  }
  {
    const auto eq = tcq::rank_one_equivalence(vec2(1, 0), 3);
    if (!(eq.agree && eq.positive.value == Truth::No)) {
      r.detail = "w=(1,0): expected all four No";
      return r;
    }
    const tcq::DenseTensor A = tcq::sym_rank_one(vec2(1, 0), 3);
    if (!tcq::verify_solution(A, Vector::Zero(2), vec2(0, 1))) {
      r.detail = "w=(1,0): e2 must solve TCP(A,0)";
      return r;
    }
  }
  r.pass = true;
  r.detail = "four-way agreement on (1,2) Yes / (-1,1) No / (1,0) No with witnesses";
  return r;
}

Row row_permutation_covariance() {
  Row r{"theorem-permutation-covariance", false, ""};
  const tcq::CampaignResult res = tcq::campaign_solution_permutation_covariance(11, 100);
  r.pass = res.failures == 0;
  r.detail = r.pass ? "solution sets correspond under the swap on 100 seeded instances"
                    : res.reproducers.front();
  return r;
}

Row row_sym2_independence() {
  Row r{"lemma-sym2-independence", false, ""};
  const double mu1 = 2.0, mu2 = -0.5, alpha = 3.0;
  const Vector x = vec2(1, 2);
  tcq::SymOuterDecomp dep(3, 2, {{mu1, x}, {mu2, (alpha * x).eval()}});
  try {
    tcq::canonicalize_sym2(dep);
    r.detail = "dependent generators were not rejected";
    return r;
  } catch (const std::invalid_argument&) {
  }
  // the dependent pair collapses to one term with mu1 + mu2*alpha^m
  const double beta = mu1 + mu2 * std::pow(alpha, 3);
  const tcq::DenseTensor lhs = tcq::materialize(dep);
  const tcq::DenseTensor rhs = tcq::materialize(tcq::SymOuterDecomp(3, 2, {{beta, x}}));
  if ((lhs.entries - rhs.entries).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + lhs.max_abs())) {
    r.detail = "one-term collapse does not reproduce the tensor";
    return r;
  }
  const auto C =
      tcq::canonicalize_sym2(tcq::SymOuterDecomp(3, 2, {{8.0, vec2(1, 0)}, {1.0, vec2(0, 1)}}));
  if (C.form != tcq::Sym2Form::PlusPlus ||
      (C.x - vec2(2, 0)).cwiseAbs().maxCoeff() > 1e-9 ||
      (C.y - vec2(0, 1)).cwiseAbs().maxCoeff() > 1e-9) {
    r.detail = "canonicalization of {(8,e1),(1,e2)} is not x=(2,0), y=(0,1)";
    return r;
  }
  r.pass = true;
  r.detail = "dependent pair rejected and collapsed; canonical form verified";
  return r;
}

Row row_nonzero_singleton() {
  Row r{"lemma-nonzero-singleton", false, ""};
  const tcq::CampaignResult res = tcq::campaign_structural_soundness(13, 200);
  r.pass = res.failures == 0;
  r.detail = r.pass ? "all nonzero rays on 200 seeded Sym=2 instances have singleton support"
                    : res.reproducers.front();
  return r;
}

Row row_odd_forms() {
  Row r{"lemma-odd-not-r0-forms", false, ""};
  tcq::CanonicalSym2 c;
  c.order = 3;
  c.form = tcq::Sym2Form::PlusPlus;
  c.x = vec2(1, 1);
  c.y = vec2(-1, 2);
  const auto f = tcq::detect_not_r0_form(c);
  if (!f || f->form_case != tcq::NotR0Case::OddI) {
    r.detail = "x=(1,1), y=(-1,2) must match ODD_I";
    return r;
  }
  bool ray = false;
  for (const auto& s : tcq::solve_tcp_zero_n2(tcq::materialize(c.decomp())).solutions)
    if (!s.support.empty()) ray = true;
  if (!ray) {
    r.detail = "ODD_I instance has no nonzero ray";
    return r;
  }
  c.x = vec2(1, 0);
  c.y = vec2(0, 1);
  if (tcq::detect_not_r0_form(c)) {
    r.detail = "x=e1, y=e2 must not match a form";
    return r;
  }
  for (const auto& s : tcq::solve_tcp_zero_n2(tcq::materialize(c.decomp())).solutions)
    if (!s.support.empty()) {
      r.detail = "e1,e2 instance unexpectedly has a nonzero ray";
      return r;
    }
  r.pass = true;
  r.detail = "ODD_I fires with a ray; the R0 instance has none";
  return r;
}

Row row_even_forms() {
  Row r{"lemma-even-not-r0-forms", false, ""};
  tcq::CanonicalSym2 c;
  c.order = 4;
  c.form = tcq::Sym2Form::PlusMinus;
  c.x = vec2(1, 2);
  c.y = vec2(1, 1);
  const auto f = tcq::detect_not_r0_form(c);
  if (!f || f->form_case != tcq::NotR0Case::EvenI || f->alpha != 1) {
    r.detail = "x=(1,2), y=(1,1) must match EVEN_I with alpha=1";
    return r;
  }
  bool ray = false;
  for (const auto& s : tcq::solve_tcp_zero_n2(tcq::materialize(c.decomp())).solutions)
    if (!s.support.empty() && s.support.size() == 1) ray = true;
  if (!ray) {
    r.detail = "EVEN_I instance has no singleton-support ray";
    return r;
  }
  c.x = vec2(1, 1);
  c.y = vec2(2, 5);
  if (tcq::detect_not_r0_form(c)) {
    r.detail = "generic even instance must not match a form";
    return r;
  }
  r.pass = true;
  r.detail = "EVEN_I fires with a singleton ray; generic instance does not";
  return r;
}

Row row_theorem_q_odd() {
  Row r{"theorem-q-odd", false, ""};
  tcq::CanonicalSym2 c;
  c.order = 3;
  c.form = tcq::Sym2Form::PlusPlus;
  c.x = vec2(1, 1);
  c.y = vec2(-1, 2);
  const auto q = tcq::find_q_without_solution(c);
  if (!q || (*q - vec2(-1, 3)).cwiseAbs().maxCoeff() > 1e-12) {
    r.detail = "expected witness q=(-1,3)";
    return r;
  }
  const tcq::SolveOutcome res = tcq::solve_tcp_decomp_exact(c.decomp(), *q);
  if (!(res.exhaustive && res.solutions.empty())) {
    r.detail = "witness q=(-1,3) was not certified unsolvable";
    return r;
  }
  const tcq::PipelineResult pr = tcq::q_implies_r0_pipeline(c);
  if (pr.q.value != Truth::No || pr.r0.value != Truth::No) {
    r.detail = "pipeline must report Q=No and R0=No";
    return r;
  }
  r.pass = true;
  r.detail = "witness q=(-1,3) certified; Q=No, R0=No";
  return r;
}

Row row_theorem_main_even() {
  Row r{"theorem-main-even", false, ""};
  tcq::CanonicalSym2 c;
  c.order = 4;
  c.form = tcq::Sym2Form::PlusMinus;
  c.x = vec2(1, 1);
  c.y = vec2(1, 2);  // |x2| < |y2| branch
  const auto q = tcq::find_q_without_solution(c);
  if (!q || (*q - vec2(1, -1)).cwiseAbs().maxCoeff() > 1e-12) {
    r.detail = "expected witness q=(1,-1)";
    return r;
  }
  const tcq::SolveOutcome res = tcq::solve_tcp_decomp_exact(c.decomp(), *q);
  if (!(res.exhaustive && res.solutions.empty())) {
    r.detail = "witness q=(1,-1) was not certified unsolvable";
    return r;
  }
  // |x2| >= |y2| branch: nonnegative with a zero diagonal entry
  tcq::CanonicalSym2 c1;
  c1.order = 4;
  c1.form = tcq::Sym2Form::PlusMinus;
  c1.x = vec2(1, 2);
  c1.y = vec2(1, 1);
  const tcq::Verdict nn = tcq::q_by_nonnegativity(tcq::materialize(c1.decomp()));
  if (nn.value != Truth::No) {
    r.detail = "nonnegative zero-diagonal branch must refute Q";
    return r;
  }
  r.pass = true;
  r.detail = "witness q=(1,-1) certified; zero-diagonal branch refutes Q";
  return r;
}

Row row_minus_identity() {
  Row r{"minus-identity-converse", false, ""};
  const tcq::SymOuterDecomp D(2, 2, {{-1.0, vec2(1, 0)}, {-1.0, vec2(0, 1)}});
  const tcq::ClassReport rep = tcq::classify_tensor(tcq::TensorDoc(D));
  if (rep.r0.value != Truth::Yes || rep.q.value != Truth::No) {
    r.detail = "expected R0=Yes and Q=No";
    return r;
  }
  const tcq::SolveOutcome res = tcq::solve_tcp_decomp_exact(D, vec2(-1, -1));
  if (!(res.exhaustive && res.solutions.empty())) {
    r.detail = "q=(-1,-1) was not certified unsolvable";
    return r;
  }
  r.pass = true;
  r.detail = "R0=Yes, Q=No with q=(-1,-1) certified unsolvable";
  return r;
}

int cmd_reproduce(const std::string& only, bool as_json) {
  const std::vector<std::function<Row()>> rows = {
      row_example_31,     row_example_32,          row_example_33,
      row_proposition_positive, row_theorem_equivalent, row_permutation_covariance,
      row_sym2_independence,    row_nonzero_singleton,  row_odd_forms,
      row_even_forms,           row_theorem_q_odd,      row_theorem_main_even,
      row_minus_identity,
  };
  bool all_pass = true;
  bool matched = false;
  tcq::json out = tcq::json::array();
  for (const auto& make : rows) {
    Row row = make();
    if (!only.empty() && row.name != only) continue;
    matched = true;
    all_pass = all_pass && row.pass;
    if (as_json) {
      out.push_back({{"name", row.name},
                     {"status", row.pass ? "PASS" : "FAIL"},
                     {"detail", row.detail}});
    } else {
      std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.name << "  —  "
                << row.detail << "\n";
    }
  }
  if (!only.empty() && !matched) {
    std::cerr << "error: unknown check name: " << only << "\n";
    return kExitParse;
  }
  if (as_json) std::cout << out.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_proptest(std::uint64_t seed, bool seed_given, int cases,
                 const std::string& only) {
  if (!seed_given) {
    seed = std::random_device{}();
    std::cerr << "seed: " << seed << "\n";
  }
  tcq::json out;
  out["seed"] = seed;
  out["cases"] = cases;
  out["suites"] = tcq::json::array();
  int total_failures = 0;
  for (const std::string& name : tcq::campaign_names()) {
    if (!only.empty() && name != only) continue;
    const tcq::CampaignResult res = tcq::run_campaign(name, seed, cases);
    total_failures += res.failures;
    tcq::json suite = {{"name", res.name},
                       {"cases", res.cases},
                       {"failures", res.failures}};
    if (!res.reproducers.empty()) suite["reproducers"] = res.reproducers;
    out["suites"].push_back(suite);
  }
  if (!only.empty() && out["suites"].empty()) {
    std::cerr << "error: unknown suite name: " << only << "\n";
    return kExitParse;
  }
  out["total_failures"] = total_failures;
  std::cout << out.dump(2) << "\n";
  return total_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor complementarity problems on small dense tensors"};
  app.require_subcommand(1);

  std::string input, q_text, only;
  bool as_json = false;
  std::uint64_t seed = 0;
  int cases = 500;

  auto* solve = app.add_subcommand("solve", "solve TCP(A,q) for a tensor document");
  solve->add_option("-i,--input", input, "tensor JSON file")->required();
  solve->add_option("-q", q_text, "q vector as a JSON array, e.g. \"[-1,3]\"")
      ->required();

  auto* classify = app.add_subcommand("classify", "tensor class verdicts");
  classify->add_option("-i,--input", input, "tensor JSON file")->required();

  auto* reproduce = app.add_subcommand("reproduce", "run the named check suite");
  reproduce->add_option("--only", only, "run a single named check");
  reproduce->add_flag("--json", as_json, "machine-readable output");

  auto* proptest = app.add_subcommand("proptest", "randomized property campaigns");
  auto* seed_opt = proptest->add_option("--seed", seed, "PRNG seed");
  proptest->add_option("--cases", cases, "cases per suite (default 500)");
  proptest->add_option("--only", only, "run a single suite");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return cmd_solve(input, q_text);
  if (classify->parsed()) return cmd_classify(input);
  if (reproduce->parsed()) return cmd_reproduce(only, as_json);
  if (proptest->parsed())
    return cmd_proptest(seed, seed_opt->count() > 0, cases, only);
  return 0;
}
