#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcq/decomp.hpp"

using tcq::CanonicalSym2;
using tcq::DenseTensor;
using tcq::NotR0Case;
using tcq::Sym2Form;
using tcq::SymOuterDecomp;
using tcq::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("extract_generator recovers generators exactly") {
  const auto r = tcq::extract_generator(tcq::sym_rank_one(vec2(-1, 2), 3));
  REQUIRE(r.has_value());
  CHECK((r->w - vec2(-1, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(r->sign_ambiguous);
}

TEST_CASE("extract_generator rejects non-rank-one inputs") {
  CHECK_FALSE(tcq::extract_generator(DenseTensor(3, 2)).has_value());  // zero tensor
  const DenseTensor E =
      tcq::outer_rank_one({vec2(-1, -1), vec2(1, -1), vec2(-1, 1)});
  CHECK_FALSE(tcq::extract_generator(E).has_value());  // not symmetric
  // rank-two symmetric
  const DenseTensor S = tcq::materialize(
      SymOuterDecomp(3, 2, {{1.0, vec2(1, 0)}, {1.0, vec2(0, 1)}}));
  CHECK_FALSE(tcq::extract_generator(S).has_value());
}

TEST_CASE("extract_generator even order uses the positive-lead representative") {
  const auto r = tcq::extract_generator(tcq::sym_rank_one(vec2(-2, 1), 4));
  REQUIRE(r.has_value());
  CHECK(r->sign_ambiguous);
  CHECK((r->w - vec2(2, -1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unisigned vectors") {
  Vector v(3);
  v << 2, 3, 1;
  CHECK(tcq::is_unisigned(v));
  CHECK(tcq::is_unisigned(vec2(-1, -5)));
  CHECK_FALSE(tcq::is_unisigned(vec2(1, 0)));
  CHECK_FALSE(tcq::is_unisigned(vec2(1, -1)));
}

TEST_CASE("generator proposition instances") {
  auto r = tcq::check_generator_proposition(vec2(1, 2), 3);
  CHECK(r.a_positive);
  CHECK(r.unisigned_generator);
  CHECK(r.holds);

  r = tcq::check_generator_proposition(vec2(-1, -2), 3);
  CHECK_FALSE(r.a_positive);
  CHECK(r.a_neg_positive);
  CHECK(r.unisigned_generator);
  CHECK(r.holds);

  r = tcq::check_generator_proposition(vec2(1, -1), 2);
  CHECK_FALSE(r.a_positive);
  CHECK_FALSE(r.a_neg_positive);
  CHECK_FALSE(r.unisigned_generator);
  CHECK(r.holds);

  CHECK_THROWS_AS(tcq::check_generator_proposition(Vector::Zero(2), 3),
                  std::invalid_argument);
}

TEST_CASE("linear independence via singular values") {
  CHECK(tcq::check_linear_independence(vec2(1, 0), vec2(0, 1)));
  CHECK_FALSE(tcq::check_linear_independence(vec2(1, 2), vec2(2, 4)));
  CHECK_FALSE(tcq::check_linear_independence(vec2(1, -1), vec2(-1, 1)));
}

TEST_CASE("canonicalize_sym2 absorbs coefficients per parity") {
  {
    const auto C = tcq::canonicalize_sym2(
        SymOuterDecomp(3, 2, {{8.0, vec2(1, 0)}, {1.0, vec2(0, 1)}}));
    CHECK(C.form == Sym2Form::PlusPlus);
    CHECK((C.x - vec2(2, 0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((C.y - vec2(0, 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
  {
    const auto C = tcq::canonicalize_sym2(
        SymOuterDecomp(4, 2, {{1.0, vec2(1, 0)}, {-16.0, vec2(0, 1)}}));
    CHECK(C.form == Sym2Form::PlusMinus);
    CHECK((C.x - vec2(1, 0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((C.y - vec2(0, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  {
    const auto C = tcq::canonicalize_sym2(
        SymOuterDecomp(4, 2, {{-1.0, vec2(1, 0)}, {-1.0, vec2(0, 1)}}));
    CHECK(C.form == Sym2Form::MinusMinus);
  }
  // a negative term listed first still canonicalizes positive-first
  {
    const auto C = tcq::canonicalize_sym2(
        SymOuterDecomp(4, 2, {{-1.0, vec2(0, 1)}, {1.0, vec2(1, 0)}}));
    CHECK(C.form == Sym2Form::PlusMinus);
    CHECK((C.x - vec2(1, 0)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(tcq::canonicalize_sym2(
                      SymOuterDecomp(3, 2, {{1.0, vec2(1, 2)}, {1.0, vec2(2, 4)}})),
                  std::invalid_argument);
}

TEST_CASE("canonicalization reproduces the source tensor") {
  const SymOuterDecomp D(4, 2, {{3.0, vec2(1.5, -0.5)}, {-2.0, vec2(0.5, 2.0)}});
  const auto C = tcq::canonicalize_sym2(D);
  const DenseTensor a = tcq::materialize(D);
  const DenseTensor b = tcq::materialize(C.decomp());
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + a.max_abs()));
}

TEST_CASE("detect_not_r0_form matches the structural cases") {
  CanonicalSym2 c;
  c.order = 3;
  c.form = Sym2Form::PlusPlus;
  c.x = vec2(1, 1);
  c.y = vec2(-1, 2);
  auto f = tcq::detect_not_r0_form(c);
  REQUIRE(f.has_value());
  CHECK(f->form_case == NotR0Case::OddI);

  c.x = vec2(2, 1);
  c.y = vec2(3, -1);  // y2 = -x2, x1 + y1 = 5 > 0
  f = tcq::detect_not_r0_form(c);
  REQUIRE(f.has_value());
  CHECK(f->form_case == NotR0Case::OddII);

  c.x = vec2(1, 0);
  c.y = vec2(0, 1);
  CHECK_FALSE(tcq::detect_not_r0_form(c).has_value());

  c.order = 4;
  c.form = Sym2Form::PlusMinus;
  c.x = vec2(1, 2);
  c.y = vec2(1, 1);
  f = tcq::detect_not_r0_form(c);
  REQUIRE(f.has_value());
  CHECK(f->form_case == NotR0Case::EvenI);
  CHECK(f->alpha == 1);

  c.x = vec2(1, 2);
  c.y = vec2(-1, 1);  // y1 = -x1, x1(x2 - (-1)y2) = 1*(2+1) > 0
  f = tcq::detect_not_r0_form(c);
  REQUIRE(f.has_value());
  CHECK(f->form_case == NotR0Case::EvenI);
  CHECK(f->alpha == -1);

  c.x = vec2(1, 1);
  c.y = vec2(2, 5);
  CHECK_FALSE(tcq::detect_not_r0_form(c).has_value());

  c.form = Sym2Form::PlusPlus;  // even order demands PLUS_MINUS here
  CHECK_THROWS_AS(tcq::detect_not_r0_form(c), std::invalid_argument);
}
