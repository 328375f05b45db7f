#include <gtest/gtest.h>

#include "lcube/reductions.hpp"
#include "lcube/search.hpp"
#include "lcube/surface.hpp"
#include "named.hpp"

using namespace lcube;

namespace {

const char* kSource = R"(calculus lP
forall U : Prop
forall a : U
exists F : U -> U
match (F a) = a
)";

const char* kTypeSource = R"(calculus lw
forall A : Prop
exists X : Prop
match X = A
)";

Substitution single(std::size_t pos, const std::string& text, const QContext& q) {
  Substitution s;
  s.bind(pos, Binding{{}, parse_term(text, q.prefix(pos).names())});
  return s;
}

ReductionError::Code build_error(ReductionKind kind, const Problem& p, const CubeSpec& spec,
                                 std::vector<SortPair>* missing = nullptr) {
  try {
    if (kind == ReductionKind::Thm1) build_thm1(p, spec);
    else if (kind == ReductionKind::ErratumThm2) build_erratum(p, spec);
    else build_thm2_invalid(p, spec);
  } catch (const ReductionError& e) {
    if (missing) *missing = e.missing_pairs();
    return e.code();
  }
  ADD_FAILURE() << "expected a reduction error";
  return ReductionError::Code::ConstructionRejected;
}

}  // namespace

TEST(BuildThm1, TargetShape) {
  ProblemFile src = parse_problem(kSource);
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  const Problem& t = art.target;
  EXPECT_EQ(t.kind, ProblemKind::Matching);
  EXPECT_EQ(art.f_order, Order::finite(3));
  EXPECT_EQ(t.max_existential_order, Order::finite(3));
  EXPECT_TRUE(is_closed(t.rhs, t.qctx));
  EXPECT_EQ(art.f_position, t.qctx.size() - 1);
  EXPECT_FALSE(art.invalid_per_erratum);
  ASSERT_EQ(art.requirements.size(), 1u);
  EXPECT_EQ(art.requirements[0], kPropType);
  auto names = t.qctx.names();
  EXPECT_EQ(t.rhs, parse_term("(G c d)", names));
  EXPECT_EQ(t.lhs, parse_term("(G (f [x:U]z c) (f [x:U]z d))", names));
  EXPECT_EQ(t.qctx[art.f_position].type,
            parse_term("(h:U -> U)(P (h (F a))) -> (P (h a))",
                       t.qctx.prefix(art.f_position).names()));
  EXPECT_NO_THROW(wf_context(t.qctx.plain(), art.spec));
}

TEST(BuildThm1, MatchesTranscribedFixture) {
  ProblemFile src = parse_problem(kSource);
  ProblemFile fixture = parse_problem(R"(calculus lP
forall U : Prop
forall a : U
exists F : U -> U
forall z : U
forall P : U -> Prop
forall c : (P z)
forall d : (P z)
forall G : (P z) -> (P z) -> (P z)
exists f : (h:U -> U)(P (h (F a))) -> (P (h a))
match (G (f [x:U]z c) (f [x:U]z d)) = (G c d)
)");
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  ASSERT_EQ(art.target.qctx.size(), fixture.problem.qctx.size());
  for (std::size_t i = 0; i < fixture.problem.qctx.size(); ++i) {
    EXPECT_EQ(art.target.qctx[i].quantifier, fixture.problem.qctx[i].quantifier);
    EXPECT_EQ(art.target.qctx[i].name, fixture.problem.qctx[i].name);
    EXPECT_EQ(art.target.qctx[i].type, fixture.problem.qctx[i].type);
  }
  EXPECT_EQ(art.target.lhs, fixture.problem.lhs);
  EXPECT_EQ(art.target.rhs, fixture.problem.rhs);
}

TEST(BuildThm1, Gating) {
  ProblemFile src = parse_problem(kSource);
  std::vector<SortPair> missing;
  EXPECT_EQ(build_error(ReductionKind::Thm1, src.problem, CubeSpec::stlc(), &missing),
            ReductionError::Code::CalculusLacksCapability);
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0], kPropType);
  for (const std::string& name : CubeSpec::preset_names()) {
    CubeSpec spec = *CubeSpec::preset(name);
    bool ok = true;
    try {
      build_thm1(src.problem, spec);
    } catch (const ReductionError&) {
      ok = false;
    }
    EXPECT_EQ(ok, spec.has(kPropType)) << name;
  }
}

TEST(BuildThm1, RejectsNonElementarySource) {
  ProblemFile src = parse_problem(R"(calculus lP
forall U : Prop
forall P : U -> Prop
forall a : U
exists F : U -> U
match (F a) = a
)");
  EXPECT_EQ(build_error(ReductionKind::Thm1, src.problem, src.spec),
            ReductionError::Code::NotTermElementary);
}

TEST(BuildThm1, FreshensNamesAgainstSource) {
  ProblemFile src = parse_problem(R"(calculus lP
forall U : Prop
forall z : U
forall c : U
exists f : U -> U
match (f z) = c
)");
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  EXPECT_EQ(art.names.z, "z1");
  EXPECT_EQ(art.names.c, "c1");
  EXPECT_EQ(art.names.f, "f1");
  EXPECT_EQ(art.names.P, "P");
  EXPECT_EQ(art.f_order, Order::finite(3));
}

TEST(Thm1Witness, Solutions) {
  ProblemFile src = parse_problem(kSource);
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  const QContext& sq = src.problem.qctx;
  for (const char* tau_text : {"[x:U]x", "[x:U]a"}) {
    Substitution tau = single(2, tau_text, sq);
    Substitution sigma = thm1_witness(tau, art);
    EXPECT_TRUE(is_solution(sigma, art.target, art.spec));
    QContext image = subst_well_typed(sigma, art.target.qctx, art.spec);
    Term lhs = apply_subst(sigma, art.target.qctx, art.target.lhs);
    Term expected = parse_term("(G c d)", image.names());
    EXPECT_EQ(normalize(lhs), expected);
    auto oracle = named::oracle_normalize(lhs, image.size());
    ASSERT_TRUE(oracle);
    EXPECT_EQ(*oracle, expected);
    // extraction gives back tau
    Substitution back = thm1_extract(sigma, art);
    ASSERT_NE(back.find(2), nullptr);
    EXPECT_TRUE(equivalent(back.find(2)->replacement, tau.find(2)->replacement));
  }
}

TEST(Thm1Witness, ExpectedShape) {
  ProblemFile src = parse_problem(kSource);
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  Substitution sigma = thm1_witness(single(2, "[x:U]x", src.problem.qctx), art);
  const Binding* f = sigma.find(art.f_position);
  ASSERT_NE(f, nullptr);
  // lives in sigma applied to the prefix before f, where F is gone
  std::vector<std::string> scope = {"U", "a", "z", "P", "c", "d", "G"};
  EXPECT_EQ(f->replacement, parse_term("[x1:U -> U][x2:(P (x1 ([x:U]x a)))]x2", scope));
}

TEST(Thm1Witness, RejectsNonSolution) {
  ProblemFile src = parse_problem(kSource);
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  try {
    thm1_witness(Substitution{}, art);
    FAIL();
  } catch (const ReductionError& e) {
    EXPECT_EQ(e.code(), ReductionError::Code::TauNotASolution);
  }
  try {
    erratum_witness(single(2, "[x:U]x", src.problem.qctx), art);
    FAIL();
  } catch (const ReductionError& e) {
    EXPECT_EQ(e.code(), ReductionError::Code::WrongKind);
  }
}

TEST(Thm1Extract, SearchSolutionsAndNonSolutions) {
  ProblemFile src = parse_problem(kSource);
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  SearchResult res = solve_bounded(art.target, {8, 64}, art.spec);
  ASSERT_FALSE(res.solutions.empty());
  for (const Substitution& sigma : res.solutions) {
    Substitution back = thm1_extract(sigma, art);
    EXPECT_TRUE(is_solution(back, art.source, art.spec));
  }
  try {
    thm1_extract(Substitution{}, art);
    FAIL();
  } catch (const ReductionError& e) {
    EXPECT_EQ(e.code(), ReductionError::Code::SigmaNotASolution);
  }
}

TEST(Thm1Extract, SourceWithLocalContextWitness) {
  // tau with a nonempty local context
  ProblemFile src = parse_problem(R"(calculus lP
forall U : Prop
forall a : U
exists F : U -> U
unify (F a) = (F a)
)");
  ReductionArtifact art = build_thm1(src.problem, src.spec);
  Substitution tau;
  QDecl h{Quantifier::Exists, "H", parse_term("U -> U", {"U", "a"})};
  tau.bind(2, Binding{{h}, parse_term("[x:U](H x)", {"U", "a", "H"})});
  ASSERT_TRUE(is_solution(tau, src.problem, src.spec));
  Substitution sigma = thm1_witness(tau, art);
  EXPECT_TRUE(is_solution(sigma, art.target, art.spec));
  EXPECT_TRUE(is_solution(thm1_extract(sigma, art), src.problem, src.spec));
}

TEST(BuildErratum, ShapeAndOrder) {
  ProblemFile src = parse_problem(kTypeSource);
  ReductionArtifact art = build_erratum(src.problem, src.spec);
  EXPECT_EQ(art.f_order, Order::finite(4));
  EXPECT_EQ(art.target.kind, ProblemKind::Matching);
  EXPECT_FALSE(art.invalid_per_erratum);
  auto names = art.target.qctx.names();
  std::vector<std::string> expected_names = {"A", "X", "P", "Z", "c", "d", "G", "f"};
  EXPECT_EQ(names, expected_names);
  EXPECT_EQ(art.target.lhs, parse_term("(G (f [X:Prop]Z c) (f [X:Prop]Z d))", names));
  EXPECT_EQ(art.target.rhs, parse_term("(G c d)", names));
  EXPECT_EQ(art.target.qctx[2].type, parse_term("Prop -> Prop", {}));
  EXPECT_EQ(art.target.qctx[7].type,
            parse_term("(h:Prop -> Prop)(P (h X)) -> (P (h A))",
                       std::vector<std::string>(names.begin(), names.begin() + 7)));
}

TEST(BuildErratum, Gating) {
  ProblemFile src = parse_problem(kTypeSource);
  for (const std::string& name : CubeSpec::preset_names()) {
    CubeSpec spec = *CubeSpec::preset(name);
    bool capable = spec.has(kTypeProp) && spec.has(kTypeType);
    for (auto kind : {ReductionKind::ErratumThm2, ReductionKind::InvalidThm2}) {
      if (capable) {
        ReductionArtifact art = kind == ReductionKind::ErratumThm2
                                    ? build_erratum(src.problem, spec)
                                    : build_thm2_invalid(src.problem, spec);
        EXPECT_EQ(art.f_order, kind == ReductionKind::ErratumThm2 ? Order::finite(4)
                                                                   : Order::infinite());
      } else {
        std::vector<SortPair> missing;
        EXPECT_EQ(build_error(kind, src.problem, spec, &missing),
                  ReductionError::Code::CalculusLacksCapability)
            << name;
        EXPECT_FALSE(missing.empty());
        for (SortPair p : missing) EXPECT_FALSE(spec.has(p));
      }
    }
  }
}

TEST(BuildErratum, RejectsNonElementarySource) {
  ProblemFile src = parse_problem(R"(calculus lw
forall A : Prop
forall a : A
exists X : Prop
match X = A
)");
  EXPECT_EQ(build_error(ReductionKind::ErratumThm2, src.problem, src.spec),
            ReductionError::Code::NotTypeElementary);
}

TEST(ErratumWitness, RoundTrip) {
  ProblemFile src = parse_problem(kTypeSource);
  ReductionArtifact art = build_erratum(src.problem, src.spec);
  Substitution tau = single(1, "A", src.problem.qctx);
  Substitution sigma = erratum_witness(tau, art);
  EXPECT_TRUE(is_solution(sigma, art.target, art.spec));
  Substitution back = erratum_extract(sigma, art);
  EXPECT_TRUE(is_solution(back, src.problem, src.spec));
  EXPECT_THROW(erratum_witness(Substitution{}, art), ReductionError);
}

TEST(ErratumWitness, TrivialWhenSidesCoincide) {
  ProblemFile src = parse_problem(R"(calculus coc
forall A : Prop
forall g : Prop -> Prop -> Prop
exists X : Prop
unify (g X A) = (g X A)
)");
  ReductionArtifact art = build_erratum(src.problem, src.spec);
  Substitution sigma = erratum_witness(Substitution{}, art);
  EXPECT_TRUE(is_solution(sigma, art.target, art.spec));
}

TEST(BuildThm2Invalid, ShapeAndFlag) {
  ProblemFile src = parse_problem(kTypeSource);
  ReductionArtifact art = build_thm2_invalid(src.problem, CubeSpec::coc());
  EXPECT_TRUE(art.invalid_per_erratum);
  EXPECT_TRUE(art.f_order.is_infinite());
  auto names = art.target.qctx.names();
  std::vector<std::string> expected_names = {"A", "X", "Z", "c", "d", "G", "f"};
  EXPECT_EQ(names, expected_names);
  EXPECT_EQ(art.target.qctx[6].type,
            parse_term("(h:Prop -> Prop)(h X) -> (h A)",
                       std::vector<std::string>(names.begin(), names.begin() + 6)));
  std::string printed = print_artifact(art);
  EXPECT_NE(printed.find("# invalid-per-erratum: true"), std::string::npos);
  EXPECT_NE(printed.find("# f-order: inf"), std::string::npos);
}

TEST(Goldfarb, Numerals) {
  GoldfarbShapes s = GoldfarbShapes::standard();
  auto names = s.qctx.names();
  EXPECT_EQ(goldfarb_numeral(0, s), parse_term("[w1:U]w1", names));
  EXPECT_EQ(goldfarb_numeral(2, s), parse_term("[w1:U](g a (g a w1))", names));
  Context ctx = s.qctx.plain();
  Term u_to_u = parse_term("U -> U", names);
  for (std::size_t n : {0u, 1u, 2u, 5u})
    EXPECT_EQ(infer_type(ctx, goldfarb_numeral(n, s), CubeSpec::stlc()), u_to_u);
}

TEST(Goldfarb, NumeralAppliedToConstant) {
  GoldfarbShapes s = GoldfarbShapes::standard();
  auto names = s.qctx.names();
  for (std::size_t n = 0; n <= 5; ++n) {
    Term nf = normalize(Term::app(goldfarb_numeral(n, s), s.ref(s.constant, 0)));
    std::string expected = "a";
    for (std::size_t k = 0; k < n; ++k) expected = "(g a " + expected + ")";
    EXPECT_EQ(nf, parse_term(expected, names)) << n;
  }
}

TEST(Goldfarb, Templates) {
  GoldfarbShapes s = GoldfarbShapes::standard();
  auto names = s.qctx.names();
  Context ctx = s.qctx.plain();
  EXPECT_EQ(goldfarb_tpl(1, 0, s),
            parse_term("[w1:U][w2:U](g ([w1:U]w1 w1) ([w1:U]w1 w2))", names));
  Term t23 = goldfarb_tpl(2, 3, s);
  std::vector<std::string> inner = names;
  inner.push_back("w1");
  inner.push_back("w2");
  Term six = Term::app(shift(goldfarb_numeral(6, s), 2, 0), Term::var(1));
  EXPECT_EQ(t23.body().body().fun().arg(), six);
  for (std::size_t ni : {0u, 1u, 2u})
    for (std::size_t p : {0u, 1u, 3u})
      EXPECT_EQ(infer_type(ctx, goldfarb_tpl(ni, p, s), CubeSpec::stlc()),
                parse_term("U -> U -> U", names));
}

TEST(Goldfarb, SolutionShapes) {
  GoldfarbShapes s = GoldfarbShapes::standard();
  auto names = s.qctx.names();
  Context ctx = s.qctx.plain();
  auto [f1, g1] = goldfarb_solution_shapes(2, 1, s);
  Term t0 = shift(goldfarb_tpl(2, 0, s), 3, 0);
  Term expected_g = Term::lam(
      Term::var(2),
      Term::lam(Term::var(3),
                Term::lam(Term::var(4),
                          fold_app(Term::var(3), {fold_app(t0, {Term::var(2), Term::var(1)}),
                                                  Term::var(0)}),
                          "w3"),
                "w2"),
      "w1");
  EXPECT_EQ(g1, expected_g);
  for (std::size_t ni : {0u, 1u, 3u}) {
    for (std::size_t nj : {0u, 1u, 2u, 3u}) {
      auto [f, g] = goldfarb_solution_shapes(ni, nj, s);
      EXPECT_EQ(infer_type(ctx, f, CubeSpec::stlc()), parse_term("U -> U", names));
      EXPECT_EQ(infer_type(ctx, g, CubeSpec::stlc()), parse_term("U -> U -> U -> U", names));
    }
  }
  auto [f0, g0] = goldfarb_solution_shapes(0, 1, s);
  EXPECT_TRUE(equivalent(f0, goldfarb_numeral(0, s)));
}
