#include <gtest/gtest.h>

#include <cstdlib>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"
#include "mucalc/games.hpp"
#include "support.hpp"

using namespace mucalc;
using testsupport::phi;

namespace {

const std::vector<KripkeModel>& small_suite() {
    static const auto v = testsupport::structures(2, {"p", "q"});
    return v;
}

bool accepts_like(const ModalAutomaton& A, int a, const Formula& f, const std::vector<KripkeModel>& ms) {
    for (const auto& m : ms)
        if (accepted_states(A, a, m) != eval_naive(f, m)) return false;
    return true;
}

bool same_formula_semantics(const Formula& a, const Formula& b, const std::vector<KripkeModel>& ms) {
    for (const auto& m : ms)
        if (eval_naive(a, m) != eval_naive(b, m)) return false;
    return true;
}

ModalAutomaton one(const std::string& theta, int prio) {
    ModalAutomaton A;
    A.add(parse_onestep(theta), prio);
    return A;
}

// Final-part states only mention final-part states.
bool closed_final_part(const ModalAutomaton& A) {
    if (!A.final_part) return false;
    for (int a = 0; a < A.size(); ++a)
        if ((*A.final_part)[a])
            for (int b : atoms_of(A.theta[a]))
                if (!(*A.final_part)[b]) return false;
    return true;
}

}  // namespace

TEST(FromFormula, Letter) {
    InitializedAutomaton A = from_formula(prepare(parse("p")));
    ASSERT_EQ(A.aut.size(), 1);
    EXPECT_EQ(to_string(A.aut.theta[A.init]), "p");
    EXPECT_EQ(A.aut.prio[A.init] % 2, 0);
    EXPECT_TRUE(accepts_like(A.aut, A.init, parse("p"), small_suite()));
}

TEST(FromFormula, EvenDistance) {
    InitializedAutomaton A = from_formula(prepare(phi(3)));
    EXPECT_EQ(A.aut.size(), 2);
    EXPECT_EQ(A.aut.prio[A.init] % 2, 1);
    EXPECT_TRUE(accepts_like(A.aut, A.init, phi(3), testsupport::suite_a()));
}

TEST(FromFormula, InfinitePath) {
    Formula f = parse("nu x. <>x");
    InitializedAutomaton A = from_formula(prepare(f));
    ASSERT_EQ(A.aut.size(), 1);
    EXPECT_EQ(A.aut.prio[0] % 2, 0);
    EXPECT_TRUE(accepts_like(A.aut, A.init, f, testsupport::suite_a()));
}

TEST(FromFormula, CorpusOnSmallSuite) {
    for (const auto& s : testsupport::corpus30()) {
        Formula f = parse(s);
        InitializedAutomaton A = from_formula(prepare(f));
        EXPECT_TRUE(accepts_like(A.aut, A.init, f, small_suite())) << s;
    }
}

TEST(Simulate, OutputIsDisjunctiveAndEquivalent) {
    for (const auto& s : testsupport::corpus30()) {
        Formula f = parse(s);
        InitializedAutomaton D = simulate(from_formula(prepare(f)));
        EXPECT_TRUE(D.aut.disjunctive()) << s;
        EXPECT_TRUE(accepts_like(D.aut, D.init, f, small_suite())) << s;
    }
}

TEST(Simulate, ConjunctionAndBinarySubtree) {
    for (const char* s : {"p & q", "mu x. p | (<>(q & x) & <>(!q & x))"}) {
        Formula f = parse(s);
        InitializedAutomaton D = simulate(from_formula(prepare(f)));
        EXPECT_TRUE(D.aut.disjunctive());
        EXPECT_TRUE(accepts_like(D.aut, D.init, f, testsupport::suite_a())) << s;
    }
}

TEST(Simulate, DisjunctiveInputStaysSmall) {
    InitializedAutomaton D = simulate(from_formula(prepare(phi(1))));
    InitializedAutomaton E = simulate(D);
    EXPECT_TRUE(E.aut.disjunctive());
    EXPECT_EQ(E.aut.size(), D.aut.size());
    EXPECT_TRUE(accepts_like(E.aut, E.init, phi(1), small_suite()));
}

TEST(Simulate, StateCapIsEnforced) {
    ::setenv("MUCALC_STATE_CAP", "2", 1);
    EXPECT_EQ(state_cap(), 2);
    EXPECT_THROW(simulate(from_formula(prepare(phi(6)))), ResourceError);
    ::unsetenv("MUCALC_STATE_CAP");
    EXPECT_EQ(state_cap(), 20000);
}

TEST(Linearize, IndependentEvenStates) {
    ModalAutomaton A;
    A.add(parse_onestep("<>0"), 0);
    A.add(parse_onestep("[]1"), 0);
    EXPECT_FALSE(is_linear(A));
    ModalAutomaton L = linearize(A);
    EXPECT_TRUE(is_linear(L));
    EXPECT_NE(L.prio[0], L.prio[1]);
    EXPECT_EQ(L.prio[0] % 2, 0);
    EXPECT_EQ(L.prio[1] % 2, 0);
}

TEST(Linearize, PreservesAcceptance) {
    for (int i : {3, 5, 6}) {
        InitializedAutomaton D = simulate(from_formula(prepare(phi(i))));
        ModalAutomaton L = linearize(D.aut);
        EXPECT_TRUE(is_linear(L));
        EXPECT_TRUE(accepts_like(L, D.init, phi(i), small_suite()));
        EXPECT_TRUE(is_linear(linearize(L)));
    }
}

TEST(ToFormula, SingleStates) {
    Formula mu_f = to_formula(one("p | <>0", 1), 0);
    EXPECT_EQ(mu_f->kind, Kind::Mu);
    EXPECT_TRUE(same_formula_semantics(mu_f, parse("mu x. p | <>x"), testsupport::suite_a()));
    Formula nu_f = to_formula(one("q & <>0", 0), 0);
    EXPECT_EQ(nu_f->kind, Kind::Nu);
    EXPECT_TRUE(same_formula_semantics(nu_f, phi(1), testsupport::suite_a()));
}

TEST(ToFormula, TwoStateChain) {
    ModalAutomaton A;
    A.add(parse_onestep("(p & <>1) | <>0"), 3);
    A.add(parse_onestep("q | []0"), 2);
    Formula f = to_formula(A, 0);
    EXPECT_TRUE(free_vars(f).size() <= 2);
    for (const auto& m : small_suite()) EXPECT_EQ(eval_naive(f, m), accepted_states(A, 0, m));
}

TEST(ToFormula, RoundTripOnCorpus) {
    for (const auto& s : testsupport::corpus30()) {
        Formula f = parse(s);
        Formula g = to_formula(simulate(from_formula(prepare(f))));
        EXPECT_TRUE(same_formula_semantics(f, g, small_suite())) << s << " vs " << to_string(g);
    }
}

TEST(Quotient, PreservesAcceptance) {
    for (int i = 0; i < 7; ++i) {
        InitializedAutomaton A = from_formula(prepare(phi(i)));
        InitializedAutomaton Q = quotient(A);
        EXPECT_LE(Q.aut.size(), A.aut.size());
        EXPECT_TRUE(accepts_like(Q.aut, Q.init, phi(i), small_suite()));
    }
    ModalAutomaton twins;
    twins.add(parse_onestep("p | <>1"), 1);
    twins.add(parse_onestep("p | <>0"), 1);
    EXPECT_EQ(bisimulation_classes(twins)[0], bisimulation_classes(twins)[1]);
}

TEST(TransformBot, Examples) {
    ModalAutomaton B = transform_bot(one("p | <>0", 1), "p");
    EXPECT_TRUE(sat1(OneStepModel{{}, 1, {{0}}}, B.theta[0]));
    EXPECT_FALSE(sat1(OneStepModel{{"p"}, 0, {}}, B.theta[0]));
    ModalAutomaton free = one("q & []0", 2);
    EXPECT_EQ(transform_bot(free, "p").theta[0], free.theta[0]);
    EXPECT_THROW(transform_bot(one("!p", 0), "p"), PreconditionError);
}

TEST(TransformBot, LawOnSmallSuite) {
    for (int i = 0; i < 7; ++i) {
        InitializedAutomaton A = from_formula(prepare(phi(i)));
        ModalAutomaton B = transform_bot(A.aut, "p");
        for (const auto& m : small_suite()) {
            KripkeModel empty = set_p(m, "p", m.empty_set());
            for (int a = 0; a < A.aut.size(); ++a) ASSERT_EQ(accepted_states(B, a, m), accepted_states(A.aut, a, empty));
        }
    }
}

TEST(TransformM, DropsNegatedLetter) {
    ModalAutomaton M = transform_M(one("!p & nabla{0}", 1), "p");
    EXPECT_EQ(to_string(M.theta[0]), "nabla{0}");
    EXPECT_TRUE(M.positive_in("p"));
}

TEST(TransformD, Example) {
    ModalAutomaton D = transform_D(one("<>0", 0), "p");
    ASSERT_EQ(D.size(), 2);
    EXPECT_EQ(D.prio[0], 1);
    EXPECT_TRUE(D.bipartite());
    EXPECT_TRUE(sat1(OneStepModel{{}, 1, {{1}}}, D.theta[0]));
    EXPECT_TRUE(sat1(OneStepModel{{}, 1, {{0}}}, D.theta[0]));
    EXPECT_FALSE(sat1(OneStepModel{{}, 0, {}}, D.theta[0]));
    EXPECT_TRUE(in_class(D, AutClass::D, "p"));
}

TEST(Transforms, OutputsAreInTheirClass) {
    for (int i = 0; i < 7; ++i) {
        InitializedAutomaton D = simulate(from_formula(prepare(phi(i))));
        ModalAutomaton M = transform_M(D.aut, "p");
        EXPECT_TRUE(M.disjunctive());
        EXPECT_TRUE(M.positive_in("p"));
        ModalAutomaton W = transform_W(M, "p"), B = transform_B(M, "p"), F = transform_F(M, "p"),
                       A = transform_A(M, "p"), Dd = transform_D(M, "p"), C = transform_D(W, "p");
        EXPECT_TRUE(in_class(W, AutClass::W, "p")) << i;
        EXPECT_TRUE(in_class(B, AutClass::B, "p")) << i;
        EXPECT_TRUE(in_class(F, AutClass::F, "p")) << i;
        EXPECT_TRUE(in_class(A, AutClass::A, "p")) << i;
        EXPECT_TRUE(in_class(Dd, AutClass::D, "p")) << i;
        EXPECT_TRUE(in_class(C, AutClass::C, "p")) << i;
        for (const auto* X : {&W, &B, &F, &A, &Dd, &C}) EXPECT_TRUE(closed_final_part(*X)) << i;
        EXPECT_FALSE(in_class(M, AutClass::W, "p"));
    }
}

TEST(Transforms, UniversalUsesOnlyBoxes) {
    InitializedAutomaton P = pipeline(phi(4), Fragment::U, "p");
    for (const auto& t : P.aut.theta) EXPECT_EQ(to_string(t).find("<>"), std::string::npos) << to_string(t);
}

TEST(Transforms, RejectNonDisjunctiveInput) {
    EXPECT_THROW(transform_W(one("<>0 & []0", 1), "p"), PreconditionError);
    EXPECT_THROW(transform_F(one("!p & nabla{0}", 1), "p"), PreconditionError);
}

TEST(Pipeline, StagesPreserveFragmentSemantics) {
    // ξ in fragment X: the pipeline automaton accepts exactly where ξ holds.
    struct Case {
        int phi;
        Fragment x;
    };
    for (Case c : {Case{3, Fragment::W}, Case{3, Fragment::D}, Case{3, Fragment::C}, Case{2, Fragment::F},
                   Case{1, Fragment::A}, Case{5, Fragment::B}, Case{4, Fragment::U}, Case{6, Fragment::M}}) {
        InitializedAutomaton P = pipeline(phi(c.phi), c.x, "p");
        EXPECT_TRUE(accepts_like(P.aut, P.init, phi(c.phi), small_suite())) << c.phi << fragment_name(c.x);
    }
}

TEST(Dump, RoundTrip) {
    for (Fragment x : {Fragment::M, Fragment::C, Fragment::U}) {
        InitializedAutomaton P = pipeline(phi(3), x, "p");
        InitializedAutomaton Q = parse_dump(dump(P));
        EXPECT_EQ(dump(Q), dump(P));
        EXPECT_EQ(Q.aut.final_part, P.aut.final_part);
    }
    EXPECT_THROW(parse_dump("states 2\ninitial 0\n0 1 p\n"), ParseError);
}
