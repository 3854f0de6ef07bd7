#include <gtest/gtest.h>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"
#include "mucalc/games.hpp"
#include "support.hpp"

using namespace mucalc;

namespace {

KripkeModel loop1() {
    KripkeModel m(1);
    m.add_edge(0, 0);
    return m;
}

ModalAutomaton single_state(const std::string& theta, int prio) {
    ModalAutomaton A;
    A.add(parse_onestep(theta), prio);
    return A;
}

}  // namespace

TEST(VariablePriorities, ParityAndOrder) {
    auto p5 = variable_priorities(testsupport::phi(5));
    EXPECT_EQ(p5.at("x") % 2, 1);
    EXPECT_EQ(p5.at("y") % 2, 0);
    EXPECT_LT(p5.at("x"), p5.at("y"));
    auto p3 = variable_priorities(testsupport::phi(3));
    EXPECT_EQ(p3.at("x") % 2, 1);
    Formula f = parse("nu x. mu y. nu z. (p & <>x) | (q & <>y) | []z");
    auto pz = variable_priorities(f);
    EXPECT_LT(pz.at("z"), pz.at("y"));
    EXPECT_LT(pz.at("y"), pz.at("x"));
}

TEST(EvaluationGame, LiteralIsForallDeadEnd) {
    KripkeModel m(1);
    m.set_true("p", 0);
    Formula f = parse("p");
    EvaluationGame g = evaluation_game(f, m);
    int v = g.position(f, 0);
    EXPECT_EQ(g.game.owner[v], Player::Forall);
    EXPECT_TRUE(g.game.succ[v].empty());
    EXPECT_TRUE(solve(g.game).win_ex[v]);
}

TEST(EvaluationGame, LoopCycles) {
    Formula nu_f = parse("nu x. <>x");
    EvaluationGame g = evaluation_game(nu_f, loop1());
    EXPECT_TRUE(solve(g.game).win_ex[g.position(nu_f, 0)]);
    Formula mu_f = parse("mu x. <>x");
    EvaluationGame h = evaluation_game(mu_f, loop1());
    EXPECT_FALSE(solve(h.game).win_ex[h.position(mu_f, 0)]);
}

TEST(EvaluationGame, RequiresNormalForm) {
    EXPECT_THROW(evaluation_game(parse("!(p & q)"), loop1()), PreconditionError);
    EXPECT_THROW(evaluation_game(parse("(mu x. <>x) | (mu x. []x)"), loop1()), PreconditionError);
}

TEST(ModelCheck, Examples) {
    KripkeModel m(3);
    for (int s = 0; s < 3; ++s) {
        m.add_edge(s, (s + 1) % 3);
        m.set_true("q", s);
    }
    EXPECT_EQ(model_check_all(testsupport::phi(1), m), StateSet({true, true, true}));
    for (int s = 0; s < 3; ++s) EXPECT_TRUE(model_check(parse("tt"), m, s));
}

TEST(ModelCheck, AgreesWithEvalNaiveOnSmallSuite) {
    auto ms = testsupport::structures(2, {"p", "q"});
    for (const auto& s : testsupport::corpus30()) {
        Formula f = parse(s);
        for (const auto& m : ms) ASSERT_EQ(model_check_all(f, m), eval_naive(f, m)) << s << " " << model_to_json(m);
    }
}

TEST(ModelCheck, AgreesWithEvalNaiveOnRandomPairs) {
    testsupport::FormulaGen gen(99);
    for (int i = 0; i < 1500; ++i) {
        Formula f = gen.closed(1 + i % 5);
        KripkeModel m = testsupport::random_model(gen.rng(), 6);
        ASSERT_EQ(model_check_all(f, m), eval_naive(f, m)) << to_string(f) << " " << model_to_json(m);
    }
}

TEST(AcceptanceGame, SingleStateLoop) {
    EXPECT_TRUE(accepts(single_state("<>0", 0), 0, loop1(), 0));
    EXPECT_FALSE(accepts(single_state("<>0", 1), 0, loop1(), 0));
    AcceptanceGame g = acceptance_game(single_state("<>0", 0), loop1());
    EXPECT_EQ(g.game.owner[g.basic(0, 0)], Player::Exists);
}

TEST(AcceptanceGame, BasicPositionCarriesPriority) {
    KripkeModel m(2);
    m.add_edge(0, 1);
    AcceptanceGame g = acceptance_game(single_state("p | <>0", 3), m);
    EXPECT_EQ(g.game.prio[g.basic(0, 1)], 3);
}

TEST(AcceptanceGame, GadgetMatchesExplicitMarkings) {
    std::vector<InitializedAutomaton> auts;
    for (const char* s : {"p", "mu x. p | <><>x", "nu y. mu x. (p & <>y) | <>x", "mu x. p | (<>(q & x) & <>(!q & x))",
                          "p & nu y. q & <>y", "mu x. p | [][]x"}) {
        InitializedAutomaton A = from_formula(prepare(parse(s)));
        if (A.aut.size() <= 3) auts.push_back(A);
        auts.push_back(simulate(A));
    }
    for (const char* s : {"<>0 & [](1 | 2)", "q | (<>1 & <>(0 & 2))", "[]2 & <>0"}) {
        ModalAutomaton A;
        A.add(parse_onestep(s), 2);
        A.add(parse_onestep("p | <>0"), 1);
        A.add(parse_onestep("(q & []1) | (!q & <>2)"), 0);
        auts.push_back({A, 0});
    }
    auto ms = testsupport::structures(2, {"p", "q"});
    int compared = 0;
    for (const auto& A : auts) {
        if (A.aut.size() > 3) continue;
        for (const auto& m : ms) {
            AcceptanceGame g = acceptance_game(A.aut, m);
            AcceptanceGame h = acceptance_game_markings(A.aut, m);
            Solution sg = solve(g.game), sh = solve(h.game);
            for (int a = 0; a < A.aut.size(); ++a)
                for (int s = 0; s < m.n; ++s)
                    ASSERT_EQ(sg.win_ex[g.basic(a, s)], sh.win_ex[h.basic(a, s)]) << dump(A) << model_to_json(m);
            ++compared;
        }
    }
    EXPECT_GT(compared, 1000);
}

TEST(AcceptanceGame, GadgetMatchesMarkingsOnBranchingThree) {
    ModalAutomaton A;
    A.add(parse_onestep("<>1 & [](0 | 2)"), 1);
    A.add(parse_onestep("p | <>0"), 2);
    A.add(parse_onestep("[]1 & <>(2 & 0)"), 0);
    KripkeModel m(4);
    for (int t = 1; t < 4; ++t) m.add_edge(0, t);
    m.add_edge(1, 0);
    m.add_edge(2, 2);
    m.add_edge(3, 1);
    m.set_true("p", 2);
    for (int mask = 0; mask < 16; ++mask) {
        KripkeModel k = m;
        k.val["p"] = k.empty_set();
        for (int s = 0; s < 4; ++s)
            if (mask >> s & 1) k.set_true("p", s);
        AcceptanceGame g = acceptance_game(A, k), h = acceptance_game_markings(A, k);
        Solution sg = solve(g.game), sh = solve(h.game);
        for (int a = 0; a < 3; ++a)
            for (int s = 0; s < 4; ++s) EXPECT_EQ(sg.win_ex[g.basic(a, s)], sh.win_ex[h.basic(a, s)]);
    }
}
