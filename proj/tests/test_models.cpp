#include <gtest/gtest.h>

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"
#include "support.hpp"

using namespace mucalc;

namespace {

KripkeModel loop1() {
    KripkeModel m(1);
    m.add_edge(0, 0);
    return m;
}

}  // namespace

TEST(EvalNaive, EvenDistanceAtPoint) {
    KripkeModel m(1);
    m.set_true("p", 0);
    EXPECT_EQ(eval_naive(testsupport::phi(3), m), StateSet({true}));
}

TEST(EvalNaive, EvenDistanceOnChain) {
    KripkeModel m(4);
    for (int s = 0; s < 3; ++s) m.add_edge(s, s + 1);
    m.set_true("p", 3);
    EXPECT_EQ(eval_naive(testsupport::phi(3), m), StateSet({false, true, false, true}));
}

TEST(EvalNaive, FixpointsOnLoop) {
    KripkeModel m = loop1();
    EXPECT_TRUE(eval_at(parse("nu x. <>x"), m, 0));
    EXPECT_FALSE(eval_at(parse("mu x. <>x"), m, 0));
    EXPECT_FALSE(eval_at(parse("mu x. x"), m, 0));
    EXPECT_TRUE(eval_at(parse("nu x. x"), m, 0));
}

TEST(EvalNaive, UnsetLetterIsFalse) {
    KripkeModel m(1);
    EXPECT_FALSE(eval_at(parse("p"), m, 0));
}

TEST(SetP, ReplacesValuation) {
    KripkeModel m(3);
    m.set_true("p", 0);
    KripkeModel n = set_p(m, "p", StateSet({false, true, true}));
    EXPECT_FALSE(n.holds("p", 0));
    EXPECT_TRUE(n.holds("p", 1));
    EXPECT_TRUE(n.holds("p", 2));
    KripkeModel r = restrict_p(m, "p", StateSet({false, true, true}));
    EXPECT_FALSE(r.holds("p", 0));
    EXPECT_FALSE(r.holds("p", 1));
}

TEST(Unravel, DepthZeroIsRoot) {
    KripkeModel m = loop1();
    m.set_true("q", 0);
    KripkeModel u = unravel(m, 0, 0, 1);
    EXPECT_EQ(u.n, 1);
    EXPECT_TRUE(u.holds("q", 0));
    EXPECT_TRUE(u.succ[0].empty());
}

TEST(Unravel, KappaTwoBinaryTree) {
    KripkeModel u = unravel(loop1(), 0, 2, 2);
    EXPECT_EQ(u.n, 7);
}

TEST(Unravel, PlainUnravellingIsBisimilarUpToDepth) {
    KripkeModel m(2);
    m.add_edge(0, 1);
    m.add_edge(1, 0);
    m.set_true("p", 1);
    KripkeModel u = unravel(m, 0, 3, 1);
    EXPECT_EQ(u.n, 4);
    EXPECT_EQ(eval_at(parse("<>(p & <>(!p & <>p))"), u, *u.point), true);
}

TEST(Bisimilar, Examples) {
    KripkeModel m = loop1();
    EXPECT_TRUE(bisimilar(m, 0, m, 0));
    KripkeModel two(2);
    two.add_edge(0, 1);
    two.add_edge(1, 0);
    EXPECT_TRUE(bisimilar(m, 0, two, 1));
    KripkeModel a(1), b(1);
    a.set_true("p", 0);
    EXPECT_FALSE(bisimilar(a, 0, b, 0));
}

TEST(Bisimilar, InvarianceOfFormulas) {
    auto ms = testsupport::structures(2, {"p"});
    for (const auto& s : {"nu y. mu x. (p & <>y) | <>x", "mu x. p | [][]x", "<>p & []!p"}) {
        Formula f = parse(s);
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = 0; j < ms.size(); j += 3)
                for (int u = 0; u < ms[i].n; ++u)
                    for (int v = 0; v < ms[j].n; ++v)
                        if (bisimilar(ms[i], u, ms[j], v)) EXPECT_EQ(eval_at(f, ms[i], u), eval_at(f, ms[j], v));
    }
}

TEST(Enumerate, Counts) {
    int one = 0;
    enumerate_models(1, {"p"}, [&](const KripkeModel&) {
        ++one;
        return true;
    });
    EXPECT_EQ(one, 4);
    int zero = 0;
    enumerate_models(0, {"p"}, [&](const KripkeModel&) {
        ++zero;
        return true;
    });
    EXPECT_EQ(zero, 0);
    // 1 state: 2 relations, 1 point. 2 states: 16 relations, 2 points.
    int two = 0;
    enumerate_models(2, {}, [&](const KripkeModel&) {
        ++two;
        return true;
    });
    EXPECT_EQ(two, 2 + 16 * 2);
    EXPECT_EQ(testsupport::suite_a().size(), 33032u);
}

TEST(Enumerate, StopsEarly) {
    int seen = 0;
    enumerate_models(3, {"p"}, [&](const KripkeModel&) { return ++seen < 5; });
    EXPECT_EQ(seen, 5);
}

TEST(Enumerate, BoundIsGuarded) { EXPECT_THROW(all_models(kEnumerationBound + 1, {}), ResourceError); }

TEST(Json, RoundTrip) {
    KripkeModel m(3);
    m.add_edge(0, 1);
    m.add_edge(1, 2);
    m.add_edge(2, 2);
    m.set_true("p", 1);
    m.point = 0;
    EXPECT_EQ(model_from_json(model_to_json(m)), m);
    EXPECT_THROW(model_from_json("{\"states\": 2, \"edges\": [[0, 5]]}"), Error);
}
