#include <gtest/gtest.h>

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"
#include "support.hpp"

using namespace mucalc;
using testsupport::phi;

namespace {

bool same_on_models(const Formula& a, const Formula& b, int max_states, const std::vector<std::string>& props) {
    bool ok = true;
    enumerate_structures(max_states, props, [&](const KripkeModel& m) {
        ok = eval_naive(a, m) == eval_naive(b, m);
        return ok;
    });
    return ok;
}

bool complement_on_models(const Formula& a, const Formula& b, int max_states, const std::vector<std::string>& props) {
    bool ok = true;
    enumerate_structures(max_states, props, [&](const KripkeModel& m) {
        StateSet x = eval_naive(a, m), y = eval_naive(b, m);
        for (int s = 0; s < m.n && ok; ++s) ok = x[s] != y[s];
        return ok;
    });
    return ok;
}

}  // namespace

TEST(Parse, GrammarCases) {
    EXPECT_EQ(parse("p & <>q"), conj(prop("p"), dia(prop("q"))));
    EXPECT_EQ(parse("mu x. p | <><>x"), mu("x", disj(prop("p"), dia(dia(prop("x"))))));
    EXPECT_EQ(parse("[]p"), box(prop("p")));
    EXPECT_EQ(parse("tt"), top());
    EXPECT_EQ(parse("ff"), bot());
    EXPECT_EQ(parse("!p"), nprop("p"));
}

TEST(Parse, HashConsing) {
    EXPECT_EQ(parse("p & q").get(), parse("(p & q)").get());
    EXPECT_NE(parse("p & q"), parse("q & p"));
}

TEST(Parse, BinderScopeExtendsRight) {
    EXPECT_EQ(parse("mu x. p | x"), mu("x", disj(prop("p"), prop("x"))));
}

TEST(Parse, RejectsNegativeBoundVariable) {
    EXPECT_THROW(parse("mu x. !x"), NegativeBoundVariable);
    EXPECT_THROW(parse("nu x. p & !(q | <>x)"), NegativeBoundVariable);
    EXPECT_NO_THROW(parse("mu x. !!x"));
}

TEST(Parse, SyntaxErrorsCarryPosition) {
    try {
        parse("p & ");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GE(e.position, 3u);
    }
    EXPECT_THROW(parse("mu . p"), ParseError);
    EXPECT_THROW(parse("(p"), ParseError);
    EXPECT_THROW(parse("p q"), ParseError);
}

TEST(Parse, RoundTripsThroughPrinter) {
    for (const auto& s : testsupport::corpus30()) {
        Formula f = parse(s);
        EXPECT_EQ(parse(to_string(f)), f) << s;
    }
    testsupport::FormulaGen gen(7);
    for (int i = 0; i < 500; ++i) {
        Formula f = gen.closed(5);
        EXPECT_EQ(parse(to_string(f)), f) << to_string(f);
    }
}

TEST(Nnf, Examples) {
    EXPECT_EQ(to_nnf(parse("!(p | q)")), parse("!p & !q"));
    EXPECT_EQ(to_nnf(parse("!!p")), prop("p"));
    EXPECT_EQ(to_nnf(parse("!(mu x. p | <>x)")), parse("nu x. !p & []x"));
}

TEST(Nnf, PreservesSemantics) {
    testsupport::FormulaGen gen(11);
    for (int i = 0; i < 60; ++i) {
        Formula f = gen.closed(4);
        Formula g = to_nnf(f);
        EXPECT_TRUE(g->nnf);
        EXPECT_TRUE(same_on_models(f, g, 2, {"p", "q"})) << to_string(f);
    }
}

TEST(Negate, Examples) {
    EXPECT_EQ(negate(prop("p")), nprop("p"));
    EXPECT_EQ(negate(top()), bot());
    EXPECT_EQ(negate(parse("nu y. q & <>y")), parse("mu y. !q | []y"));
    EXPECT_TRUE(complement_on_models(parse("nu y. q & <>y"), parse("mu y. !q | []y"), 3, {"q"}));
}

TEST(Negate, IsComplementOnCorpus) {
    for (const auto& s : testsupport::corpus30()) {
        Formula f = to_nnf(parse(s));
        EXPECT_TRUE(complement_on_models(f, negate(f), 2, {"p", "q"})) << s;
    }
}

TEST(Negate, RequiresNnf) { EXPECT_THROW(negate(neg(conj(prop("p"), prop("q")))), PreconditionError); }

TEST(WellName, RenamesRepeatedBinder) {
    Formula f = parse("(mu x. p | <>x) & (mu x. q | <>x)");
    EXPECT_FALSE(is_well_named(f));
    Formula g = well_name(f);
    EXPECT_TRUE(is_well_named(g));
    EXPECT_EQ(g, parse("(mu x. p | <>x) & (mu x1. q | <>x1)"));
}

TEST(WellName, IdempotentOnWellNamed) {
    Formula f = phi(5);
    EXPECT_TRUE(is_well_named(f));
    EXPECT_EQ(well_name(f), f);
}

TEST(WellName, NestedSameName) {
    Formula f = parse("mu x. p | <>(mu x. x)");
    Formula g = well_name(f);
    EXPECT_TRUE(is_well_named(g));
    EXPECT_EQ(bound_vars(g).size(), 2u);
    EXPECT_TRUE(same_on_models(f, g, 3, {"p"}));
}

TEST(Guard, Examples) {
    EXPECT_EQ(guard(parse("mu x. p | x")), parse("mu x. p"));
    Formula g = parse("mu x. p | <>x");
    EXPECT_TRUE(is_guarded(g));
    EXPECT_EQ(guard(g), g);
    EXPECT_EQ(guard(parse("nu x. x")), top());
    EXPECT_EQ(guard(parse("mu x. x")), bot());
}

TEST(Guard, PreservesSemantics) {
    for (const char* s : {"mu x. p | x", "nu x. (p & x) | <>x", "mu x. nu y. (x & q) | (p & <>y)", "nu x. mu y. x | y | <>p"}) {
        Formula f = to_nnf(parse(s));
        Formula g = guard(f);
        EXPECT_TRUE(is_guarded(g)) << s;
        EXPECT_TRUE(same_on_models(f, g, 3, {"p", "q"})) << s;
    }
}

TEST(Substitute, Examples) {
    EXPECT_EQ(substitute(parse("p | x"), {{"x", prop("q")}}), parse("p | q"));
    EXPECT_EQ(substitute(parse("mu y. x | <>y"), {{"x", parse("<>y")}}), parse("mu y1. <>y | <>y1"));
    Formula f = phi(6);
    EXPECT_EQ(substitute(f, {{"x", prop("x")}}), f);
}

TEST(Active, Examples) {
    Formula xi = phi(2);
    for (const auto& [path, sub] : subformula_occurrences(xi)) {
        if (sub == phi(1)) {
            EXPECT_EQ(active(xi, path), std::set<std::string>({"q"}));
        }
    }
    Formula f = phi(3);
    for (const auto& [path, sub] : subformula_occurrences(f)) {
        if (sub->kind == Kind::Prop && sub->name == "x") {
            EXPECT_EQ(active(f, path), std::set<std::string>({"p"}));
        }
    }
}

TEST(DependencyOrder, Examples) {
    DependencyOrder d5 = dependency_order(phi(5));
    EXPECT_TRUE(d5.lt("x", "y"));
    EXPECT_FALSE(d5.lt("y", "x"));
    EXPECT_TRUE(dependency_order(phi(3)).less.empty());
    DependencyOrder ind = dependency_order(parse("(mu x. <>x) & (mu z. <>z)"));
    EXPECT_FALSE(ind.lt("x", "z"));
    EXPECT_FALSE(ind.lt("z", "x"));
}

TEST(FreeVars, OpenFormulas) {
    EXPECT_EQ(free_vars(parse("p & mu x. q | <>x")), std::set<std::string>({"p", "q"}));
    EXPECT_TRUE(free_vars(parse("mu x. <>x")).empty());
}

TEST(Fragment, NamesRoundTrip) {
    for (Fragment f : {Fragment::M, Fragment::W, Fragment::D, Fragment::B, Fragment::C, Fragment::F, Fragment::A,
                       Fragment::U}) {
        EXPECT_EQ(fragment_from_name(fragment_name(f)), f);
    }
    EXPECT_FALSE(fragment_from_name("Z").has_value());
}

TEST(Fragment, CorpusTable) {
    // rows: φ0..φ6, columns: M W D B C F A U
    const char* table[] = {
        "11111111", "11111010", "11111110", "11111110", "10100001", "11010000", "11101000",
    };
    const Fragment cols[] = {Fragment::M, Fragment::W, Fragment::D, Fragment::B,
                             Fragment::C, Fragment::F, Fragment::A, Fragment::U};
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 8; ++j)
            EXPECT_EQ(in_fragment(phi(i), cols[j], "p"), table[i][j] == '1')
                << "phi" << i << " " << fragment_name(cols[j]);
}

TEST(Fragment, Examples) {
    EXPECT_FALSE(in_fragment(phi(4), Fragment::W, "p"));
    EXPECT_FALSE(in_fragment(phi(5), Fragment::D, "p"));
    EXPECT_TRUE(in_fragment(phi(1), Fragment::A, "p"));
    EXPECT_FALSE(in_fragment(phi(1), Fragment::F, "p"));
    EXPECT_FALSE(in_fragment(parse("!p"), Fragment::M, "p"));
}
