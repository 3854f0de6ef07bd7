#include <gtest/gtest.h>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"
#include "mucalc/oracle.hpp"
#include "support.hpp"

using namespace mucalc;
using testsupport::phi;

namespace {

bool everywhere(const Formula& f, bool (*check)(const Formula&, const std::string&, const KripkeModel&, int),
                int max_states) {
    bool ok = true;
    enumerate_structures(max_states, {"p", "q"}, [&](const KripkeModel& m) {
        for (int s = 0; s < m.n && ok; ++s) ok = check(f, "p", m, s);
        return ok;
    });
    return ok;
}

const char* kSeedCorpus = R"(# the seven example formulas
phi0 = p ; holds M W D B C F A U
phi1 = nu y. q & <>y ; holds M W D B C A
phi2 = p & nu y. q & <>y ; holds M W D B C F A
phi3 = mu x. p | <><>x ; holds M W D B C F A
phi4 = mu x. p | [][]x ; holds M D U
phi5 = nu y. mu x. (p & <>y) | <>x ; holds M W B
phi6 = mu x. p | (<>(q & x) & <>(!q & x)) ; holds M W D C
)";

}  // namespace

TEST(CheckMonotone, Examples) {
    EXPECT_TRUE(everywhere(parse("p"), check_monotone_on, 2));
    EXPECT_TRUE(everywhere(phi(3), check_monotone_on, 3));
    EXPECT_FALSE(everywhere(parse("!p"), check_monotone_on, 1));
}

TEST(CheckAdditive, Examples) {
    EXPECT_TRUE(everywhere(parse("<>p"), check_fully_additive_on, 3));
    EXPECT_TRUE(everywhere(phi(1), check_completely_additive_on, 2));
    EXPECT_FALSE(everywhere(phi(1), check_fully_additive_on, 1));
    EXPECT_TRUE(everywhere(parse("ff"), check_fully_additive_on, 2));
    EXPECT_TRUE(everywhere(parse("ff"), check_completely_additive_on, 2));
    EXPECT_FALSE(everywhere(parse("[]p"), check_completely_additive_on, 2));
}

TEST(CheckNormal, Examples) {
    EXPECT_TRUE(everywhere(parse("p"), check_normal_on, 2));
    EXPECT_FALSE(everywhere(parse("tt"), check_normal_on, 1));
    for (int i : {0, 2, 3}) EXPECT_TRUE(everywhere(phi(i), check_normal_on, 2)) << i;
}

TEST(CheckSubstructures, Examples) {
    bool ok = true;
    enumerate_structures(3, {"p", "q"}, [&](const KripkeModel& m) {
        for (int s = 0; s < m.n && ok; ++s) ok = check_substructures_on(phi(4), m, s);
        return ok;
    });
    EXPECT_TRUE(ok);
    EXPECT_TRUE(find_counterexample(parse("<>p"), PropertyId::PreservedUnderSubstructures, "p", 2).has_value());
}

TEST(SemanticCheck, RefusesFiniteModelTrivialProperties) {
    KripkeModel m(1);
    for (PropertyId p : {PropertyId::FiniteWidth, PropertyId::FiniteDepth, PropertyId::SingleBranch,
                         PropertyId::Continuous}) {
        EXPECT_FALSE(semantically_checkable(p));
        EXPECT_THROW(semantic_check(parse("p"), p, "p", m, 0), PreconditionError);
    }
    EXPECT_TRUE(semantically_checkable(PropertyId::Monotone));
}

TEST(FindCounterexample, IsMinimal) {
    auto c = find_counterexample(parse("!p"), PropertyId::Monotone, "p", 3);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->n, 1);
    EXPECT_FALSE(find_counterexample(phi(3), PropertyId::Monotone, "p", 2).has_value());
}

TEST(ParseCorpus, Format) {
    auto c = parse_corpus(kSeedCorpus);
    ASSERT_EQ(c.size(), 7u);
    EXPECT_EQ(c[4].name, "phi4");
    EXPECT_EQ(c[4].formula, phi(4));
    ASSERT_TRUE(c[4].holds.has_value());
    EXPECT_EQ(*c[4].holds, std::set<Fragment>({Fragment::M, Fragment::D, Fragment::U}));
    auto bare = parse_corpus("<>p\n\n# nothing\n");
    ASSERT_EQ(bare.size(), 1u);
    EXPECT_FALSE(bare[0].holds.has_value());
    EXPECT_THROW(parse_corpus("p ; holds Q"), ParseError);
}

TEST(CrossValidate, EmptyCorpus) {
    Report r = cross_validate({}, OracleBounds{});
    EXPECT_TRUE(r.checks.empty());
    EXPECT_TRUE(r.all_pass());
}

TEST(CrossValidate, SeedCorpusPasses) {
    Report r = cross_validate(parse_corpus(kSeedCorpus), OracleBounds{2, "p"});
    EXPECT_TRUE(r.all_pass()) << r.text();
    EXPECT_GT(r.checks.size(), 7u * 8u);
    EXPECT_EQ(r.text(), cross_validate(parse_corpus(kSeedCorpus), OracleBounds{2, "p"}).text());
}

TEST(CrossValidate, MutantIsCaught) {
    set_mutation(Mutation{true, false});
    Report r = cross_validate(parse_corpus(kSeedCorpus), OracleBounds{1, "p"});
    set_mutation(Mutation{});
    EXPECT_GE(r.failures(), 1);
    EXPECT_NE(r.text().find("verdict=FAIL"), std::string::npos);
}
