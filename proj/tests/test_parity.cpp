#include <gtest/gtest.h>

#include <random>

#include "mucalc/graph.hpp"
#include "mucalc/parity.hpp"

using namespace mucalc;

namespace {

ParityGame single(Player who, int prio, bool loop) {
    ParityGame g;
    g.add(who, prio);
    if (loop) g.edge(0, 0);
    return g;
}

std::vector<bool> region_of(const Solution& s, Player p) {
    std::vector<bool> r(s.win_ex.size());
    for (std::size_t v = 0; v < r.size(); ++v) r[v] = s.wins(p, static_cast<int>(v));
    return r;
}

ParityGame random_game(std::mt19937& rng, int n, int max_prio, int max_out) {
    ParityGame g;
    std::uniform_int_distribution<int> pr(0, max_prio), pos(0, n - 1), deg(0, max_out), coin(0, 1);
    for (int v = 0; v < n; ++v) g.add(coin(rng) ? Player::Exists : Player::Forall, pr(rng));
    for (int v = 0; v < n; ++v) {
        int d = deg(rng);
        for (int i = 0; i < d; ++i) {
            int t = pos(rng);
            bool dup = false;
            for (int u : g.succ[v]) dup = dup || u == t;
            if (!dup) g.edge(v, t);
        }
    }
    return g;
}

}  // namespace

TEST(Solve, StuckExistsLoses) {
    Solution s = solve(single(Player::Exists, 0, false));
    EXPECT_FALSE(s.win_ex[0]);
}

TEST(Solve, EvenSelfLoop) { EXPECT_TRUE(solve(single(Player::Exists, 0, true)).win_ex[0]); }

TEST(Solve, OddSelfLoop) { EXPECT_FALSE(solve(single(Player::Exists, 1, true)).win_ex[0]); }

TEST(Solve, EmptyGame) {
    ParityGame g;
    EXPECT_TRUE(solve(g).win_ex.empty());
    EXPECT_TRUE(solve_bruteforce(g).win_ex.empty());
}

TEST(SolveBruteforce, ChainIntoStuckForall) {
    ParityGame g;
    for (int i = 0; i < 4; ++i) g.add(Player::Exists, 1);
    g.owner[3] = Player::Forall;
    for (int i = 0; i < 3; ++i) g.edge(i, i + 1);
    Solution s = solve_bruteforce(g);
    for (int i = 0; i < 4; ++i) EXPECT_TRUE(s.win_ex[i]);
}

TEST(SolveBruteforce, SizeGuard) {
    ParityGame g;
    for (int i = 0; i <= kBruteforceLimit; ++i) g.add(Player::Exists, 0);
    EXPECT_ANY_THROW(solve_bruteforce(g));
}

TEST(Solve, ChoiceBetweenCycles) {
    // ∃ at 0 chooses between an odd loop (1) and an even loop (2).
    ParityGame g;
    g.add(Player::Exists, 0);
    g.add(Player::Exists, 1);
    g.add(Player::Exists, 2);
    g.edge(0, 1);
    g.edge(0, 2);
    g.edge(1, 1);
    g.edge(2, 2);
    Solution s = solve(g);
    EXPECT_TRUE(s.win_ex[0]);
    EXPECT_EQ(s.strategy_ex[0], 2);
    EXPECT_FALSE(s.win_ex[1]);
    g.owner[0] = Player::Forall;
    EXPECT_FALSE(solve(g).win_ex[0]);
}

TEST(VerifyStrategy, RejectsCorruptedStrategy) {
    ParityGame g;
    g.add(Player::Exists, 0);
    g.add(Player::Exists, 1);
    g.add(Player::Exists, 2);
    g.edge(0, 1);
    g.edge(0, 2);
    g.edge(1, 1);
    g.edge(2, 2);
    std::vector<bool> all(3, true);
    all[1] = false;
    EXPECT_TRUE(verify_strategy(g, Player::Exists, {2, -1, 2}, all));
    EXPECT_FALSE(verify_strategy(g, Player::Exists, {1, 1, 2}, {true, true, true}));
}

TEST(VerifyStrategy, NoExistsPositions) {
    ParityGame g;
    g.add(Player::Forall, 2);
    g.add(Player::Forall, 1);
    g.edge(0, 0);
    g.edge(1, 1);
    EXPECT_TRUE(verify_strategy(g, Player::Exists, {-1, -1}, {true, false}));
    EXPECT_FALSE(verify_strategy(g, Player::Exists, {-1, -1}, {true, true}));
}

TEST(Solve, AgreesWithBruteforceOnRandomGames) {
    std::mt19937 rng(42);
    for (int i = 0; i < 3000; ++i) {
        ParityGame g = random_game(rng, 1 + i % 8, 4, 3);
        Solution a = solve(g), b = solve_bruteforce(g);
        ASSERT_EQ(a.win_ex, b.win_ex) << dump(g);
        EXPECT_TRUE(verify_strategy(g, Player::Exists, a.strategy_ex, region_of(a, Player::Exists))) << dump(g);
        EXPECT_TRUE(verify_strategy(g, Player::Forall, a.strategy_fa, region_of(a, Player::Forall))) << dump(g);
    }
}

TEST(Solve, Deterministic) {
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        ParityGame g = random_game(rng, 10, 5, 3);
        Solution a = solve(g), b = solve(g);
        EXPECT_EQ(a.win_ex, b.win_ex);
        EXPECT_EQ(a.strategy_ex, b.strategy_ex);
        EXPECT_EQ(a.strategy_fa, b.strategy_fa);
    }
}

TEST(Dual, SwapsWinners) {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        ParityGame g = random_game(rng, 7, 4, 2);
        Solution a = solve(g), b = solve(dual(g));
        for (int v = 0; v < g.size(); ++v) EXPECT_NE(a.win_ex[v], b.win_ex[v]);
    }
}

TEST(Graph, SccOrderSinksFirst) {
    std::vector<std::vector<int>> succ = {{1}, {0, 2}, {2}, {}};
    Sccs s = strongly_connected(succ);
    EXPECT_EQ(s.count, 3);
    EXPECT_EQ(s.comp[0], s.comp[1]);
    EXPECT_LT(s.comp[2], s.comp[0]);
    auto cyc = cyclic_components(succ, s);
    EXPECT_TRUE(cyc[s.comp[0]]);
    EXPECT_TRUE(cyc[s.comp[2]]);
    EXPECT_FALSE(cyc[s.comp[3]]);
    auto r = reachable_from(succ, {false, false, true, false});
    EXPECT_EQ(r, std::vector<bool>({false, false, true, false}));
}
