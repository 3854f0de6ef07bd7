#pragma once

#include <string>
#include <vector>

namespace mucalc {

enum class Player { Exists, Forall };

inline Player opponent(Player p) { return p == Player::Exists ? Player::Forall : Player::Exists; }

// Max-parity game: ∃ wins an infinite play iff the largest priority seen
// infinitely often is even.  A player with no move loses.
struct ParityGame {
    std::vector<Player> owner;
    std::vector<std::vector<int>> succ;
    std::vector<int> prio;

    int size() const { return static_cast<int>(owner.size()); }
    int add(Player who, int priority);
    void edge(int from, int to) { succ.at(from).push_back(to); }
};

struct Solution {
    std::vector<bool> win_ex;     // complement is ∀'s region
    std::vector<int> strategy_ex;  // -1 where undefined
    std::vector<int> strategy_fa;

    bool wins(Player p, int v) const { return p == Player::Exists ? win_ex[v] : !win_ex[v]; }
};

Solution solve(const ParityGame& g);

inline constexpr int kBruteforceLimit = 12;
Solution solve_bruteforce(const ParityGame& g);

// Region given as a membership vector; strategy entries -1 mean "no choice".
bool verify_strategy(const ParityGame& g, Player player, const std::vector<int>& strategy,
                     const std::vector<bool>& region);

ParityGame dual(const ParityGame& g);

std::string dump(const ParityGame& g);

}  // namespace mucalc
