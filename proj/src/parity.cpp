#include "mucalc/parity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "mucalc/error.hpp"
#include "mucalc/graph.hpp"

namespace mucalc {

int ParityGame::add(Player who, int priority) {
    owner.push_back(who);
    succ.emplace_back();
    prio.push_back(priority);
    return size() - 1;
}

namespace {

using Mask = std::vector<bool>;

class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : g_(g), n_(g.size()), pred_(n_), rank_(n_, -1), count_(n_, 0) {
        for (int v = 0; v < n_; ++v)
            for (int w : g.succ[v]) pred_[w].push_back(v);
        sol_.win_ex.assign(n_, false);
        sol_.strategy_ex.assign(n_, -1);
        sol_.strategy_fa.assign(n_, -1);
    }

    Solution run() {
        Mask all(n_, true);
        Mask ex_dead(n_, false), fa_dead(n_, false);
        for (int v = 0; v < n_; ++v)
            if (g_.succ[v].empty()) (g_.owner[v] == Player::Exists ? ex_dead : fa_dead)[v] = true;
        // ∃ stuck → ∀ wins; ∀ stuck → ∃ wins.
        Mask a1 = attract(Player::Forall, ex_dead, all);
        Mask rest = minus(all, a1);
        Mask a2 = attract(Player::Exists, and_(fa_dead, rest), rest);
        Mask core = minus(rest, a2);
        for (int v = 0; v < n_; ++v) sol_.win_ex[v] = a2[v];
        auto [wex, wfa] = zielonka(core);
        for (int v = 0; v < n_; ++v)
            if (wex[v]) sol_.win_ex[v] = true;
        for (int v = 0; v < n_; ++v) {
            bool ex = sol_.win_ex[v];
            if (!(g_.owner[v] == Player::Exists && ex)) sol_.strategy_ex[v] = -1;
            if (!(g_.owner[v] == Player::Forall && !ex)) sol_.strategy_fa[v] = -1;
        }
        return sol_;
    }

private:
    const ParityGame& g_;
    int n_;
    std::vector<std::vector<int>> pred_;
    std::vector<int> rank_;
    std::vector<int> count_;
    Solution sol_;

    static Mask minus(const Mask& a, const Mask& b) {
        Mask r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] && !b[i];
        return r;
    }
    static Mask and_(const Mask& a, const Mask& b) {
        Mask r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] && b[i];
        return r;
    }
    static bool empty(const Mask& a) { return std::find(a.begin(), a.end(), true) == a.end(); }

    std::vector<int>& strat(Player p) { return p == Player::Exists ? sol_.strategy_ex : sol_.strategy_fa; }

    // Attractor of `target` for player p inside subgame `sub`; records
    // attractor strategies (smallest successor of lower rank).
    Mask attract(Player p, const Mask& target, const Mask& sub) {
        Mask in(n_, false);
        std::deque<int> queue;
        for (int v = 0; v < n_; ++v) {
            if (!sub[v]) continue;
            rank_[v] = -1;
            count_[v] = 0;
            for (int w : g_.succ[v])
                if (sub[w]) ++count_[v];
            if (target[v]) {
                in[v] = true;
                rank_[v] = 0;
                queue.push_back(v);
            }
        }
        while (!queue.empty()) {
            int w = queue.front();
            queue.pop_front();
            for (int v : pred_[w]) {
                if (!sub[v] || in[v]) continue;
                if (g_.owner[v] == p || --count_[v] == 0) {
                    in[v] = true;
                    rank_[v] = rank_[w] + 1;
                    queue.push_back(v);
                }
            }
        }
        auto& s = strat(p);
        for (int v = 0; v < n_; ++v) {
            if (!in[v] || rank_[v] == 0 || g_.owner[v] != p) continue;
            int best = -1;
            for (int w : g_.succ[v])
                if (sub[w] && in[w] && rank_[w] < rank_[v] && (best < 0 || w < best)) best = w;
            s[v] = best;
        }
        return in;
    }

    std::pair<Mask, Mask> zielonka(const Mask& sub) {
        Mask none(n_, false);
        if (empty(sub)) return {none, none};
        int d = -1;
        for (int v = 0; v < n_; ++v)
            if (sub[v]) d = std::max(d, g_.prio[v]);
        Player p = d % 2 == 0 ? Player::Exists : Player::Forall;
        Player o = opponent(p);
        Mask top(n_, false);
        for (int v = 0; v < n_; ++v) top[v] = sub[v] && g_.prio[v] == d;
        Mask a = attract(p, top, sub);
        auto sub1 = zielonka(minus(sub, a));
        Mask& w_o1 = o == Player::Exists ? sub1.first : sub1.second;
        if (empty(w_o1)) {
            // p wins everything; top positions of p may move anywhere in sub
            auto& s = strat(p);
            for (int v = 0; v < n_; ++v) {
                if (!top[v] || g_.owner[v] != p) continue;
                int best = -1;
                for (int w : g_.succ[v])
                    if (sub[w] && (best < 0 || w < best)) best = w;
                s[v] = best;
            }
            return p == Player::Exists ? std::make_pair(sub, none) : std::make_pair(none, sub);
        }
        Mask b = attract(o, w_o1, sub);
        auto sub2 = zielonka(minus(sub, b));
        Mask& w_o2 = o == Player::Exists ? sub2.first : sub2.second;
        for (int v = 0; v < n_; ++v)
            if (b[v]) w_o2[v] = true;
        return sub2;
    }
};

bool odd(int x) { return x % 2 != 0; }

// Player `who` fixes `strategy`; returns positions from which every play is
// won by `who`.
Mask winning_under(const ParityGame& g, Player who, const std::vector<int>& strategy) {
    const int n = g.size();
    std::vector<std::vector<int>> succ(n);
    Mask bad(n, false);
    for (int v = 0; v < n; ++v) {
        if (g.owner[v] == who) {
            if (g.succ[v].empty() || strategy[v] < 0) bad[v] = true;
            else succ[v] = {strategy[v]};
        } else {
            succ[v] = g.succ[v];
        }
    }
    std::vector<int> prios(g.prio);
    std::sort(prios.begin(), prios.end());
    prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
    bool who_even = who == Player::Exists;
    for (int d : prios) {
        if (odd(d) == !who_even) continue;
        // d has the opponent's parity: cycles through d within prio ≤ d
        Mask keep(n);
        for (int v = 0; v < n; ++v) keep[v] = g.prio[v] <= d;
        Sccs s = strongly_connected(succ, keep);
        auto cyc = cyclic_components(succ, s);
        for (int v = 0; v < n; ++v)
            if (s.comp[v] >= 0 && g.prio[v] == d && cyc[s.comp[v]]) bad[v] = true;
    }
    // reverse reachability to bad
    std::vector<std::vector<int>> pred(n);
    for (int v = 0; v < n; ++v)
        for (int w : succ[v]) pred[w].push_back(v);
    Mask lose = reachable_from(pred, bad);
    Mask win(n);
    for (int v = 0; v < n; ++v) win[v] = !lose[v];
    return win;
}

// Enumerates positional strategies of `who` and returns the union of their
// winning sets plus one strategy winning on all of it.
std::pair<Mask, std::vector<int>> best_strategy(const ParityGame& g, Player who) {
    const int n = g.size();
    std::vector<int> mine;
    double combos = 1;
    for (int v = 0; v < n; ++v)
        if (g.owner[v] == who && !g.succ[v].empty()) {
            mine.push_back(v);
            combos *= static_cast<double>(g.succ[v].size());
        }
    if (combos > 1e6) throw ResourceError("solve_bruteforce: too many strategies");
    std::vector<int> choice(mine.size(), 0), strategy(n, -1);
    Mask all(n, false);
    std::vector<std::pair<Mask, std::vector<int>>> found;
    for (;;) {
        for (std::size_t i = 0; i < mine.size(); ++i) strategy[mine[i]] = g.succ[mine[i]][choice[i]];
        Mask w = winning_under(g, who, strategy);
        bool grew = false;
        for (int v = 0; v < n; ++v)
            if (w[v] && !all[v]) grew = all[v] = true;
        if (grew) found.emplace_back(w, strategy);
        std::size_t i = 0;
        while (i < mine.size() && ++choice[i] == static_cast<int>(g.succ[mine[i]].size())) choice[i++] = 0;
        if (i == mine.size()) break;
    }
    for (auto& [w, s] : found)
        if (w == all) return {all, s};
    // cannot happen for parity games (uniform positional strategies exist)
    return {all, found.empty() ? std::vector<int>(n, -1) : found.back().second};
}

}  // namespace

Solution solve(const ParityGame& g) {
    Zielonka z(g);
    return z.run();
}

Solution solve_bruteforce(const ParityGame& g) {
    const int n = g.size();
    if (n > kBruteforceLimit) throw ResourceError("solve_bruteforce: game too large");
    Solution s;
    auto [wex, sex] = best_strategy(g, Player::Exists);
    auto [wfa, sfa] = best_strategy(g, Player::Forall);
    s.win_ex = wex;
    s.strategy_ex.assign(n, -1);
    s.strategy_fa.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (wex[v] == wfa[v]) throw Error("solve_bruteforce: regions do not partition the arena");
        if (g.owner[v] == Player::Exists && wex[v]) s.strategy_ex[v] = sex[v];
        if (g.owner[v] == Player::Forall && wfa[v]) s.strategy_fa[v] = sfa[v];
    }
    return s;
}

bool verify_strategy(const ParityGame& g, Player player, const std::vector<int>& strategy,
                     const std::vector<bool>& region) {
    const int n = g.size();
    for (int v = 0; v < n; ++v) {
        if (g.owner[v] != player || strategy.at(v) < 0) continue;
        const auto& s = g.succ[v];
        if (std::find(s.begin(), s.end(), strategy[v]) == s.end())
            throw PreconditionError("verify_strategy: strategy selects a non-edge at " + std::to_string(v));
    }
    Mask win = winning_under(g, player, strategy);
    for (int v = 0; v < n; ++v)
        if (region[v] && !win[v]) return false;
    return true;
}

ParityGame dual(const ParityGame& g) {
    ParityGame d = g;
    for (auto& o : d.owner) o = opponent(o);
    for (auto& p : d.prio) ++p;
    return d;
}

std::string dump(const ParityGame& g) {
    std::ostringstream out;
    for (int v = 0; v < g.size(); ++v) {
        out << v << ' ' << (g.owner[v] == Player::Exists ? 'E' : 'A') << ' ' << g.prio[v] << ' ';
        for (std::size_t i = 0; i < g.succ[v].size(); ++i) out << (i ? "," : "") << g.succ[v][i];
        out << '\n';
    }
    return out.str();
}

}  // namespace mucalc
