#pragma once

#include <random>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace testsupport {

using namespace mucalc;

// φ0 .. φ6
inline const std::vector<std::string>& phi_texts() {
    static const std::vector<std::string> v = {
        "p",
        "nu y. q & <>y",
        "p & nu y. q & <>y",
        "mu x. p | <><>x",
        "mu x. p | [][]x",
        "nu y. mu x. (p & <>y) | <>x",
        "mu x. p | (<>(q & x) & <>(!q & x))",
    };
    return v;
}

inline Formula phi(int i) { return parse(phi_texts().at(i)); }

// Thirty closed formulas over {p, q}; the first seven are φ0..φ6.
inline const std::vector<std::string>& corpus30() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> c = phi_texts();
        for (const char* s : {
                 "tt",
                 "ff",
                 "!p",
                 "<>p",
                 "[]p",
                 "<>p & []q",
                 "[](p | q)",
                 "<>(p & q) | []ff",
                 "mu x. q | <>x",
                 "nu x. p & []x",
                 "nu x. <>x",
                 "mu x. x",
                 "nu x. mu y. (q & <>x) | (!p & <>y)",
                 "mu x. nu y. (p & <>x) | (q & []y)",
                 "!(mu x. p | <>x)",
                 "nu x. (!p | <>x) & (p | []x)",
                 "mu x. (p & q) | (<>x & []x)",
                 "<>(nu x. q & []x)",
                 "[](mu x. p | <>x)",
                 "nu x. mu y. nu z. (p & <>x) | (q & <>y) | []z",
                 "p | <>(q & <>p)",
                 "mu x. p | <>(q & x) | [](!q & x)",
                 "!(nu y. q & <>y) & <>p",
             })
            c.emplace_back(s);
        return c;
    }();
    return v;
}

// Every unpointed structure with at most 3 states over {p, q}.
inline const std::vector<KripkeModel>& suite_a() {
    static const std::vector<KripkeModel> v = [] {
        std::vector<KripkeModel> out;
        enumerate_structures(3, {"p", "q"}, [&](const KripkeModel& m) {
            out.push_back(m);
            return true;
        });
        return out;
    }();
    return v;
}

inline std::vector<KripkeModel> structures(int max_states, const std::vector<std::string>& props) {
    std::vector<KripkeModel> out;
    enumerate_structures(max_states, props, [&](const KripkeModel& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

class FormulaGen {
public:
    explicit FormulaGen(unsigned seed) : rng_(seed) {}

    Formula closed(int depth) {
        std::vector<std::string> scope;
        return gen(depth, scope);
    }

    std::mt19937& rng() { return rng_; }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    Formula leaf(const std::vector<std::string>& scope) {
        int k = pick(scope.empty() ? 6 : 9);
        switch (k) {
            case 0: return prop("p");
            case 1: return prop("q");
            case 2: return nprop("p");
            case 3: return nprop("q");
            case 4: return top();
            case 5: return bot();
            default: return prop(scope[pick(static_cast<int>(scope.size()))]);
        }
    }

    Formula gen(int depth, std::vector<std::string>& scope) {
        if (depth <= 0) return leaf(scope);
        switch (pick(9)) {
            case 0: return conj(gen(depth - 1, scope), gen(depth - 1, scope));
            case 1: return disj(gen(depth - 1, scope), gen(depth - 1, scope));
            case 2: return dia(gen(depth - 1, scope));
            case 3: return box(gen(depth - 1, scope));
            case 4:
            case 5: {
                std::string x = "x" + std::to_string(scope.size());
                scope.push_back(x);
                Formula body = gen(depth - 1, scope);
                scope.pop_back();
                return pick(2) ? mu(x, body) : nu(x, body);
            }
            case 6: {
                std::vector<std::string> none;
                return neg(gen(depth - 1, none));
            }
            default: return leaf(scope);
        }
    }

    std::mt19937 rng_;
};

inline KripkeModel random_model(std::mt19937& rng, int max_states) {
    int n = std::uniform_int_distribution<int>(1, max_states)(rng);
    std::bernoulli_distribution edge(0.35), coin(0.5);
    KripkeModel m(n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (edge(rng)) m.add_edge(s, t);
    m.val["p"] = m.empty_set();
    m.val["q"] = m.empty_set();
    for (int s = 0; s < n; ++s) {
        if (coin(rng)) m.set_true("p", s);
        if (coin(rng)) m.set_true("q", s);
    }
    return m;
}

}  // namespace testsupport
