#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"

namespace mucalc {

using StateSet = std::vector<bool>;

// Finite pointed Kripke structure over dense state ids 0..n-1.
struct KripkeModel {
    int n = 0;
    std::vector<std::vector<int>> succ;  // sorted, duplicate-free
    std::map<std::string, StateSet> val;
    std::optional<int> point;

    explicit KripkeModel(int states = 0) : n(states), succ(states) {}

    void add_edge(int s, int t);
    void set_true(const std::string& p, int s);
    bool holds(const std::string& p, int s) const;
    StateSet empty_set() const { return StateSet(n, false); }
    StateSet full_set() const { return StateSet(n, true); }

    bool operator==(const KripkeModel& o) const {
        return n == o.n && succ == o.succ && val == o.val && point == o.point;
    }
};

StateSet eval_naive(const Formula& f, const KripkeModel& S);
bool eval_at(const Formula& f, const KripkeModel& S, int s);

KripkeModel set_p(const KripkeModel& S, const std::string& p, const StateSet& U);
KripkeModel restrict_p(const KripkeModel& S, const std::string& p, const StateSet& U);

KripkeModel unravel(const KripkeModel& S, int s, int depth, int kappa);

bool bisimilar(const KripkeModel& S, int s, const KripkeModel& T, int t);

// Calls `visit` for every pointed model with 1..max_states states over the
// given letters; stops early when `visit` returns false.
inline constexpr int kEnumerationBound = 5;
void enumerate_models(int max_states, const std::vector<std::string>& props,
                      const std::function<bool(const KripkeModel&)>& visit);
// Unpointed variant: every structure once, point left empty.
void enumerate_structures(int max_states, const std::vector<std::string>& props,
                          const std::function<bool(const KripkeModel&)>& visit);
std::vector<KripkeModel> all_models(int max_states, const std::vector<std::string>& props);

std::string model_to_json(const KripkeModel& S);
KripkeModel model_from_json(const std::string& text);

}  // namespace mucalc
