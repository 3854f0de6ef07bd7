#include "mucalc/decide.hpp"

#include <map>
#include <mutex>

#include "mucalc/error.hpp"
#include "mucalc/parity.hpp"

namespace mucalc {

namespace {

std::mutex g_cache_lock;
std::map<Formula, bool> g_sat_cache;
std::map<std::tuple<Formula, Fragment, std::string, bool, bool>, Formula> g_translation_cache;

}  // namespace

void clear_caches() {
    std::lock_guard<std::mutex> lock(g_cache_lock);
    g_sat_cache.clear();
    g_translation_cache.clear();
}

bool nonempty(const InitializedAutomaton& D) {
    const ModalAutomaton& A = D.aut;
    ParityGame g;
    for (int d = 0; d < A.size(); ++d) g.add(Player::Exists, A.prio[d]);
    for (int d = 0; d < A.size(); ++d) {
        for (const auto& dj : A.disj(d)) {
            if (!consistent(dj.pi)) continue;
            int v = g.add(Player::Forall, 0);
            for (int b : dj.nabla) g.edge(v, b);
            g.edge(d, v);
        }
    }
    return solve(g).win_ex[D.init];
}

bool sat(const Formula& xi) {
    Formula f = to_nnf(xi);
    {
        std::lock_guard<std::mutex> lock(g_cache_lock);
        auto it = g_sat_cache.find(f);
        if (it != g_sat_cache.end()) return it->second;
    }
    bool r = nonempty(simulate(from_formula(prepare(f))));
    std::lock_guard<std::mutex> lock(g_cache_lock);
    g_sat_cache.emplace(f, r);
    return r;
}

bool valid(const Formula& xi) { return !sat(negate(to_nnf(xi))); }

bool equiv(const Formula& a, const Formula& b) {
    Formula x = to_nnf(a), y = to_nnf(b);
    if (x == y) return true;
    return !sat(conj(x, negate(y))) && !sat(conj(negate(x), y));
}

Formula translate_fragment(const Formula& xi, Fragment x, const std::string& p) {
    Formula f = to_nnf(xi);
    Mutation m = current_mutation();
    auto key = std::make_tuple(f, x, p, m.swap_w_b, m.keep_f_priorities);
    {
        std::lock_guard<std::mutex> lock(g_cache_lock);
        auto it = g_translation_cache.find(key);
        if (it != g_translation_cache.end()) return it->second;
    }
    Formula r = to_formula(pipeline(f, x, p));
    std::lock_guard<std::mutex> lock(g_cache_lock);
    g_translation_cache.emplace(key, r);
    return r;
}

namespace {

struct PropertyInfo {
    PropertyId id;
    const char* name;
    Fragment fragment;
    std::vector<const char*> aliases;
};

const std::vector<PropertyInfo>& properties() {
    static const std::vector<PropertyInfo> table = {
        {PropertyId::Monotone, "monotone", Fragment::M, {"M", "monotonicity"}},
        {PropertyId::FiniteWidth, "finite-width", Fragment::W, {"W", "width"}},
        {PropertyId::FiniteDepth, "finite-depth", Fragment::D, {"D", "depth"}},
        {PropertyId::SingleBranch, "single-branch", Fragment::B, {"B", "branch"}},
        {PropertyId::Continuous, "continuous", Fragment::C, {"C", "continuity"}},
        {PropertyId::FullyAdditive, "fully-additive", Fragment::F, {"F", "full-additivity"}},
        {PropertyId::CompletelyAdditive, "completely-additive", Fragment::A, {"A", "complete-additivity"}},
        {PropertyId::PreservedUnderSubstructures, "substructures", Fragment::U, {"U", "universal"}},
    };
    return table;
}

}  // namespace

std::string property_name(PropertyId p) {
    for (const auto& info : properties())
        if (info.id == p) return info.name;
    return "?";
}

std::optional<PropertyId> property_from_name(std::string_view s) {
    for (const auto& info : properties()) {
        if (s == info.name) return info.id;
        for (const char* a : info.aliases)
            if (s == a) return info.id;
    }
    return std::nullopt;
}

Fragment fragment_of(PropertyId p) {
    for (const auto& info : properties())
        if (info.id == p) return info.fragment;
    throw PreconditionError("unknown property");
}

bool decide_property(const Formula& xi, PropertyId prop, const std::string& p, ContinuityMode mode) {
    if (prop == PropertyId::Continuous && mode == ContinuityMode::Composite) {
        return decide_property(xi, PropertyId::Monotone, p) && decide_property(xi, PropertyId::FiniteWidth, p) &&
               decide_property(xi, PropertyId::FiniteDepth, p);
    }
    return equiv(xi, translate_fragment(xi, fragment_of(prop), p));
}

std::optional<KripkeModel> separating_model(const Formula& a, const Formula& b, int max_states, long budget) {
    std::set<std::string> letters = free_vars(a);
    for (const auto& x : free_vars(b)) letters.insert(x);
    std::vector<std::string> props(letters.begin(), letters.end());
    std::optional<KripkeModel> found;
    long seen = 0;
    enumerate_structures(max_states, props, [&](const KripkeModel& m) {
        if (++seen > budget) return false;
        StateSet x = eval_naive(a, m), y = eval_naive(b, m);
        for (int s = 0; s < m.n; ++s) {
            if (x[s] != y[s]) {
                found = m;
                found->point = s;
                return false;
            }
        }
        return true;
    });
    return found;
}

}  // namespace mucalc
