#include "mucalc/oracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"
#include "mucalc/games.hpp"

namespace mucalc {

namespace {

void require_small(const KripkeModel& S) {
    if (S.n > kOracleStateBound)
        throw ResourceError("oracle: model has more than " + std::to_string(kOracleStateBound) + " states");
}

StateSet subset_of(int n, std::uint32_t bits) {
    StateSet u(n, false);
    for (int i = 0; i < n; ++i) u[i] = bits >> i & 1;
    return u;
}

bool holds_restricted_to(const Formula& xi, const std::string& p, const KripkeModel& S, int s, int u) {
    StateSet only(S.n, false);
    only[u] = true;
    return eval_at(xi, restrict_p(S, p, only), s);
}

}  // namespace

bool check_monotone_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s) {
    require_small(S);
    const std::uint32_t all = std::uint32_t{1} << S.n;
    std::vector<bool> truth(all);
    for (std::uint32_t u = 0; u < all; ++u) truth[u] = eval_at(xi, set_p(S, p, subset_of(S.n, u)), s);
    for (std::uint32_t u = 0; u < all; ++u) {
        if (!truth[u]) continue;
        for (std::uint32_t v = 0; v < all; ++v)
            if ((u & v) == u && !truth[v]) return false;
    }
    return true;
}

bool check_fully_additive_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s) {
    require_small(S);
    bool lhs = eval_at(xi, S, s);
    bool rhs = false;
    for (int u = 0; u < S.n && !rhs; ++u)
        if (S.holds(p, u)) rhs = holds_restricted_to(xi, p, S, s, u);
    return lhs == rhs;
}

bool check_completely_additive_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s) {
    require_small(S);
    bool lhs = eval_at(xi, S, s);
    bool rhs = false;
    for (int u = 0; u < S.n && !rhs; ++u) rhs = holds_restricted_to(xi, p, S, s, u);
    return lhs == rhs;
}

bool check_normal_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s) {
    return !eval_at(xi, set_p(S, p, S.empty_set()), s);
}

bool check_substructures_on(const Formula& xi, const KripkeModel& S, int s) {
    require_small(S);
    if (!eval_at(xi, S, s)) return true;
    const std::uint32_t all = std::uint32_t{1} << S.n;
    for (std::uint32_t keep = 0; keep < all; ++keep) {
        if (!(keep >> s & 1)) continue;
        std::vector<int> id(S.n, -1);
        int k = 0;
        for (int t = 0; t < S.n; ++t)
            if (keep >> t & 1) id[t] = k++;
        KripkeModel sub;
        sub.n = k;
        sub.succ.assign(k, {});
        for (const auto& [q, set] : S.val) sub.val[q] = std::vector<bool>(k, false);
        for (int t = 0; t < S.n; ++t) {
            if (id[t] < 0) continue;
            for (int v : S.succ[t])
                if (id[v] >= 0) sub.add_edge(id[t], id[v]);
            for (const auto& [q, set] : S.val)
                if (set[t]) sub.val[q][id[t]] = true;
        }
        if (!eval_at(xi, sub, id[s])) return false;
    }
    return true;
}

bool semantically_checkable(PropertyId prop) {
    switch (prop) {
        case PropertyId::Monotone:
        case PropertyId::FullyAdditive:
        case PropertyId::CompletelyAdditive:
        case PropertyId::PreservedUnderSubstructures: return true;
        default: return false;
    }
}

bool semantic_check(const Formula& xi, PropertyId prop, const std::string& p, const KripkeModel& S, int s) {
    switch (prop) {
        case PropertyId::Monotone: return check_monotone_on(xi, p, S, s);
        case PropertyId::FullyAdditive: return check_fully_additive_on(xi, p, S, s);
        case PropertyId::CompletelyAdditive: return check_completely_additive_on(xi, p, S, s);
        case PropertyId::PreservedUnderSubstructures: return check_substructures_on(xi, S, s);
        default:
            throw PreconditionError("oracle: " + property_name(prop) +
                                    " holds trivially on finite models and cannot be checked semantically");
    }
}

std::optional<KripkeModel> find_counterexample(const Formula& xi, PropertyId prop, const std::string& p,
                                               int max_states) {
    if (!semantically_checkable(prop)) semantic_check(xi, prop, p, KripkeModel{}, 0);
    std::set<std::string> letters = free_vars(xi);
    letters.insert(p);
    std::optional<KripkeModel> found;
    enumerate_models(max_states, std::vector<std::string>(letters.begin(), letters.end()), [&](const KripkeModel& m) {
        if (semantic_check(xi, prop, p, m, *m.point)) return true;
        found = m;
        return false;
    });
    return found;
}

// ---------------------------------------------------------------- corpus

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(const std::string& text) {
    std::vector<CorpusEntry> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        CorpusEntry e;
        std::string body = line;
        if (auto semi = body.find(';'); semi != std::string::npos) {
            std::istringstream tail(body.substr(semi + 1));
            body = body.substr(0, semi);
            std::string word;
            tail >> word;
            if (word != "holds") throw ParseError("corpus line " + std::to_string(lineno) + ": expected 'holds'", semi);
            std::set<Fragment> hs;
            while (tail >> word) {
                auto f = fragment_from_name(word);
                if (!f) throw ParseError("corpus line " + std::to_string(lineno) + ": unknown fragment " + word, semi);
                hs.insert(*f);
            }
            e.holds = hs;
        }
        if (auto eq = body.find('='); eq != std::string::npos) {
            e.name = trim(body.substr(0, eq));
            body = body.substr(eq + 1);
        }
        e.formula = parse(trim(body));
        if (e.name.empty()) e.name = "f" + std::to_string(out.size());
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------- reports

std::string CheckResult::line() const {
    return "CHECK " + name + " formula=" + formula + " model=" + model + " verdict=" + (pass ? "PASS" : "FAIL");
}

bool Report::all_pass() const { return failures() == 0; }

int Report::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

std::string Report::text() const {
    std::vector<std::string> lines;
    for (const auto& c : checks) lines.push_back(c.line());
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

namespace {

const std::vector<Fragment> kFragments = {Fragment::M, Fragment::W, Fragment::D, Fragment::B,
                                          Fragment::C, Fragment::F, Fragment::A, Fragment::U};

PropertyId property_of(Fragment x) {
    for (auto p : {PropertyId::Monotone, PropertyId::FiniteWidth, PropertyId::FiniteDepth, PropertyId::SingleBranch,
                   PropertyId::Continuous, PropertyId::FullyAdditive, PropertyId::CompletelyAdditive,
                   PropertyId::PreservedUnderSubstructures})
        if (fragment_of(p) == x) return p;
    throw PreconditionError("no property for fragment");
}

class Validator {
public:
    Validator(const CorpusEntry& e, const OracleBounds& b, Report& r) : e_(e), b_(b), r_(r) {
        label_ = e.name + ":" + to_string(e.formula);
        std::set<std::string> letters = free_vars(e.formula);
        letters.insert(b.letter);
        props_.assign(letters.begin(), letters.end());
    }

    void run() {
        check("model-check", [&] { return agreement([&](const KripkeModel& m) { return model_check_all(e_.formula, m); }); });
        InitializedAutomaton alt, dis;
        check("automaton", [&] {
            alt = from_formula(prepare(e_.formula));
            return agreement([&](const KripkeModel& m) { return accepted_states(alt.aut, alt.init, m); });
        });
        check("simulate", [&] {
            dis = simulate(from_formula(prepare(e_.formula)));
            if (!dis.aut.disjunctive()) return std::optional<KripkeModel>(KripkeModel{});
            return agreement([&](const KripkeModel& m) { return accepted_states(dis.aut, dis.init, m); });
        });
        for (Fragment x : kFragments) {
            const std::string fx = fragment_name(x);
            PropertyId prop = property_of(x);
            bool decided = false, syntactic = in_fragment(e_.formula, x, b_.letter);
            bool ok = check("decide-" + fx, [&] {
                decided = decide_property(e_.formula, prop, b_.letter);
                return std::optional<KripkeModel>();
            });
            if (!ok) continue;
            check("syntax-implies-decide-" + fx, [&] { return verdict(!syntactic || decided); });
            check("translation-in-fragment-" + fx, [&] {
                return verdict(in_fragment(translate_fragment(e_.formula, x, b_.letter), x, b_.letter));
            });
            if (semantically_checkable(prop) && decided)
                check("semantic-" + fx, [&] { return find_counterexample(e_.formula, prop, b_.letter, b_.max_states); });
            if (x == Fragment::F && decided) check("normal", [&] { return normality(); });
            if (e_.holds) {
                bool want = e_.holds->count(x) > 0;
                check("expect-syntax-" + fx, [&] { return verdict(syntactic == want); });
                check("expect-decide-" + fx, [&] { return verdict(decided == want); });
            }
        }
        check("continuity-modes", [&] {
            return verdict(decide_property(e_.formula, PropertyId::Continuous, b_.letter, ContinuityMode::Direct) ==
                           decide_property(e_.formula, PropertyId::Continuous, b_.letter, ContinuityMode::Composite));
        });
        check("finite-model-refusal", [&] {
            KripkeModel one;
            one.n = 1;
            one.succ.assign(1, {});
            for (auto prop : {PropertyId::FiniteWidth, PropertyId::FiniteDepth, PropertyId::SingleBranch,
                              PropertyId::Continuous}) {
                try {
                    semantic_check(e_.formula, prop, b_.letter, one, 0);
                    return verdict(false);
                } catch (const PreconditionError&) {
                }
            }
            return verdict(true);
        });
    }

private:
    const CorpusEntry& e_;
    const OracleBounds& b_;
    Report& r_;
    std::string label_;
    std::vector<std::string> props_;

    static std::optional<KripkeModel> verdict(bool ok) {
        return ok ? std::nullopt : std::optional<KripkeModel>(KripkeModel{});
    }

    // Runs a check; a returned model is a counterexample (an empty model
    // marks a failure without a witness).
    bool check(const std::string& name, const std::function<std::optional<KripkeModel>()>& fn) {
        CheckResult c{name, label_, "-", true};
        try {
            auto cex = fn();
            if (cex) {
                c.pass = false;
                if (cex->n > 0) c.model = model_to_json(*cex);
            }
        } catch (const Error&) {
            c.pass = false;
        }
        r_.checks.push_back(c);
        return c.pass;
    }

    std::optional<KripkeModel> agreement(const std::function<StateSet(const KripkeModel&)>& other) {
        std::optional<KripkeModel> bad;
        enumerate_structures(b_.max_states, props_, [&](const KripkeModel& m) {
            StateSet want = eval_naive(e_.formula, m), got = other(m);
            for (int s = 0; s < m.n; ++s) {
                if (want[s] != got[s]) {
                    bad = m;
                    bad->point = s;
                    return false;
                }
            }
            return true;
        });
        return bad;
    }

    std::optional<KripkeModel> normality() {
        std::optional<KripkeModel> bad;
        enumerate_models(b_.max_states, props_, [&](const KripkeModel& m) {
            if (check_normal_on(e_.formula, b_.letter, m, *m.point)) return true;
            bad = m;
            return false;
        });
        return bad;
    }
};

}  // namespace

Report cross_validate(const std::vector<CorpusEntry>& corpus, const OracleBounds& bounds) {
    Report r;
    for (const auto& e : corpus) {
        Validator v(e, bounds, r);
        v.run();
    }
    return r;
}

}  // namespace mucalc
