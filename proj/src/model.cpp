#include "mucalc/model.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "mucalc/error.hpp"

namespace mucalc {

void KripkeModel::add_edge(int s, int t) {
    auto& v = succ.at(s);
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end() || *it != t) v.insert(it, t);
}

void KripkeModel::set_true(const std::string& p, int s) {
    auto& set = val[p];
    if (set.empty()) set.assign(n, false);
    set.at(s) = true;
}

bool KripkeModel::holds(const std::string& p, int s) const {
    auto it = val.find(p);
    return it != val.end() && it->second.at(s);
}

// ---------------------------------------------------------------- semantics

namespace {

class Evaluator {
public:
    explicit Evaluator(const KripkeModel& S) : S_(S) {}

    StateSet run(const Formula& f) {
        std::map<std::string, StateSet> env;
        return eval(f, env);
    }

private:
    const KripkeModel& S_;
    std::unordered_map<std::string, StateSet> memo_;

    std::string key(const Formula& f, const std::map<std::string, StateSet>& env) {
        std::string k = std::to_string(f->id);
        for (const auto& v : f->free) {
            auto it = env.find(v);
            if (it == env.end()) continue;
            k += '|';
            for (bool b : it->second) k += b ? '1' : '0';
        }
        return k;
    }

    StateSet eval(const Formula& f, std::map<std::string, StateSet>& env) {
        std::string k = key(f, env);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        StateSet r = compute(f, env);
        memo_.emplace(std::move(k), r);
        return r;
    }

    StateSet letter(const std::string& p, const std::map<std::string, StateSet>& env) {
        auto it = env.find(p);
        if (it != env.end()) return it->second;
        auto jt = S_.val.find(p);
        if (jt == S_.val.end()) return S_.empty_set();
        return jt->second;
    }

    StateSet compute(const Formula& f, std::map<std::string, StateSet>& env) {
        const int n = S_.n;
        StateSet r(n, false);
        switch (f->kind) {
            case Kind::Top: return S_.full_set();
            case Kind::Bot: return r;
            case Kind::Prop: return letter(f->name, env);
            case Kind::NegProp:
            case Kind::Neg: {
                StateSet a = f->kind == Kind::Neg ? eval(f->left, env) : letter(f->name, env);
                for (int s = 0; s < n; ++s) r[s] = !a[s];
                return r;
            }
            case Kind::And:
            case Kind::Or: {
                StateSet a = eval(f->left, env);
                StateSet b = eval(f->right, env);
                for (int s = 0; s < n; ++s) r[s] = f->kind == Kind::And ? (a[s] && b[s]) : (a[s] || b[s]);
                return r;
            }
            case Kind::Dia:
            case Kind::Box: {
                StateSet a = eval(f->left, env);
                for (int s = 0; s < n; ++s) {
                    bool any = false, all = true;
                    for (int t : S_.succ[s]) {
                        any = any || a[t];
                        all = all && a[t];
                    }
                    r[s] = f->kind == Kind::Dia ? any : all;
                }
                return r;
            }
            case Kind::Mu:
            case Kind::Nu: {
                auto old = env.find(f->name);
                std::optional<StateSet> saved;
                if (old != env.end()) saved = old->second;
                StateSet cur = f->kind == Kind::Mu ? S_.empty_set() : S_.full_set();
                for (;;) {
                    env[f->name] = cur;
                    StateSet next = eval(f->left, env);
                    if (next == cur) break;
                    cur = std::move(next);
                }
                if (saved) env[f->name] = *saved;
                else env.erase(f->name);
                return cur;
            }
        }
        return r;
    }
};

}  // namespace

StateSet eval_naive(const Formula& f, const KripkeModel& S) {
    Evaluator e(S);
    return e.run(f);
}

bool eval_at(const Formula& f, const KripkeModel& S, int s) { return eval_naive(f, S).at(s); }

// ---------------------------------------------------------------- surgery

KripkeModel set_p(const KripkeModel& S, const std::string& p, const StateSet& U) {
    KripkeModel r = S;
    r.val[p] = U;
    r.val[p].resize(S.n, false);
    return r;
}

KripkeModel restrict_p(const KripkeModel& S, const std::string& p, const StateSet& U) {
    KripkeModel r = S;
    auto it = r.val.find(p);
    if (it == r.val.end()) return r;
    for (int s = 0; s < S.n; ++s) it->second[s] = it->second[s] && s < static_cast<int>(U.size()) && U[s];
    return r;
}

KripkeModel unravel(const KripkeModel& S, int s, int depth, int kappa) {
    if (kappa < 1) throw PreconditionError("unravel: kappa must be at least 1");
    if (s < 0 || s >= S.n) throw PreconditionError("unravel: state out of range");
    std::vector<int> origin{s};
    std::vector<std::pair<int, int>> edges;
    std::vector<int> frontier{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<int> next;
        for (int node : frontier) {
            for (int t : S.succ[origin[node]]) {
                for (int c = 0; c < kappa; ++c) {
                    int id = static_cast<int>(origin.size());
                    origin.push_back(t);
                    edges.emplace_back(node, id);
                    next.push_back(id);
                }
            }
        }
        frontier = std::move(next);
    }
    KripkeModel r(static_cast<int>(origin.size()));
    for (auto [a, b] : edges) r.add_edge(a, b);
    for (const auto& [p, set] : S.val) {
        StateSet v(r.n, false);
        for (int i = 0; i < r.n; ++i) v[i] = set[origin[i]];
        r.val[p] = v;
    }
    r.point = 0;
    return r;
}

bool bisimilar(const KripkeModel& S, int s, const KripkeModel& T, int t) {
    // partition refinement on the disjoint union
    const int n = S.n + T.n;
    std::vector<std::string> letters;
    for (const auto& [p, v] : S.val) letters.push_back(p);
    for (const auto& [p, v] : T.val)
        if (!S.val.count(p)) letters.push_back(p);
    auto has = [&](const KripkeModel& M, const std::string& p, int x) {
        auto it = M.val.find(p);
        return it != M.val.end() && it->second[x];
    };
    std::vector<int> block(n, 0);
    {
        std::map<std::vector<bool>, int> ids;
        for (int x = 0; x < n; ++x) {
            std::vector<bool> sig;
            for (const auto& p : letters) sig.push_back(x < S.n ? has(S, p, x) : has(T, p, x - S.n));
            block[x] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
        }
    }
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<int> nb(n);
        for (int x = 0; x < n; ++x) {
            std::vector<int> sig;
            const auto& succ = x < S.n ? S.succ[x] : T.succ[x - S.n];
            int off = x < S.n ? 0 : S.n;
            for (int y : succ) sig.push_back(block[y + off]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            nb[x] = ids.emplace(std::make_pair(block[x], sig), static_cast<int>(ids.size())).first->second;
        }
        int before = *std::max_element(block.begin(), block.end()) + 1;
        int after = static_cast<int>(ids.size());
        block = std::move(nb);
        if (after == before) break;
    }
    return block[s] == block[S.n + t];
}

// ---------------------------------------------------------------- enumeration

void enumerate_structures(int max_states, const std::vector<std::string>& props,
                          const std::function<bool(const KripkeModel&)>& visit) {
    if (max_states > kEnumerationBound)
        throw ResourceError("enumerate_models: bound " + std::to_string(max_states) + " exceeds " +
                            std::to_string(kEnumerationBound));
    for (int n = 1; n <= max_states; ++n) {
        const int pairs = n * n;
        const int bits = n * static_cast<int>(props.size());
        for (std::uint64_t rel = 0; rel < (std::uint64_t{1} << pairs); ++rel) {
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
                KripkeModel m(n);
                for (int i = 0; i < pairs; ++i)
                    if (rel >> i & 1) m.succ[i / n].push_back(i % n);
                for (std::size_t k = 0; k < props.size(); ++k) {
                    StateSet set(n, false);
                    for (int s = 0; s < n; ++s) set[s] = (v >> (k * n + s)) & 1;
                    m.val[props[k]] = set;
                }
                if (!visit(m)) return;
            }
        }
    }
}

void enumerate_models(int max_states, const std::vector<std::string>& props,
                      const std::function<bool(const KripkeModel&)>& visit) {
    bool go = true;
    enumerate_structures(max_states, props, [&](const KripkeModel& m) {
        KripkeModel pm = m;
        for (int s = 0; s < m.n && go; ++s) {
            pm.point = s;
            go = visit(pm);
        }
        return go;
    });
}

std::vector<KripkeModel> all_models(int max_states, const std::vector<std::string>& props) {
    std::vector<KripkeModel> out;
    enumerate_models(max_states, props, [&](const KripkeModel& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

// ---------------------------------------------------------------- JSON

std::string model_to_json(const KripkeModel& S) {
    nlohmann::ordered_json j;
    j["states"] = nlohmann::ordered_json::array();
    for (int s = 0; s < S.n; ++s) j["states"].push_back(s);
    j["edges"] = nlohmann::ordered_json::array();
    for (int s = 0; s < S.n; ++s)
        for (int t : S.succ[s]) j["edges"].push_back({s, t});
    j["valuation"] = nlohmann::ordered_json::object();
    for (const auto& [p, set] : S.val) {
        auto arr = nlohmann::ordered_json::array();
        for (int s = 0; s < S.n; ++s)
            if (set[s]) arr.push_back(s);
        j["valuation"][p] = arr;
    }
    if (S.point) j["point"] = *S.point;
    return j.dump();
}

KripkeModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model JSON: ") + e.what(), e.byte);
    }
    try {
        const auto& states = j.at("states");
        int n = static_cast<int>(states.size());
        for (int i = 0; i < n; ++i)
            if (states[i].get<int>() != i) throw ParseError("model JSON: states must be 0..n-1", 0);
        KripkeModel m(n);
        if (j.contains("edges")) {
            for (const auto& e : j["edges"]) {
                int a = e.at(0).get<int>(), b = e.at(1).get<int>();
                if (a < 0 || a >= n || b < 0 || b >= n) throw ParseError("model JSON: edge out of range", 0);
                m.add_edge(a, b);
            }
        }
        if (j.contains("valuation")) {
            for (const auto& [p, arr] : j["valuation"].items()) {
                StateSet set(n, false);
                for (const auto& s : arr) {
                    int x = s.get<int>();
                    if (x < 0 || x >= n) throw ParseError("model JSON: valuation out of range", 0);
                    set[x] = true;
                }
                m.val[p] = set;
            }
        }
        if (j.contains("point")) {
            int p = j["point"].get<int>();
            if (p < 0 || p >= n) throw ParseError("model JSON: point out of range", 0);
            m.point = p;
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what(), 0);
    }
}

}  // namespace mucalc
