#include "mucalc/formula.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <unordered_map>

#include "mucalc/error.hpp"

namespace mucalc {

namespace {

struct Key {
    Kind kind;
    std::string name;
    const Node* l;
    const Node* r;
    bool operator==(const Key& o) const {
        return kind == o.kind && l == o.l && r == o.r && name == o.name;
    }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = std::hash<std::string>()(k.name);
        h ^= std::hash<const void*>()(k.l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<const void*>()(k.r) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(k.kind) * 0x100000001b3ULL;
        return h;
    }
};

struct Table {
    std::mutex mu;
    std::unordered_map<Key, std::weak_ptr<const Node>, KeyHash> map;
    std::size_t purge_at = 1 << 16;
};

Table& table() {
    static Table* t = new Table();  // never destroyed: nodes may outlive statics
    return *t;
}

std::atomic<std::uint64_t> next_id{1};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s < a ? UINT64_MAX : s;
}

}  // namespace

Node::Node(Kind k, std::string n, Formula l, Formula r, std::uint64_t i)
    : kind(k), name(std::move(n)), left(std::move(l)), right(std::move(r)), id(i) {
    nnf = kind != Kind::Neg;
    tree_size = 1;
    switch (kind) {
        case Kind::Prop:
        case Kind::NegProp:
            free.push_back(name);
            break;
        case Kind::Top:
        case Kind::Bot:
            break;
        case Kind::And:
        case Kind::Or:
            std::set_union(left->free.begin(), left->free.end(), right->free.begin(),
                           right->free.end(), std::back_inserter(free));
            nnf = left->nnf && right->nnf;
            tree_size = sat_add(sat_add(left->tree_size, right->tree_size), 1);
            break;
        case Kind::Mu:
        case Kind::Nu:
            for (const auto& v : left->free)
                if (v != name) free.push_back(v);
            nnf = left->nnf;
            tree_size = sat_add(left->tree_size, 1);
            break;
        default:
            free = left->free;
            nnf = nnf && left->nnf;
            tree_size = sat_add(left->tree_size, 1);
            break;
    }
}

bool Node::has_free(const std::string& n) const {
    return std::binary_search(free.begin(), free.end(), n);
}

Formula make(Kind k, const std::string& name, const Formula& l, const Formula& r) {
    Key key{k, name, l.get(), r.get()};
    Table& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.map.find(key);
    if (it != t.map.end()) {
        if (auto sp = it->second.lock()) return sp;
    }
    auto node = std::make_shared<const Node>(k, name, l, r, next_id.fetch_add(1));
    if (it != t.map.end()) {
        it->second = node;
    } else {
        t.map.emplace(std::move(key), node);
    }
    if (t.map.size() > t.purge_at) {
        for (auto i = t.map.begin(); i != t.map.end();) {
            if (i->second.expired()) i = t.map.erase(i);
            else ++i;
        }
        t.purge_at = std::max<std::size_t>(1 << 16, 2 * t.map.size());
    }
    return node;
}

Formula top() { return make(Kind::Top, "", nullptr, nullptr); }
Formula bot() { return make(Kind::Bot, "", nullptr, nullptr); }
Formula prop(const std::string& n) { return make(Kind::Prop, n, nullptr, nullptr); }
Formula nprop(const std::string& n) { return make(Kind::NegProp, n, nullptr, nullptr); }
Formula neg(const Formula& f) { return make(Kind::Neg, "", f, nullptr); }
Formula conj(const Formula& a, const Formula& b) { return make(Kind::And, "", a, b); }
Formula disj(const Formula& a, const Formula& b) { return make(Kind::Or, "", a, b); }
Formula dia(const Formula& f) { return make(Kind::Dia, "", f, nullptr); }
Formula box(const Formula& f) { return make(Kind::Box, "", f, nullptr); }
Formula mu(const std::string& v, const Formula& b) { return make(Kind::Mu, v, b, nullptr); }
Formula nu(const std::string& v, const Formula& b) { return make(Kind::Nu, v, b, nullptr); }
Formula binder(Kind k, const std::string& v, const Formula& b) { return make(k, v, b, nullptr); }

Formula simp_and(const Formula& a, const Formula& b) {
    if (a->kind == Kind::Bot || b->kind == Kind::Bot) return bot();
    if (a->kind == Kind::Top) return b;
    if (b->kind == Kind::Top) return a;
    if (a == b) return a;
    return conj(a, b);
}

Formula simp_or(const Formula& a, const Formula& b) {
    if (a->kind == Kind::Top || b->kind == Kind::Top) return top();
    if (a->kind == Kind::Bot) return b;
    if (b->kind == Kind::Bot) return a;
    if (a == b) return a;
    return disj(a, b);
}

Formula simp_dia(const Formula& f) { return f->kind == Kind::Bot ? bot() : dia(f); }
Formula simp_box(const Formula& f) { return f->kind == Kind::Top ? top() : box(f); }

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = simp_and(r, fs[i]);
    return r;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = simp_or(r, fs[i]);
    return r;
}

// ---------------------------------------------------------------- names

std::set<std::string> free_vars(const Formula& f) { return {f->free.begin(), f->free.end()}; }

namespace {

template <class Fn>
void visit_dag(const Formula& f, Fn&& fn) {
    std::unordered_map<const Node*, bool> seen;
    std::vector<const Node*> stack{f.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!n || seen.count(n)) continue;
        seen[n] = true;
        fn(*n);
        stack.push_back(n->left.get());
        stack.push_back(n->right.get());
    }
}

}  // namespace

std::set<std::string> bound_vars(const Formula& f) {
    std::set<std::string> out;
    visit_dag(f, [&](const Node& n) {
        if (n.is_binder()) out.insert(n.name);
    });
    return out;
}

std::set<std::string> all_names(const Formula& f) {
    std::set<std::string> out;
    visit_dag(f, [&](const Node& n) {
        if (!n.name.empty()) out.insert(n.name);
    });
    return out;
}

std::uint64_t dag_size(const Formula& f) {
    std::uint64_t c = 0;
    visit_dag(f, [&](const Node&) { ++c; });
    return c;
}

// ---------------------------------------------------------------- NNF

namespace {

// Negation-normal form of f (negated when `flip`); names in `keep` are bound
// variables of dualized binders and keep their polarity.
struct NnfPass {
    std::map<std::pair<const Node*, std::string>, Formula> memo;

    static std::string ctx_key(const Node& n, bool flip, const std::set<std::string>& keep) {
        std::string k = flip ? "1" : "0";
        for (const auto& v : keep)
            if (n.has_free(v)) k += "," + v;
        return k;
    }

    Formula run(const Formula& f, bool flip, std::set<std::string>& keep) {
        if (!flip && f->nnf) {
            bool touches = false;
            for (const auto& v : keep)
                if (f->has_free(v)) touches = true;
            if (!touches) return f;
        }
        auto key = std::make_pair(f.get(), ctx_key(*f, flip, keep));
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Formula r;
        switch (f->kind) {
            case Kind::Top: r = flip ? bot() : top(); break;
            case Kind::Bot: r = flip ? top() : bot(); break;
            case Kind::Prop:
                r = (flip && !keep.count(f->name)) ? nprop(f->name) : f;
                break;
            case Kind::NegProp:
                r = flip ? prop(f->name) : f;
                break;
            case Kind::Neg: r = run(f->left, !flip, keep); break;
            case Kind::And:
            case Kind::Or: {
                Formula a = run(f->left, flip, keep);
                Formula b = run(f->right, flip, keep);
                bool is_and = (f->kind == Kind::And) != flip;
                r = is_and ? conj(a, b) : disj(a, b);
                break;
            }
            case Kind::Dia:
            case Kind::Box: {
                Formula a = run(f->left, flip, keep);
                bool is_dia = (f->kind == Kind::Dia) != flip;
                r = is_dia ? dia(a) : box(a);
                break;
            }
            case Kind::Mu:
            case Kind::Nu: {
                bool had = keep.count(f->name) > 0;
                if (flip) keep.insert(f->name);
                else keep.erase(f->name);
                Formula a = run(f->left, flip, keep);
                if (had) keep.insert(f->name);
                else keep.erase(f->name);
                bool is_mu = (f->kind == Kind::Mu) != flip;
                r = is_mu ? mu(f->name, a) : nu(f->name, a);
                break;
            }
        }
        memo.emplace(key, r);
        return r;
    }
};

}  // namespace

Formula to_nnf(const Formula& f) {
    if (f->nnf) return f;
    NnfPass pass;
    std::set<std::string> keep;
    return pass.run(f, false, keep);
}

Formula negate(const Formula& f) {
    if (!f->nnf) throw PreconditionError("negate: input is not in negation normal form");
    NnfPass pass;
    std::set<std::string> keep;
    return pass.run(f, true, keep);
}

// ---------------------------------------------------------------- well-naming

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
    for (unsigned i = 1;; ++i) {
        std::string c = base + std::to_string(i);
        if (!used.count(c)) return c;
    }
}

bool well_named_rec(const Formula& f, std::set<std::string>& seen, const std::set<std::string>& fv,
                    std::unordered_map<const Node*, bool>& visited) {
    if (!f) return true;
    if (f->is_binder()) {
        // a shared binder node would bind the same name twice
        if (visited.count(f.get())) return false;
        visited[f.get()] = true;
        if (seen.count(f->name) || fv.count(f->name)) return false;
        seen.insert(f->name);
    }
    return well_named_rec(f->left, seen, fv, visited) && well_named_rec(f->right, seen, fv, visited);
}

struct Renamer {
    std::set<std::string> used;
    std::set<std::string> taken;  // bound names already assigned

    Formula run(const Formula& f, std::map<std::string, std::string>& env) {
        switch (f->kind) {
            case Kind::Top:
            case Kind::Bot:
                return f;
            case Kind::Prop:
            case Kind::NegProp: {
                auto it = env.find(f->name);
                if (it == env.end() || it->second == f->name) return f;
                return make(f->kind, it->second, nullptr, nullptr);
            }
            case Kind::And:
            case Kind::Or: {
                Formula a = run(f->left, env);
                Formula b = run(f->right, env);
                return make(f->kind, "", a, b);
            }
            case Kind::Neg:
            case Kind::Dia:
            case Kind::Box:
                return make(f->kind, "", run(f->left, env), nullptr);
            case Kind::Mu:
            case Kind::Nu: {
                std::string nm = f->name;
                if (taken.count(nm)) {
                    nm = fresh_name(f->name, used);
                    used.insert(nm);
                }
                taken.insert(nm);
                auto old = env.find(f->name);
                std::optional<std::string> saved;
                if (old != env.end()) saved = old->second;
                env[f->name] = nm;
                Formula b = run(f->left, env);
                if (saved) env[f->name] = *saved;
                else env.erase(f->name);
                return make(f->kind, nm, b, nullptr);
            }
        }
        return f;
    }
};

}  // namespace

bool is_well_named(const Formula& f) {
    std::set<std::string> seen;
    std::set<std::string> fv = free_vars(f);
    std::unordered_map<const Node*, bool> visited;
    return well_named_rec(f, seen, fv, visited);
}

Formula well_name(const Formula& f) {
    if (is_well_named(f)) return f;
    Renamer r;
    r.used = all_names(f);
    r.taken = free_vars(f);
    std::map<std::string, std::string> env;
    return r.run(f, env);
}

// ---------------------------------------------------------------- substitution

Formula substitute_nocapture(const Formula& f, const std::map<std::string, Formula>& bindings) {
    std::unordered_map<const Node*, Formula> memo;
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        bool touches = false;
        for (const auto& [k, v] : bindings)
            if (g->has_free(k)) { touches = true; break; }
        if (!touches) return g;
        auto it = memo.find(g.get());
        if (it != memo.end()) return it->second;
        Formula r;
        switch (g->kind) {
            case Kind::Prop: r = bindings.at(g->name); break;
            case Kind::NegProp: r = negate(to_nnf(bindings.at(g->name))); break;
            case Kind::And:
            case Kind::Or: r = make(g->kind, "", go(g->left), go(g->right)); break;
            case Kind::Mu:
            case Kind::Nu:
                if (bindings.count(g->name)) {
                    // shadowed: only other bindings apply below
                    std::map<std::string, Formula> inner = bindings;
                    inner.erase(g->name);
                    r = make(g->kind, g->name, substitute_nocapture(g->left, inner), nullptr);
                } else {
                    r = make(g->kind, g->name, go(g->left), nullptr);
                }
                break;
            default: r = make(g->kind, "", go(g->left), nullptr); break;
        }
        memo.emplace(g.get(), r);
        return r;
    };
    return go(f);
}

namespace {

struct Subst {
    std::set<std::string> used;

    Formula run(const Formula& f, const std::map<std::string, Formula>& env) {
        bool touches = false;
        for (const auto& [k, v] : env)
            if (f->has_free(k)) { touches = true; break; }
        if (!touches) return f;
        switch (f->kind) {
            case Kind::Prop: return env.at(f->name);
            case Kind::NegProp: {
                const Formula& v = env.at(f->name);
                if (v->kind == Kind::Prop) return nprop(v->name);
                return neg(v);
            }
            case Kind::And:
            case Kind::Or: return make(f->kind, "", run(f->left, env), run(f->right, env));
            case Kind::Neg:
            case Kind::Dia:
            case Kind::Box: return make(f->kind, "", run(f->left, env), nullptr);
            case Kind::Mu:
            case Kind::Nu: {
                std::map<std::string, Formula> inner = env;
                inner.erase(f->name);
                bool capture = false;
                for (const auto& [k, v] : inner)
                    if (f->left->has_free(k) && v->has_free(f->name)) capture = true;
                std::string nm = f->name;
                if (capture) {
                    nm = fresh_name(f->name, used);
                    used.insert(nm);
                    inner[f->name] = prop(nm);
                }
                return make(f->kind, nm, run(f->left, inner), nullptr);
            }
            default: return f;
        }
    }
};

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Formula>& bindings) {
    std::map<std::string, Formula> env;
    for (const auto& [k, v] : bindings)
        if (!(v->kind == Kind::Prop && v->name == k)) env.emplace(k, v);
    if (env.empty()) return f;
    Subst s;
    s.used = all_names(f);
    for (const auto& [k, v] : env) {
        s.used.insert(k);
        auto names = all_names(v);
        s.used.insert(names.begin(), names.end());
    }
    return s.run(f, env);
}

// ---------------------------------------------------------------- guarding

namespace {

// x occurs free in f outside the scope of any modality.
bool has_unguarded(const Formula& f, const std::string& x,
                   std::map<std::pair<const Node*, std::string>, bool>& memo) {
    if (!f->has_free(x)) return false;
    auto key = std::make_pair(f.get(), x);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = false;
    switch (f->kind) {
        case Kind::Prop:
        case Kind::NegProp: r = true; break;
        case Kind::Dia:
        case Kind::Box: r = false; break;
        case Kind::And:
        case Kind::Or: r = has_unguarded(f->left, x, memo) || has_unguarded(f->right, x, memo); break;
        default: r = has_unguarded(f->left, x, memo); break;
    }
    memo.emplace(key, r);
    return r;
}

struct Guarder {
    std::map<std::pair<const Node*, std::string>, bool> memo;

    bool unguarded(const Formula& f, const std::string& x) { return has_unguarded(f, x, memo); }

    // Unfold every binder that sits at an unguarded position and has x unguarded.
    Formula unfold(const Formula& f, const std::string& x) {
        if (!unguarded(f, x)) return f;
        switch (f->kind) {
            case Kind::And:
            case Kind::Or: return make(f->kind, "", unfold(f->left, x), unfold(f->right, x));
            case Kind::Mu:
            case Kind::Nu: {
                Formula u = substitute_nocapture(f->left, {{f->name, f}});
                return unfold(u, x);
            }
            default: return f;
        }
    }

    Formula replace(const Formula& f, const std::string& x, const Formula& c) {
        if (!unguarded(f, x)) return f;
        switch (f->kind) {
            case Kind::Prop: return c;
            case Kind::And: return simp_and(replace(f->left, x, c), replace(f->right, x, c));
            case Kind::Or: return simp_or(replace(f->left, x, c), replace(f->right, x, c));
            default: return f;
        }
    }

    Formula run(const Formula& f) {
        switch (f->kind) {
            case Kind::And:
            case Kind::Or: return make(f->kind, "", run(f->left), run(f->right));
            case Kind::Dia:
            case Kind::Box:
            case Kind::Neg: return make(f->kind, "", run(f->left), nullptr);
            case Kind::Mu:
            case Kind::Nu: {
                Formula body = run(f->left);
                if (!unguarded(body, f->name)) return make(f->kind, f->name, body, nullptr);
                Formula c = f->kind == Kind::Mu ? bot() : top();
                Formula nb = replace(unfold(body, f->name), f->name, c);
                if (nb->kind == Kind::Top || nb->kind == Kind::Bot) return nb;
                return make(f->kind, f->name, nb, nullptr);
            }
            default: return f;
        }
    }
};

}  // namespace

bool is_guarded(const Formula& f) {
    std::map<std::pair<const Node*, std::string>, bool> memo;
    bool ok = true;
    visit_dag(f, [&](const Node& n) {
        if (ok && n.is_binder() && has_unguarded(n.left, n.name, memo)) ok = false;
    });
    return ok;
}

Formula guard(const Formula& f) {
    Formula g = to_nnf(f);
    if (is_guarded(g)) return g;
    Guarder gd;
    return well_name(gd.run(well_name(g)));
}

Formula prepare(const Formula& f) {
    Formula g = to_nnf(f);
    if (is_guarded(g)) return g;
    return guard(g);
}

// ---------------------------------------------------------------- occurrences

Formula subformula_at(const Formula& xi, const Path& path) {
    Formula cur = xi;
    for (int step : path) {
        Formula next = step == 0 ? cur->left : (step == 1 ? cur->right : nullptr);
        if (!next) throw PreconditionError("path does not denote a subformula occurrence");
        cur = next;
    }
    return cur;
}

std::vector<std::pair<Path, Formula>> subformula_occurrences(const Formula& xi) {
    std::vector<std::pair<Path, Formula>> out;
    Path p;
    std::function<void(const Formula&)> go = [&](const Formula& f) {
        out.emplace_back(p, f);
        if (f->left) {
            p.push_back(0);
            go(f->left);
            p.pop_back();
        }
        if (f->right) {
            p.push_back(1);
            go(f->right);
            p.pop_back();
        }
    };
    go(xi);
    return out;
}

std::map<std::string, Formula> binder_map(const Formula& xi) {
    std::map<std::string, Formula> out;
    visit_dag(xi, [&](const Node& n) {
        if (n.is_binder()) out.emplace(n.name, make(n.kind, n.name, n.left, nullptr));
    });
    return out;
}

std::set<std::string> active(const Formula& xi, const Path& occurrence) {
    if (!is_well_named(xi)) throw PreconditionError("active: formula is not well-named");
    Formula target = subformula_at(xi, occurrence);
    auto binders = binder_map(xi);
    std::set<std::string> fv = free_vars(xi);
    // In a well-named formula every occurrence of a subterm has the same
    // Act value, so the least solution is computed per node.
    std::vector<const Node*> nodes;
    visit_dag(xi, [&](const Node& n) { nodes.push_back(&n); });
    std::unordered_map<const Node*, std::set<std::string>> act;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Node* n : nodes) {
            std::set<std::string> s;
            switch (n->kind) {
                case Kind::Prop:
                case Kind::NegProp:
                    if (fv.count(n->name)) s.insert(n->name);
                    else if (binders.count(n->name)) s = act[binders.at(n->name)->left.get()];
                    break;
                case Kind::And:
                case Kind::Or: {
                    s = act[n->left.get()];
                    const auto& b = act[n->right.get()];
                    s.insert(b.begin(), b.end());
                    break;
                }
                case Kind::Top:
                case Kind::Bot: break;
                default: s = act[n->left.get()]; break;
            }
            if (s != act[n]) {
                act[n] = std::move(s);
                changed = true;
            }
        }
    }
    return act[target.get()];
}

DependencyOrder dependency_order(const Formula& xi) {
    DependencyOrder d;
    std::vector<std::string> stack;
    std::function<void(const Formula&)> go = [&](const Formula& f) {
        if (f->is_binder()) {
            for (const auto& y : stack) d.less.insert({f->name, y});
            stack.push_back(f->name);
            go(f->left);
            stack.pop_back();
            d.vars.push_back(f->name);  // post-order: inner binders first
            return;
        }
        if (f->left) go(f->left);
        if (f->right) go(f->right);
    };
    go(xi);
    return d;
}

}  // namespace mucalc
