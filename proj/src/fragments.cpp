#include <functional>
#include <map>
#include <set>

#include "mucalc/formula.hpp"

namespace mucalc {

namespace {

using NameSet = std::set<std::string>;

bool free_of(const Formula& f, const NameSet& ps) {
    for (const auto& p : ps)
        if (f->has_free(p)) return false;
    return true;
}

std::string memo_key(const Formula& f, const NameSet& ps) {
    std::string k;
    for (const auto& p : ps)
        if (f->has_free(p)) k += p + ",";
    return k;
}

// Grammar checkers.  P is the set of letters the fragment is relative to
// (p together with the variables of the binders passed on the way down).
class Checker {
public:
    Checker(Fragment frag, std::string p) : frag_(frag), p_(std::move(p)) {}

    bool run(const Formula& f) { return check(f, NameSet{p_}); }

private:
    Fragment frag_;
    std::string p_;
    std::map<std::pair<const Node*, std::string>, bool> memo_;

    bool check(const Formula& f, const NameSet& ps) {
        auto key = std::make_pair(f.get(), memo_key(f, ps));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool r = compute(f, ps);
        memo_.emplace(key, r);
        return r;
    }

    bool is_p(const Formula& f) const { return f->kind == Kind::Prop && f->name == p_; }

    bool compute(const Formula& f, const NameSet& ps) {
        bool pfree = free_of(f, ps);
        switch (frag_) {
            case Fragment::W: return pfree || w(f, ps);
            case Fragment::D: return pfree || d(f, ps);
            case Fragment::C: return pfree || c(f, ps);
            case Fragment::F: return fa(f, ps, false);
            case Fragment::A: return pfree || fa(f, ps, true);
            case Fragment::B: return pfree || b(f, ps);
            default: return false;
        }
    }

    NameSet with(const NameSet& ps, const std::string& x) {
        NameSet r = ps;
        r.insert(x);
        return r;
    }

    bool w(const Formula& f, const NameSet& ps) {
        switch (f->kind) {
            case Kind::Prop: return ps.count(f->name) > 0;
            case Kind::And:
            case Kind::Or: return check(f->left, ps) && check(f->right, ps);
            case Kind::Dia: return check(f->left, ps);
            case Kind::Mu:
            case Kind::Nu: return check(f->left, with(ps, f->name));
            default: return false;
        }
    }

    bool d(const Formula& f, const NameSet& ps) {
        switch (f->kind) {
            case Kind::Prop: return ps.count(f->name) > 0;
            case Kind::And:
            case Kind::Or: return check(f->left, ps) && check(f->right, ps);
            case Kind::Dia:
            case Kind::Box: return check(f->left, ps);
            case Kind::Mu: return check(f->left, with(ps, f->name));
            default: return false;
        }
    }

    bool c(const Formula& f, const NameSet& ps) {
        switch (f->kind) {
            case Kind::Prop: return ps.count(f->name) > 0;
            case Kind::And:
            case Kind::Or: return check(f->left, ps) && check(f->right, ps);
            case Kind::Dia: return check(f->left, ps);
            case Kind::Mu: return check(f->left, with(ps, f->name));
            default: return false;
        }
    }

    static void flatten(const Formula& f, std::vector<Formula>& out) {
        if (f->kind == Kind::And) {
            flatten(f->left, out);
            flatten(f->right, out);
        } else {
            out.push_back(f);
        }
    }

    // Conjunctions are read modulo associativity and commutativity: every
    // conjunct but one must be P-free (or, for B, the letter p itself).
    bool conjunction(const Formula& f, const NameSet& ps, bool p_may_repeat) {
        std::vector<Formula> parts;
        flatten(f, parts);
        const Formula* active = nullptr;
        for (const auto& g : parts) {
            if (free_of(g, ps) || (p_may_repeat && is_p(g))) continue;
            if (active) return false;
            active = &g;
        }
        return !active || check(*active, ps);
    }

    // F when !allow_free, A otherwise (the difference is handled in compute).
    bool fa(const Formula& f, const NameSet& ps, bool allow_free) {
        (void)allow_free;
        switch (f->kind) {
            case Kind::Bot: return true;
            case Kind::Prop: return ps.count(f->name) > 0;
            case Kind::Or: return check(f->left, ps) && check(f->right, ps);
            case Kind::And: {
                std::vector<Formula> parts;
                flatten(f, parts);
                bool some_active = false;
                for (const auto& g : parts) some_active = some_active || !free_of(g, ps);
                return some_active && conjunction(f, ps, false);
            }
            case Kind::Dia: return check(f->left, ps);
            case Kind::Mu: return check(f->left, with(ps, f->name));
            default: return false;
        }
    }

    bool b(const Formula& f, const NameSet& qs) {
        switch (f->kind) {
            case Kind::Prop: return qs.count(f->name) > 0;
            case Kind::Or: return check(f->left, qs) && check(f->right, qs);
            case Kind::And: return conjunction(f, qs, true);
            case Kind::Dia: return check(f->left, qs);
            case Kind::Mu:
            case Kind::Nu: return check(f->left, with(qs, f->name));
            default: return false;
        }
    }
};

bool positive_rec(const Formula& f, const std::string& p, bool odd,
                  std::map<std::pair<const Node*, bool>, bool>& memo) {
    if (!f->has_free(p)) return true;
    auto key = std::make_pair(f.get(), odd);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = true;
    switch (f->kind) {
        case Kind::Prop: r = !odd; break;
        case Kind::NegProp: r = odd; break;
        case Kind::Neg: r = positive_rec(f->left, p, !odd, memo); break;
        case Kind::And:
        case Kind::Or:
            r = positive_rec(f->left, p, odd, memo) && positive_rec(f->right, p, odd, memo);
            break;
        default: r = positive_rec(f->left, p, odd, memo); break;
    }
    memo.emplace(key, r);
    return r;
}

bool diamond_free(const Formula& f) {
    std::map<const Node*, bool> memo;
    std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
        if (!g) return true;
        auto it = memo.find(g.get());
        if (it != memo.end()) return it->second;
        bool r = g->kind != Kind::Dia && g->kind != Kind::Neg && go(g->left) && go(g->right);
        memo.emplace(g.get(), r);
        return r;
    };
    return go(f);
}

}  // namespace

bool positive_in(const Formula& f, const std::string& p) {
    std::map<std::pair<const Node*, bool>, bool> memo;
    return positive_rec(f, p, false, memo);
}

bool in_fragment(const Formula& f, Fragment frag, const std::string& p) {
    if (frag == Fragment::M) return f->nnf && positive_in(f, p);
    if (frag == Fragment::U) return diamond_free(f);
    if (!f->nnf) return false;
    Checker c(frag, p);
    return c.run(f);
}

}  // namespace mucalc
