#include "mucalc/onestep.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "mucalc/error.hpp"

namespace mucalc {

// ---------------------------------------------------------------- builders

namespace {

template <typename T>
T flat(typename T::Op op, std::vector<T> ks, T unit, T zero) {
    std::vector<T> out;
    for (auto& k : ks) {
        if (k.op == op) {
            for (auto& g : k.kids) out.push_back(std::move(g));
        } else if (k == unit) {
            continue;
        } else if (k == zero) {
            return zero;
        } else {
            out.push_back(std::move(k));
        }
    }
    if (out.empty()) return unit;
    if (out.size() == 1) return std::move(out.front());
    T r;
    r.op = op;
    r.kids = std::move(out);
    return r;
}

}  // namespace

Lattice Lattice::all(std::vector<Lattice> ks) { return flat(Op::And, std::move(ks), top(), bot()); }
Lattice Lattice::any(std::vector<Lattice> ks) { return flat(Op::Or, std::move(ks), bot(), top()); }

bool Lattice::operator<(const Lattice& o) const {
    if (op != o.op) return op < o.op;
    if (atom != o.atom) return atom < o.atom;
    return std::lexicographical_compare(kids.begin(), kids.end(), o.kids.begin(), o.kids.end());
}

OneStep OneStep::nabla(std::vector<int> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    OneStep r;
    r.op = Op::Nabla;
    r.atoms = std::move(atoms);
    return r;
}

OneStep OneStep::all(std::vector<OneStep> ks) { return flat(Op::And, std::move(ks), top(), bot()); }
OneStep OneStep::any(std::vector<OneStep> ks) { return flat(Op::Or, std::move(ks), bot(), top()); }

// ---------------------------------------------------------------- semantics

bool sat1(const OneStepModel& m, const Lattice& l, int t) {
    switch (l.op) {
        case Lattice::Op::Atom: return m.marking.at(t).count(l.atom) > 0;
        case Lattice::Op::Top: return true;
        case Lattice::Op::Bot: return false;
        case Lattice::Op::And:
            for (const auto& k : l.kids)
                if (!sat1(m, k, t)) return false;
            return true;
        case Lattice::Op::Or:
            for (const auto& k : l.kids)
                if (sat1(m, k, t)) return true;
            return false;
    }
    return false;
}

bool sat1(const OneStepModel& m, const OneStep& a) {
    switch (a.op) {
        case OneStep::Op::PosLit: return m.Y.count(a.letter) > 0;
        case OneStep::Op::NegLit: return m.Y.count(a.letter) == 0;
        case OneStep::Op::Top: return true;
        case OneStep::Op::Bot: return false;
        case OneStep::Op::Dia:
            for (int t = 0; t < m.size; ++t)
                if (sat1(m, a.arg, t)) return true;
            return false;
        case OneStep::Op::Box:
            for (int t = 0; t < m.size; ++t)
                if (!sat1(m, a.arg, t)) return false;
            return true;
        case OneStep::Op::Nabla: {
            for (int b : a.atoms) {
                bool seen = false;
                for (int t = 0; t < m.size && !seen; ++t) seen = m.marking[t].count(b) > 0;
                if (!seen) return false;
            }
            for (int t = 0; t < m.size; ++t) {
                bool covered = false;
                for (int b : a.atoms) covered = covered || m.marking[t].count(b) > 0;
                if (!covered) return false;
            }
            return true;
        }
        case OneStep::Op::And:
            for (const auto& k : a.kids)
                if (!sat1(m, k)) return false;
            return true;
        case OneStep::Op::Or:
            for (const auto& k : a.kids)
                if (sat1(m, k)) return true;
            return false;
    }
    return false;
}

// ---------------------------------------------------------------- rewriting

OneStep expand_nabla(const OneStep& a) {
    switch (a.op) {
        case OneStep::Op::Nabla: {
            std::vector<OneStep> parts;
            std::vector<Lattice> cover;
            for (int b : a.atoms) {
                parts.push_back(OneStep::dia(Lattice::at(b)));
                cover.push_back(Lattice::at(b));
            }
            parts.push_back(OneStep::box(Lattice::any(cover)));
            return OneStep::all(parts);
        }
        case OneStep::Op::And:
        case OneStep::Op::Or: {
            OneStep r = a;
            for (auto& k : r.kids) k = expand_nabla(k);
            return r;
        }
        default: return a;
    }
}

namespace {

OneStep map_literals(const OneStep& a, const std::function<OneStep(const OneStep&)>& f) {
    switch (a.op) {
        case OneStep::Op::PosLit:
        case OneStep::Op::NegLit: return f(a);
        case OneStep::Op::And:
        case OneStep::Op::Or: {
            std::vector<OneStep> ks;
            for (const auto& k : a.kids) ks.push_back(map_literals(k, f));
            return a.op == OneStep::Op::And ? OneStep::all(ks) : OneStep::any(ks);
        }
        default: return a;
    }
}

}  // namespace

OneStep subst_bot(const OneStep& a, const std::string& p) {
    return map_literals(a, [&](const OneStep& l) {
        if (l.letter != p) return l;
        return l.op == OneStep::Op::PosLit ? OneStep::bot() : OneStep::top();
    });
}

Lattice rename_states(const Lattice& l, const std::map<int, int>& h) {
    Lattice r = l;
    if (l.op == Lattice::Op::Atom) {
        auto it = h.find(l.atom);
        if (it != h.end()) r.atom = it->second;
    }
    for (auto& k : r.kids) k = rename_states(k, h);
    return r;
}

OneStep rename_states(const OneStep& a, const std::map<int, int>& h) {
    OneStep r = a;
    switch (a.op) {
        case OneStep::Op::Dia:
        case OneStep::Op::Box: r.arg = rename_states(a.arg, h); break;
        case OneStep::Op::Nabla: {
            std::vector<int> xs;
            for (int b : a.atoms) {
                auto it = h.find(b);
                xs.push_back(it == h.end() ? b : it->second);
            }
            return OneStep::nabla(xs);
        }
        case OneStep::Op::And:
        case OneStep::Op::Or:
            for (auto& k : r.kids) k = rename_states(k, h);
            break;
        default: break;
    }
    return r;
}

namespace {

Lattice simplify(const Lattice& l) {
    if (l.op != Lattice::Op::And && l.op != Lattice::Op::Or) return l;
    std::vector<Lattice> ks;
    for (const auto& k : l.kids) ks.push_back(simplify(k));
    return l.op == Lattice::Op::And ? Lattice::all(ks) : Lattice::any(ks);
}

std::vector<OneStep> dedupe(std::vector<OneStep> ks) {
    std::vector<OneStep> out;
    std::set<std::string> seen;
    for (auto& k : ks)
        if (seen.insert(to_string(k)).second) out.push_back(std::move(k));
    return out;
}

bool complementary(const std::vector<OneStep>& ks) {
    std::set<std::string> pos, neg;
    for (const auto& k : ks) {
        if (k.op == OneStep::Op::PosLit) pos.insert(k.letter);
        if (k.op == OneStep::Op::NegLit) neg.insert(k.letter);
    }
    for (const auto& x : pos)
        if (neg.count(x)) return true;
    return false;
}

bool has(const std::vector<OneStep>& ks, OneStep::Op op, Lattice::Op arg) {
    for (const auto& k : ks)
        if (k.op == op && k.arg.op == arg) return true;
    return false;
}

OneStep tidy_and(std::vector<OneStep> ks) {
    ks = dedupe(std::move(ks));
    if (complementary(ks)) return OneStep::bot();
    int dias = 0;
    for (const auto& k : ks) dias += k.op == OneStep::Op::Dia;
    if (dias > 0 && has(ks, OneStep::Op::Box, Lattice::Op::Bot)) return OneStep::bot();
    if (dias > 1) {
        // ◇⊤ is implied by any other diamond
        std::vector<OneStep> keep;
        for (auto& k : ks)
            if (!(k.op == OneStep::Op::Dia && k.arg.op == Lattice::Op::Top)) keep.push_back(std::move(k));
        ks = std::move(keep);
    }
    return OneStep::all(std::move(ks));
}

std::set<std::string> conjuncts(const OneStep& a) {
    std::set<std::string> out;
    if (a.op == OneStep::Op::And) {
        for (const auto& k : a.kids) out.insert(to_string(k));
    } else {
        out.insert(to_string(a));
    }
    return out;
}

OneStep tidy_or(std::vector<OneStep> ks) {
    ks = dedupe(std::move(ks));
    if (complementary(ks)) return OneStep::top();
    if (has(ks, OneStep::Op::Dia, Lattice::Op::Top) && has(ks, OneStep::Op::Box, Lattice::Op::Bot)) return OneStep::top();
    // absorption: drop a disjunct whose conjuncts include those of another
    std::vector<std::set<std::string>> cs;
    for (const auto& k : ks) cs.push_back(conjuncts(k));
    std::vector<OneStep> keep;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        bool absorbed = false;
        for (std::size_t i = 0; i < ks.size() && !absorbed; ++i)
            absorbed = i != j && cs[i].size() < cs[j].size() &&
                       std::includes(cs[j].begin(), cs[j].end(), cs[i].begin(), cs[i].end());
        if (!absorbed) keep.push_back(std::move(ks[j]));
    }
    return OneStep::any(std::move(keep));
}

}  // namespace

OneStep simplify(const OneStep& a) {
    switch (a.op) {
        case OneStep::Op::Dia: {
            Lattice l = simplify(a.arg);
            return l.op == Lattice::Op::Bot ? OneStep::bot() : OneStep::dia(l);
        }
        case OneStep::Op::Box: {
            Lattice l = simplify(a.arg);
            return l.op == Lattice::Op::Top ? OneStep::top() : OneStep::box(l);
        }
        case OneStep::Op::And:
        case OneStep::Op::Or: {
            std::vector<OneStep> ks;
            for (const auto& k : a.kids) ks.push_back(simplify(k));
            OneStep r = a.op == OneStep::Op::And ? OneStep::all(ks) : OneStep::any(ks);
            if (r.op != a.op) return r;
            return a.op == OneStep::Op::And ? tidy_and(std::move(r.kids)) : tidy_or(std::move(r.kids));
        }
        default: return a;
    }
}

namespace {

void collect_atoms(const Lattice& l, std::set<int>& out) {
    if (l.op == Lattice::Op::Atom) out.insert(l.atom);
    for (const auto& k : l.kids) collect_atoms(k, out);
}

}  // namespace

std::set<int> atoms_of(const OneStep& a) {
    std::set<int> out;
    std::function<void(const OneStep&)> go = [&](const OneStep& x) {
        if (x.op == OneStep::Op::Dia || x.op == OneStep::Op::Box) collect_atoms(x.arg, out);
        if (x.op == OneStep::Op::Nabla) out.insert(x.atoms.begin(), x.atoms.end());
        for (const auto& k : x.kids) go(k);
    };
    go(a);
    return out;
}

std::set<std::string> letters_of(const OneStep& a) {
    std::set<std::string> out;
    std::function<void(const OneStep&)> go = [&](const OneStep& x) {
        if (x.op == OneStep::Op::PosLit || x.op == OneStep::Op::NegLit) out.insert(x.letter);
        for (const auto& k : x.kids) go(k);
    };
    go(a);
    return out;
}

bool positive_in(const OneStep& a, const std::string& p) {
    if (a.op == OneStep::Op::NegLit) return a.letter != p;
    for (const auto& k : a.kids)
        if (!positive_in(k, p)) return false;
    return true;
}

// ---------------------------------------------------------------- disjunctive forms

bool consistent(const std::vector<Literal>& pi) {
    for (const auto& l : pi)
        if (l.positive && std::find(pi.begin(), pi.end(), Literal{l.letter, false}) != pi.end()) return false;
    return true;
}

OneStep to_onestep(const Disjunct& d) {
    std::vector<OneStep> ks;
    for (const auto& l : d.pi) ks.push_back(l.positive ? OneStep::pos(l.letter) : OneStep::negl(l.letter));
    ks.push_back(OneStep::nabla(d.nabla));
    if (ks.size() == 1) return ks.front();
    OneStep r;
    r.op = OneStep::Op::And;
    r.kids = std::move(ks);
    return r;
}

OneStep to_onestep(const DisjForm& d) {
    if (d.empty()) return OneStep::bot();
    if (d.size() == 1) return to_onestep(d.front());
    OneStep r;
    r.op = OneStep::Op::Or;
    for (const auto& x : d) r.kids.push_back(to_onestep(x));
    return r;
}

namespace {

std::optional<Disjunct> as_disjunct(const OneStep& a) {
    if (a.op == OneStep::Op::Nabla) return Disjunct{{}, a.atoms};
    if (a.op != OneStep::Op::And) return std::nullopt;
    Disjunct d;
    bool seen = false;
    for (const auto& k : a.kids) {
        if (k.op == OneStep::Op::PosLit || k.op == OneStep::Op::NegLit) {
            d.pi.push_back({k.letter, k.op == OneStep::Op::PosLit});
        } else if (k.op == OneStep::Op::Nabla && !seen) {
            d.nabla = k.atoms;
            seen = true;
        } else {
            return std::nullopt;
        }
    }
    if (!seen) return std::nullopt;
    std::sort(d.pi.begin(), d.pi.end());
    d.pi.erase(std::unique(d.pi.begin(), d.pi.end()), d.pi.end());
    return d;
}

}  // namespace

std::optional<DisjForm> as_disjunctive(const OneStep& a) {
    DisjForm out;
    if (a.op == OneStep::Op::Bot) return out;
    if (a.op == OneStep::Op::Or) {
        for (const auto& k : a.kids) {
            if (k.op == OneStep::Op::Bot) continue;
            auto d = as_disjunct(k);
            if (!d) return std::nullopt;
            out.push_back(*d);
        }
        return out;
    }
    auto d = as_disjunct(a);
    if (!d) return std::nullopt;
    out.push_back(*d);
    return out;
}

DisjForm normalize(DisjForm d) {
    DisjForm out;
    for (auto& x : d) {
        std::sort(x.pi.begin(), x.pi.end());
        x.pi.erase(std::unique(x.pi.begin(), x.pi.end()), x.pi.end());
        std::sort(x.nabla.begin(), x.nabla.end());
        x.nabla.erase(std::unique(x.nabla.begin(), x.nabla.end()), x.nabla.end());
        if (consistent(x.pi)) out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- dnf

namespace {

using Macro = std::vector<int>;     // sorted set of atoms
using MacroSet = std::vector<Macro>;  // sorted, unique

struct Conj {
    std::vector<Literal> lits;        // sorted
    std::optional<MacroSet> nabla;    // nullopt: unconstrained
};

constexpr std::size_t kMaxDisjuncts = std::size_t{1} << 16;

Macro unite(const Macro& a, const Macro& b) {
    Macro r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

bool subset(const Macro& a, const Macro& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

void canon(MacroSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Minimal conjunctions of atoms equivalent to a lattice term.
std::vector<Macro> lattice_dnf(const Lattice& l) {
    std::vector<Macro> r;
    switch (l.op) {
        case Lattice::Op::Atom: r.push_back({l.atom}); break;
        case Lattice::Op::Top: r.push_back({}); break;
        case Lattice::Op::Bot: break;
        case Lattice::Op::Or:
            for (const auto& k : l.kids) {
                auto s = lattice_dnf(k);
                r.insert(r.end(), s.begin(), s.end());
            }
            break;
        case Lattice::Op::And: {
            r.push_back({});
            for (const auto& k : l.kids) {
                auto s = lattice_dnf(k);
                std::vector<Macro> next;
                for (const auto& a : r)
                    for (const auto& b : s) next.push_back(unite(a, b));
                r = std::move(next);
            }
            break;
        }
    }
    canon(r);
    std::vector<Macro> minimal;
    for (const auto& m : r) {
        bool dominated = false;
        for (const auto& o : r)
            if (o != m && subset(o, m)) dominated = true;
        if (!dominated) minimal.push_back(m);
    }
    return minimal;
}

// ∇B ⇒ ∇C under downward-closed macro markings.
bool nabla_implies(const MacroSet& b, const MacroSet& c) {
    for (const auto& x : b) {
        bool ok = false;
        for (const auto& y : c) ok = ok || subset(y, x);
        if (!ok) return false;
    }
    for (const auto& y : c) {
        bool ok = false;
        for (const auto& x : b) ok = ok || subset(y, x);
        if (!ok) return false;
    }
    return true;
}

// Does conjunct a imply conjunct b?
bool implies(const Conj& a, const Conj& b) {
    if (!std::includes(a.lits.begin(), a.lits.end(), b.lits.begin(), b.lits.end())) return false;
    if (!b.nabla) return true;
    if (!a.nabla) return false;
    return nabla_implies(*a.nabla, *b.nabla);
}

bool same(const Conj& a, const Conj& b) { return a.lits == b.lits && a.nabla == b.nabla; }

std::vector<Conj> prune(std::vector<Conj> cs) {
    std::sort(cs.begin(), cs.end(), [](const Conj& a, const Conj& b) {
        return std::tie(a.lits, a.nabla) < std::tie(b.lits, b.nabla);
    });
    cs.erase(std::unique(cs.begin(), cs.end(), same), cs.end());
    std::vector<Conj> out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < cs.size() && !redundant; ++j)
            if (i != j && implies(cs[i], cs[j])) {
                // keep the first of two equivalent conjuncts
                redundant = !implies(cs[j], cs[i]) || j < i;
            }
        if (!redundant) out.push_back(cs[i]);
    }
    return out;
}

std::optional<std::vector<Literal>> merge_lits(const std::vector<Literal>& a, const std::vector<Literal>& b) {
    std::vector<Literal> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    if (!consistent(r)) return std::nullopt;
    return r;
}

MacroSet minimal(MacroSet s) {
    canon(s);
    MacroSet out;
    for (const auto& m : s) {
        bool dominated = false;
        for (const auto& o : s) dominated = dominated || (o != m && subset(o, m));
        if (!dominated) out.push_back(m);
    }
    return out;
}

MacroSet maximal(MacroSet s) {
    canon(s);
    MacroSet out;
    for (const auto& m : s) {
        bool dominated = false;
        for (const auto& o : s) dominated = dominated || (o != m && subset(m, o));
        if (!dominated) out.push_back(m);
    }
    return out;
}

// π ∧ □⋁box ∧ ⋀◇dias; conjunction stays polynomial in this shape.
struct BoxDia {
    std::vector<Literal> lits;
    std::optional<MacroSet> box;  // nullopt: no box constraint
    MacroSet dias;
};

bool bd_implies(const BoxDia& a, const BoxDia& b) {
    if (!std::includes(a.lits.begin(), a.lits.end(), b.lits.begin(), b.lits.end())) return false;
    if (b.box) {
        if (!a.box) return false;
        for (const auto& x : *a.box) {
            bool ok = false;
            for (const auto& y : *b.box) ok = ok || subset(y, x);
            if (!ok) return false;
        }
    }
    for (const auto& d : b.dias) {
        bool ok = false;
        for (const auto& e : a.dias) ok = ok || subset(d, e);
        if (!ok) return false;
    }
    return true;
}

std::vector<BoxDia> bd_prune(std::vector<BoxDia> cs) {
    std::sort(cs.begin(), cs.end(), [](const BoxDia& a, const BoxDia& b) {
        return std::tie(a.lits, a.box, a.dias) < std::tie(b.lits, b.box, b.dias);
    });
    cs.erase(std::unique(cs.begin(), cs.end(),
                         [](const BoxDia& a, const BoxDia& b) {
                             return a.lits == b.lits && a.box == b.box && a.dias == b.dias;
                         }),
             cs.end());
    std::vector<BoxDia> out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < cs.size() && !redundant; ++j)
            if (i != j && bd_implies(cs[i], cs[j])) redundant = !bd_implies(cs[j], cs[i]) || j < i;
        if (!redundant) out.push_back(cs[i]);
    }
    return out;
}

// Drops conjuncts that demand a successor while forbidding all of them.
std::optional<BoxDia> tidy(BoxDia c) {
    if (c.box) {
        c.box = minimal(std::move(*c.box));
        if (c.box->empty() && !c.dias.empty()) return std::nullopt;
    }
    c.dias = maximal(std::move(c.dias));
    return c;
}

std::vector<BoxDia> boxdia(const OneStep& a) {
    std::vector<BoxDia> out;
    switch (a.op) {
        case OneStep::Op::PosLit:
        case OneStep::Op::NegLit:
            out.push_back({{Literal{a.letter, a.op == OneStep::Op::PosLit}}, std::nullopt, {}});
            return out;
        case OneStep::Op::Top: out.push_back({{}, std::nullopt, {}}); return out;
        case OneStep::Op::Bot: return out;
        case OneStep::Op::Dia:
            for (const auto& c : lattice_dnf(a.arg)) out.push_back({{}, std::nullopt, {c}});
            return bd_prune(std::move(out));
        case OneStep::Op::Box: out.push_back({{}, lattice_dnf(a.arg), {}}); return out;
        case OneStep::Op::Nabla: {
            MacroSet s;
            for (int b : a.atoms) s.push_back({b});
            canon(s);
            out.push_back({{}, s, s});
            return out;
        }
        case OneStep::Op::Or:
            for (const auto& k : a.kids) {
                auto s = boxdia(k);
                out.insert(out.end(), s.begin(), s.end());
            }
            return bd_prune(std::move(out));
        case OneStep::Op::And: {
            out.push_back({{}, std::nullopt, {}});
            for (const auto& k : a.kids) {
                auto s = boxdia(k);
                std::vector<BoxDia> next;
                for (const auto& x : out)
                    for (const auto& y : s) {
                        auto lits = merge_lits(x.lits, y.lits);
                        if (!lits) continue;
                        BoxDia c{*lits, std::nullopt, x.dias};
                        c.dias.insert(c.dias.end(), y.dias.begin(), y.dias.end());
                        if (x.box && y.box) {
                            MacroSet u;
                            for (const auto& m : *x.box)
                                for (const auto& n : *y.box) u.push_back(unite(m, n));
                            c.box = std::move(u);
                        } else {
                            c.box = x.box ? x.box : y.box;
                        }
                        if (auto t = tidy(std::move(c))) next.push_back(std::move(*t));
                    }
                if (next.size() > kMaxDisjuncts) throw ResourceError("dnf_one_step: too many disjuncts");
                out = bd_prune(std::move(next));
            }
            return out;
        }
    }
    return out;
}

// □⋁C ∧ ⋀◇D as a disjunction of ∇-sets.  Each ◇d is first strengthened to
// ◇(d ∪ c) for a box macro c its witness satisfies; box macros below some
// diamond then have a witness for free and the others are optional.
void to_nablas(const BoxDia& c, std::vector<Conj>& out) {
    const MacroSet C = c.box ? *c.box : MacroSet{Macro{}};
    const MacroSet& D = c.dias;
    if (C.empty()) {
        if (D.empty()) out.push_back({c.lits, MacroSet{}});
        return;
    }
    std::vector<MacroSet> options;
    for (const auto& d : D) {
        MacroSet o;
        for (const auto& x : C)
            if (subset(x, d)) o = {d};
        if (o.empty())
            for (const auto& x : C) o.push_back(unite(d, x));
        canon(o);
        options.push_back(std::move(o));
    }
    std::vector<std::size_t> pick(D.size(), 0);
    for (;;) {
        MacroSet chosen;
        for (std::size_t i = 0; i < D.size(); ++i) chosen.push_back(options[i][pick[i]]);
        MacroSet forced, optional;
        for (const auto& x : C) {
            bool below = false;
            for (const auto& d : chosen) below = below || subset(x, d);
            (below ? forced : optional).push_back(x);
        }
        if (optional.size() > 16) throw ResourceError("dnf_one_step: box argument too wide");
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << optional.size()); ++m) {
            MacroSet s = chosen;
            s.insert(s.end(), forced.begin(), forced.end());
            for (std::size_t i = 0; i < optional.size(); ++i)
                if (m >> i & 1) s.push_back(optional[i]);
            canon(s);
            out.push_back({c.lits, std::move(s)});
            if (out.size() > kMaxDisjuncts) throw ResourceError("dnf_one_step: too many disjuncts");
        }
        std::size_t i = 0;
        while (i < D.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == D.size()) break;
    }
}

}  // namespace

std::vector<MacroDisjunct> dnf_one_step(const OneStep& a) {
    std::vector<Conj> full;
    for (const auto& c : boxdia(a)) to_nablas(c, full);
    full = prune(std::move(full));
    std::vector<MacroDisjunct> out;
    for (auto& c : full) out.push_back({c.lits, *c.nabla});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- translations

namespace {

OneStep lit(const Literal& l) { return l.positive ? OneStep::pos(l.letter) : OneStep::negl(l.letter); }

std::vector<int> shifted(const std::vector<int>& xs, int off) {
    std::vector<int> r;
    for (int x : xs) r.push_back(x + off);
    return r;
}

OneStep disjunct(const std::vector<Literal>& pi, const std::vector<int>& dias, const std::vector<int>& nabla) {
    std::vector<OneStep> ks;
    for (const auto& l : pi) ks.push_back(lit(l));
    for (int b : dias) ks.push_back(OneStep::dia(Lattice::at(b)));
    ks.push_back(OneStep::nabla(nabla));
    if (ks.size() == 1) return ks.front();
    OneStep r;
    r.op = OneStep::Op::And;
    r.kids = std::move(ks);
    return r;
}

OneStep disjunction(std::vector<OneStep> ks) {
    if (ks.empty()) return OneStep::bot();
    if (ks.size() == 1) return ks.front();
    OneStep r;
    r.op = OneStep::Op::Or;
    r.kids = std::move(ks);
    return r;
}

bool has_pos(const std::vector<Literal>& pi, const std::string& p) {
    return std::binary_search(pi.begin(), pi.end(), Literal{p, true});
}

void require_positive(const DisjForm& d, const std::string& p, const char* who) {
    for (const auto& x : d)
        if (std::binary_search(x.pi.begin(), x.pi.end(), Literal{p, false}))
            throw PreconditionError(std::string(who) + ": input contains !" + p);
}

// ⋁{π ∧ ◇b ∧ ∇B₂^⊥ | {b} ∪ B₂ = B}
void single_covers(const Disjunct& x, int off, std::vector<OneStep>& out) {
    const auto& B = x.nabla;
    for (int b : B) {
        std::vector<int> rest;
        for (int c : B)
            if (c != b) rest.push_back(c);
        // B₂ ⊇ B∖{b}, optionally with b itself
        out.push_back(disjunct(x.pi, {b}, shifted(rest, off)));
        out.push_back(disjunct(x.pi, {b}, shifted(B, off)));
    }
}

}  // namespace

DisjForm translate_M(const DisjForm& d, const std::string& p) {
    DisjForm out;
    for (const auto& x : d) {
        Disjunct y;
        for (const auto& l : x.pi)
            if (l.positive || l.letter != p) y.pi.push_back(l);
        y.nabla = x.nabla;
        out.push_back(std::move(y));
    }
    return normalize(std::move(out));
}

OneStep translate_W(const DisjForm& d, int off) {
    std::vector<OneStep> out;
    for (const auto& x : d) {
        const auto& B = x.nabla;
        const std::size_t k = B.size();
        // each element of B goes to B₁ only, B₂ only, or both
        std::vector<int> choice(k, 0);
        for (;;) {
            std::vector<int> b1, b2;
            for (std::size_t i = 0; i < k; ++i) {
                if (choice[i] != 1) b1.push_back(B[i]);
                if (choice[i] != 0) b2.push_back(B[i] + off);
            }
            out.push_back(disjunct(x.pi, b1, b2));
            std::size_t i = 0;
            while (i < k && ++choice[i] == 3) choice[i++] = 0;
            if (i == k) break;
        }
    }
    return disjunction(std::move(out));
}

OneStep translate_B(const DisjForm& d, int off) {
    std::vector<OneStep> out;
    for (const auto& x : d) {
        out.push_back(disjunct(x.pi, {}, shifted(x.nabla, off)));
        single_covers(x, off, out);
    }
    return disjunction(std::move(out));
}

OneStep translate_F(const DisjForm& d, const std::string& p, int off) {
    require_positive(d, p, "translate_F");
    std::vector<OneStep> out;
    for (const auto& x : d) {
        if (has_pos(x.pi, p)) out.push_back(disjunct(x.pi, {}, shifted(x.nabla, off)));
        else single_covers(x, off, out);
    }
    return disjunction(std::move(out));
}

OneStep translate_A(const DisjForm& d, const std::string& p, int off) {
    require_positive(d, p, "translate_A");
    std::vector<OneStep> out;
    for (const auto& x : d) {
        out.push_back(disjunct(x.pi, {}, shifted(x.nabla, off)));
        if (!has_pos(x.pi, p)) single_covers(x, off, out);
    }
    return disjunction(std::move(out));
}

OneStep translate_U(const DisjForm& d) {
    std::vector<OneStep> out;
    for (const auto& x : d) {
        std::vector<OneStep> ks;
        for (const auto& l : x.pi) ks.push_back(lit(l));
        std::vector<Lattice> cover;
        for (int b : x.nabla) cover.push_back(Lattice::at(b));
        ks.push_back(OneStep::box(Lattice::any(cover)));
        if (ks.size() == 1) {
            out.push_back(ks.front());
        } else {
            OneStep r;
            r.op = OneStep::Op::And;
            r.kids = std::move(ks);
            out.push_back(std::move(r));
        }
    }
    return disjunction(std::move(out));
}

// ---------------------------------------------------------------- classes

namespace {

struct ClassCheck {
    OneStepClass cls;
    const std::string& p;
    const std::vector<bool>& initial;

    bool is_initial(int a) const { return a >= 0 && a < static_cast<int>(initial.size()) && initial[a]; }

    bool atoms_where(const OneStep& a, bool want_initial) const {
        for (int x : atoms_of(a))
            if (is_initial(x) != want_initial) return false;
        return true;
    }

    bool p_free(const OneStep& a) const { return letters_of(a).count(p) == 0; }

    bool beta(const OneStep& a) const { return p_free(a) && atoms_where(a, false); }

    bool is_p(const OneStep& a) const { return a.op == OneStep::Op::PosLit && a.letter == p; }

    bool dia_atom(const OneStep& a) const {
        return a.op == OneStep::Op::Dia && a.arg.op == Lattice::Op::Atom && is_initial(a.arg.atom);
    }

    bool alpha(const OneStep& a) const {
        using Op = OneStep::Op;
        switch (cls) {
            case OneStepClass::Final: return beta(a);
            case OneStepClass::WInitial:
                if (is_p(a) || beta(a) || a.op == Op::Top || a.op == Op::Bot) return true;
                if (a.op == Op::Dia) return atoms_where(a, true);
                if (a.op == Op::And || a.op == Op::Or) return all_alpha(a);
                return false;
            case OneStepClass::DInitial:
                if (is_p(a) || beta(a) || a.op == Op::Top || a.op == Op::Bot) return true;
                if (p_free(a) && atoms_where(a, true)) return true;
                if (a.op == Op::And || a.op == Op::Or) return all_alpha(a);
                return false;
            case OneStepClass::BInitial:
                if (is_p(a) || dia_atom(a) || beta(a) || a.op == Op::Top || a.op == Op::Bot) return true;
                if (a.op == Op::Or) return all_alpha(a);
                if (a.op == Op::And) return one_active(a, true);
                return false;
            case OneStepClass::FInitial:
            case OneStepClass::AInitial:
                if (is_p(a) || dia_atom(a) || a.op == Op::Bot) return true;
                if (cls == OneStepClass::AInitial && beta(a)) return true;
                if (a.op == Op::Or) return all_alpha(a);
                if (a.op == Op::And) return one_active(a, false);
                return false;
        }
        return false;
    }

    bool all_alpha(const OneStep& a) const {
        for (const auto& k : a.kids)
            if (!alpha(k)) return false;
        return true;
    }

    // all conjuncts are β except one α; for B further copies of p may join
    bool one_active(const OneStep& a, bool p_repeats) const {
        std::vector<const OneStep*> act;
        for (const auto& k : a.kids)
            if (!beta(k) && !(p_repeats && is_p(k))) act.push_back(&k);
        if (p_repeats) return act.size() <= 1 && (act.empty() || alpha(*act.front()));
        return act.size() == 1 && alpha(*act.front());
    }
};

}  // namespace

bool in_onestep_class(const OneStep& a, OneStepClass c, const std::string& p, const std::vector<bool>& initial) {
    ClassCheck chk{c, p, initial};
    OneStep e = expand_nabla(a);
    return chk.alpha(e);
}

// ---------------------------------------------------------------- formulas

namespace {

Formula lattice_formula(const Lattice& l, const std::vector<std::string>& names) {
    switch (l.op) {
        case Lattice::Op::Atom: return prop(names.at(l.atom));
        case Lattice::Op::Top: return top();
        case Lattice::Op::Bot: return bot();
        case Lattice::Op::And:
        case Lattice::Op::Or: {
            std::vector<Formula> fs;
            for (const auto& k : l.kids) fs.push_back(lattice_formula(k, names));
            return l.op == Lattice::Op::And ? conj_all(fs) : disj_all(fs);
        }
    }
    return top();
}

}  // namespace

Formula to_formula(const OneStep& a, const std::vector<std::string>& names) {
    switch (a.op) {
        case OneStep::Op::PosLit: return prop(a.letter);
        case OneStep::Op::NegLit: return nprop(a.letter);
        case OneStep::Op::Top: return top();
        case OneStep::Op::Bot: return bot();
        case OneStep::Op::Dia: return simp_dia(lattice_formula(a.arg, names));
        case OneStep::Op::Box: return simp_box(lattice_formula(a.arg, names));
        case OneStep::Op::Nabla: return to_formula(expand_nabla(a), names);
        case OneStep::Op::And:
        case OneStep::Op::Or: {
            std::vector<Formula> fs;
            for (const auto& k : a.kids) fs.push_back(to_formula(k, names));
            return a.op == OneStep::Op::And ? conj_all(fs) : disj_all(fs);
        }
    }
    return top();
}

// ---------------------------------------------------------------- printing

namespace {

void print(const Lattice& l, int level, std::string& out) {
    switch (l.op) {
        case Lattice::Op::Atom: out += std::to_string(l.atom); return;
        case Lattice::Op::Top: out += "tt"; return;
        case Lattice::Op::Bot: out += "ff"; return;
        case Lattice::Op::And:
        case Lattice::Op::Or: {
            int mine = l.op == Lattice::Op::Or ? 1 : 2;
            bool paren = mine < level;
            if (paren) out += '(';
            for (std::size_t i = 0; i < l.kids.size(); ++i) {
                if (i) out += mine == 1 ? " | " : " & ";
                print(l.kids[i], mine + 1, out);
            }
            if (paren) out += ')';
            return;
        }
    }
}

void print(const OneStep& a, int level, std::string& out) {
    switch (a.op) {
        case OneStep::Op::PosLit: out += a.letter; return;
        case OneStep::Op::NegLit: out += "!" + a.letter; return;
        case OneStep::Op::Top: out += "tt"; return;
        case OneStep::Op::Bot: out += "ff"; return;
        case OneStep::Op::Dia:
        case OneStep::Op::Box:
            out += a.op == OneStep::Op::Dia ? "<>" : "[]";
            print(a.arg, 3, out);
            return;
        case OneStep::Op::Nabla:
            out += "nabla{";
            for (std::size_t i = 0; i < a.atoms.size(); ++i) out += (i ? "," : "") + std::to_string(a.atoms[i]);
            out += "}";
            return;
        case OneStep::Op::And:
        case OneStep::Op::Or: {
            int mine = a.op == OneStep::Op::Or ? 1 : 2;
            bool paren = mine < level;
            if (paren) out += '(';
            for (std::size_t i = 0; i < a.kids.size(); ++i) {
                if (i) out += mine == 1 ? " | " : " & ";
                print(a.kids[i], mine + 1, out);
            }
            if (paren) out += ')';
            return;
        }
    }
}

class OneStepParser {
public:
    explicit OneStepParser(std::string_view t) : text_(t) {}

    OneStep run() {
        OneStep a = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected input");
        return a;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& m) { throw ParseError("one-step formula: " + m, pos_); }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }
    std::string word() {
        skip();
        std::size_t e = pos_;
        while (e < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_')) ++e;
        std::string w(text_.substr(pos_, e - pos_));
        pos_ = e;
        return w;
    }
    int number() {
        std::string w = word();
        if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            fail("expected state number");
        return std::stoi(w);
    }

    OneStep expr() {
        std::vector<OneStep> ks{conj()};
        while (eat("|")) ks.push_back(conj());
        if (ks.size() == 1) return ks.front();
        OneStep r;
        r.op = OneStep::Op::Or;
        r.kids = std::move(ks);
        return r;
    }
    OneStep conj() {
        std::vector<OneStep> ks{unary()};
        while (eat("&")) ks.push_back(unary());
        if (ks.size() == 1) return ks.front();
        OneStep r;
        r.op = OneStep::Op::And;
        r.kids = std::move(ks);
        return r;
    }
    OneStep unary() {
        if (eat("<>")) return OneStep::dia(lprimary());
        if (eat("[]")) return OneStep::box(lprimary());
        if (eat("(")) {
            OneStep a = expr();
            if (!eat(")")) fail("expected ')'");
            return a;
        }
        if (eat("!")) {
            std::string w = word();
            if (!is_identifier(w)) fail("expected letter after '!'");
            return OneStep::negl(w);
        }
        std::size_t save = pos_;
        std::string w = word();
        if (w == "tt") return OneStep::top();
        if (w == "ff") return OneStep::bot();
        if (w == "nabla") {
            if (!eat("{")) fail("expected '{'");
            std::vector<int> xs;
            if (!eat("}")) {
                xs.push_back(number());
                while (eat(",")) xs.push_back(number());
                if (!eat("}")) fail("expected '}'");
            }
            return OneStep::nabla(xs);
        }
        if (is_identifier(w)) return OneStep::pos(w);
        pos_ = save;
        fail("unexpected token");
    }
    Lattice lexpr() {
        std::vector<Lattice> ks{lconj()};
        while (eat("|")) ks.push_back(lconj());
        if (ks.size() == 1) return ks.front();
        return {Lattice::Op::Or, -1, std::move(ks)};
    }
    Lattice lconj() {
        std::vector<Lattice> ks{lprimary()};
        while (eat("&")) ks.push_back(lprimary());
        if (ks.size() == 1) return ks.front();
        return {Lattice::Op::And, -1, std::move(ks)};
    }
    Lattice lprimary() {
        if (eat("(")) {
            Lattice l = lexpr();
            if (!eat(")")) fail("expected ')'");
            return l;
        }
        skip();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) return Lattice::at(number());
        std::string w = word();
        if (w == "tt") return Lattice::top();
        if (w == "ff") return Lattice::bot();
        fail("expected lattice term");
    }
};

}  // namespace

std::string to_string(const Lattice& l) {
    std::string out;
    print(l, 0, out);
    return out;
}

std::string to_string(const OneStep& a) {
    std::string out;
    print(a, 0, out);
    return out;
}

OneStep parse_onestep(std::string_view text) {
    OneStepParser p(text);
    return p.run();
}

}  // namespace mucalc
