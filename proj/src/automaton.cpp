#include "mucalc/automaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mucalc/error.hpp"
#include "mucalc/graph.hpp"

namespace mucalc {

int ModalAutomaton::add(OneStep t, int priority, std::string name) {
    theta.push_back(std::move(t));
    prio.push_back(priority);
    label.push_back(std::move(name));
    if (final_part) final_part->push_back(false);
    return size() - 1;
}

bool ModalAutomaton::disjunctive() const {
    for (const auto& t : theta)
        if (!as_disjunctive(t)) return false;
    return true;
}

DisjForm ModalAutomaton::disj(int a) const {
    auto d = as_disjunctive(theta.at(a));
    if (!d) throw PreconditionError("state " + std::to_string(a) + " is not disjunctive");
    return *d;
}

bool ModalAutomaton::positive_in(const std::string& p) const {
    for (const auto& t : theta)
        if (!mucalc::positive_in(t, p)) return false;
    return true;
}

bool ModalAutomaton::bipartite() const {
    if (!final_part) return false;
    for (int a = 0; a < size(); ++a) {
        if (!(*final_part)[a]) continue;
        for (int b : atoms_of(theta[a]))
            if (!(*final_part)[b]) return false;
    }
    return true;
}

std::vector<std::vector<int>> occurrence_graph(const ModalAutomaton& A) {
    std::vector<std::vector<int>> g(A.size());
    for (int b = 0; b < A.size(); ++b)
        for (int a : atoms_of(A.theta[b])) g[b].push_back(a);
    return g;
}

std::vector<std::vector<bool>> below(const ModalAutomaton& A) {
    auto g = occurrence_graph(A);
    const int n = A.size();
    std::vector<std::vector<bool>> r(n);
    for (int a = 0; a < n; ++a) {
        std::vector<bool> start(n, false);
        for (int b : g[a]) start[b] = true;
        r[a] = reachable_from(g, start);
    }
    return r;
}

std::vector<int> bisimulation_classes(const ModalAutomaton& A) {
    const int n = A.size();
    std::vector<int> cls(n, 0);
    {
        std::map<std::pair<int, bool>, int> ids;
        for (int a = 0; a < n; ++a) {
            auto key = std::make_pair(A.prio[a], A.final_part && (*A.final_part)[a]);
            cls[a] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
        }
    }
    std::vector<std::set<int>> atoms(n);
    for (int a = 0; a < n; ++a) atoms[a] = atoms_of(A.theta[a]);
    for (std::size_t count = 0;;) {
        std::map<std::pair<int, std::string>, int> ids;
        std::vector<int> next(n);
        for (int a = 0; a < n; ++a) {
            std::map<int, int> h;
            for (int b : atoms[a]) h[b] = cls[b];
            auto key = std::make_pair(cls[a], to_string(rename_states(A.theta[a], h)));
            next[a] = ids.emplace(std::move(key), static_cast<int>(ids.size())).first->second;
        }
        cls = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    // number classes by their smallest member
    std::map<int, int> renumber;
    for (int a = 0; a < n; ++a) renumber.emplace(cls[a], static_cast<int>(renumber.size()));
    for (int a = 0; a < n; ++a) cls[a] = renumber.at(cls[a]);
    return cls;
}

InitializedAutomaton quotient(const InitializedAutomaton& A) {
    const ModalAutomaton& M = A.aut;
    auto cls = bisimulation_classes(M);
    int k = 0;
    for (int c : cls) k = std::max(k, c + 1);
    InitializedAutomaton out;
    std::vector<int> rep(k, -1);
    for (int a = 0; a < M.size(); ++a)
        if (rep[cls[a]] < 0) rep[cls[a]] = a;
    if (M.final_part) out.aut.final_part = std::vector<bool>{};
    for (int c = 0; c < k; ++c) {
        int a = rep[c];
        std::map<int, int> h;
        for (int b : atoms_of(M.theta[a])) h[b] = cls[b];
        out.aut.add(rename_states(M.theta[a], h), M.prio[a], M.label[a]);
        if (M.final_part) out.aut.final_part->back() = (*M.final_part)[a];
    }
    out.init = cls[A.init];
    return out;
}

// ---------------------------------------------------------------- from_formula

namespace {

class Builder {
public:
    explicit Builder(const Formula& xi) : xi_(xi) {}

    InitializedAutomaton run() {
        collect(xi_);
        assign_priorities();
        InitializedAutomaton out;
        int init = state(xi_, xi_->is_binder() ? prio_.at(xi_.get()) : 0);
        while (!todo_.empty()) {
            auto [f, k] = todo_.back();
            todo_.pop_back();
            int id = ids_.at({f.get(), k});
            theta_[id] = expand(f, 0, f->is_binder());
        }
        for (std::size_t i = 0; i < theta_.size(); ++i) {
            std::string name = forms_[i]->tree_size < 120 ? to_string(forms_[i]) : "#" + std::to_string(i);
            out.aut.add(theta_[i], prios_[i], name);
        }
        out.init = init;
        return out;
    }

private:
    Formula xi_;
    std::unordered_map<const Node*, Formula> fixpoints_;  // closed fixpoints of the closure
    std::unordered_map<const Node*, int> prio_;
    std::unordered_map<const Node*, Formula> unfolded_;
    std::map<std::pair<const Node*, int>, int> ids_;
    std::vector<Formula> forms_;
    std::vector<int> prios_;
    std::vector<OneStep> theta_;
    std::vector<std::pair<Formula, int>> todo_;
    std::map<std::tuple<const Node*, int, bool>, OneStep> memo_;

    const Formula& unfold(const Formula& f) {
        auto it = unfolded_.find(f.get());
        if (it != unfolded_.end()) return it->second;
        Formula u = substitute_nocapture(f->left, {{f->name, f}});
        return unfolded_.emplace(f.get(), u).first->second;
    }

    // closed formulas reachable by decomposition and unfolding
    void collect(const Formula& start) {
        std::unordered_map<const Node*, bool> seen;
        std::vector<Formula> stack{start};
        while (!stack.empty()) {
            Formula f = stack.back();
            stack.pop_back();
            if (!seen.emplace(f.get(), true).second) continue;
            switch (f->kind) {
                case Kind::Neg: throw PreconditionError("from_formula: input is not in negation normal form");
                case Kind::And:
                case Kind::Or:
                    stack.push_back(f->left);
                    stack.push_back(f->right);
                    break;
                case Kind::Dia:
                case Kind::Box: stack.push_back(f->left); break;
                case Kind::Mu:
                case Kind::Nu:
                    fixpoints_.emplace(f.get(), f);
                    stack.push_back(unfold(f));
                    break;
                default: break;
            }
        }
    }

    // prio(F) = least value ≥ max(1, prio(G)) over closure fixpoints G that
    // properly contain F, odd for μ and even for ν.
    void assign_priorities() {
        std::vector<Formula> fs;
        for (auto& [k, f] : fixpoints_) fs.push_back(f);
        std::unordered_map<const Node*, std::vector<const Node*>> inside;
        std::unordered_map<const Node*, std::uint64_t> size;
        for (const auto& g : fs) {
            std::vector<const Node*> found;
            std::unordered_map<const Node*, bool> seen;
            std::vector<const Node*> stack{g.get()};
            std::uint64_t count = 0;
            while (!stack.empty()) {
                const Node* n = stack.back();
                stack.pop_back();
                if (!n || !seen.emplace(n, true).second) continue;
                ++count;
                if (n != g.get() && fixpoints_.count(n)) found.push_back(n);
                stack.push_back(n->left.get());
                stack.push_back(n->right.get());
            }
            inside[g.get()] = std::move(found);
            size[g.get()] = count;
        }
        std::sort(fs.begin(), fs.end(), [&](const Formula& a, const Formula& b) {
            if (size[a.get()] != size[b.get()]) return size[a.get()] > size[b.get()];
            return a->id < b->id;
        });
        std::unordered_map<const Node*, int> floor;
        for (const auto& f : fs) {
            int lo = std::max(1, floor[f.get()]);
            bool odd = f->kind == Kind::Mu;
            if ((lo % 2 != 0) != odd) ++lo;
            prio_[f.get()] = lo;
            for (const Node* g : inside[f.get()]) floor[g] = std::max(floor[g], lo);
        }
    }

    int state(const Formula& f, int k) {
        auto key = std::make_pair(f.get(), k);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(forms_.size());
        ids_.emplace(key, id);
        forms_.push_back(f);
        prios_.push_back(k);
        theta_.emplace_back();
        todo_.emplace_back(f, k);
        return id;
    }

    int target(const Formula& chi, int acc) {
        if (chi->is_binder()) return state(chi, std::max(acc, prio_.at(chi.get())));
        return state(chi, acc);
    }

    OneStep expand(const Formula& f, int acc, bool skip) {
        auto key = std::make_tuple(f.get(), acc, skip);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        OneStep r;
        switch (f->kind) {
            case Kind::Top: r = OneStep::top(); break;
            case Kind::Bot: r = OneStep::bot(); break;
            case Kind::Prop: r = OneStep::pos(f->name); break;
            case Kind::NegProp: r = OneStep::negl(f->name); break;
            case Kind::And: r = OneStep::all({expand(f->left, acc, false), expand(f->right, acc, false)}); break;
            case Kind::Or: r = OneStep::any({expand(f->left, acc, false), expand(f->right, acc, false)}); break;
            case Kind::Dia: r = OneStep::dia(Lattice::at(target(f->left, acc))); break;
            case Kind::Box: r = OneStep::box(Lattice::at(target(f->left, acc))); break;
            case Kind::Mu:
            case Kind::Nu: {
                int k = skip ? acc : std::max(acc, prio_.at(f.get()));
                r = expand(unfold(f), k, false);
                break;
            }
            case Kind::Neg: throw PreconditionError("from_formula: input is not in negation normal form");
        }
        memo_.emplace(key, r);
        return r;
    }
};

}  // namespace

InitializedAutomaton from_formula(const Formula& input) {
    if (!input->nnf) throw PreconditionError("from_formula: input is not in negation normal form");
    if (!is_guarded(input)) throw PreconditionError("from_formula: input is not guarded");
    Formula xi = is_well_named(input) ? input : well_name(input);
    Builder b(xi);
    return b.run();
}

// ---------------------------------------------------------------- linearize

bool is_linear(const ModalAutomaton& A) {
    std::vector<int> p = A.prio;
    std::sort(p.begin(), p.end());
    return std::adjacent_find(p.begin(), p.end()) == p.end();
}

ModalAutomaton linearize(const ModalAutomaton& A) {
    const int n = A.size();
    auto g = occurrence_graph(A);
    Sccs s = strongly_connected(g);
    // condensation: cluster c depends on the clusters below it
    std::vector<std::set<int>> down(s.count);
    std::vector<std::vector<int>> members(s.count);
    for (int a = 0; a < n; ++a) {
        members[s.comp[a]].push_back(a);
        for (int b : g[a])
            if (s.comp[b] != s.comp[a]) down[s.comp[a]].insert(s.comp[b]);
    }
    auto is_final = [&](int c) {
        if (!A.final_part) return false;
        for (int a : members[c])
            if (!(*A.final_part)[a]) return false;
        return true;
    };
    std::vector<int> order;
    std::vector<bool> placed(s.count, false);
    while (static_cast<int>(order.size()) < s.count) {
        int best = -1;
        for (int c = 0; c < s.count; ++c) {
            if (placed[c]) continue;
            bool ready = true;
            for (int d : down[c]) ready = ready && placed[d];
            if (!ready) continue;
            auto key = [&](int x) { return std::make_pair(!is_final(x), members[x].front()); };
            if (best < 0 || key(c) < key(best)) best = c;
        }
        placed[best] = true;
        order.push_back(best);
    }
    ModalAutomaton r = A;
    int next = 0;
    for (int c : order) {
        auto ms = members[c];
        std::sort(ms.begin(), ms.end(), [&](int a, int b) { return std::make_pair(A.prio[a], a) < std::make_pair(A.prio[b], b); });
        for (int a : ms) {
            int v = next;
            if ((v % 2) != (A.prio[a] % 2)) ++v;
            r.prio[a] = v;
            next = v + 1;
        }
    }
    return r;
}

// ---------------------------------------------------------------- to_formula

namespace {

std::string fresh_prefix(const ModalAutomaton& A) {
    std::set<std::string> letters;
    for (const auto& t : A.theta) {
        auto ls = letters_of(t);
        letters.insert(ls.begin(), ls.end());
    }
    for (std::string pre : {"x", "y", "z", "s", "u", "v", "w"}) {
        for (int tries = 0; tries < 4; ++tries, pre += "_") {
            bool clash = false;
            for (const auto& l : letters) {
                if (l.size() <= pre.size() || l.compare(0, pre.size(), pre) != 0) continue;
                std::string rest = l.substr(pre.size());
                clash = clash || std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; });
            }
            if (!clash) return pre;
        }
    }
    return "st_";
}

Lattice constants(const Lattice& l, const std::vector<int>& value) {
    if (l.op == Lattice::Op::Atom) {
        if (value[l.atom] > 0) return Lattice::top();
        if (value[l.atom] < 0) return Lattice::bot();
        return l;
    }
    Lattice r = l;
    for (auto& k : r.kids) k = constants(k, value);
    return r;
}

OneStep constants(const OneStep& a, const std::vector<int>& value) {
    OneStep r = a;
    if (r.op == OneStep::Op::Dia || r.op == OneStep::Op::Box) r.arg = constants(r.arg, value);
    for (auto& k : r.kids) k = constants(k, value);
    return r;
}

// Truth of Θ on every one-step model in which each successor carries the
// marking `marked` (true) or on none of them (false).
bool uniform(const OneStep& theta, const std::set<int>& marked, bool want) {
    auto ls = letters_of(theta);
    std::vector<std::string> letters(ls.begin(), ls.end());
    if (letters.size() > 16) return false;
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << letters.size()); ++bits) {
        OneStepModel m;
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (bits >> i & 1) m.Y.insert(letters[i]);
        for (int size = 0; size <= 1; ++size) {
            m.size = size;
            m.marking.assign(size, marked);
            if (sat1(m, theta) != want) return false;
        }
    }
    return true;
}

// States won by one player on every model: a greatest fixpoint over the states
// whose priority favours that player, closed under finite escapes.
std::vector<bool> trivial_states(const ModalAutomaton& A, bool accepting) {
    const int n = A.size();
    const int good = accepting ? 0 : 1;
    std::vector<bool> in(n, false);
    std::vector<OneStep> th(n);
    for (int a = 0; a < n; ++a) th[a] = expand_nabla(A.theta[a]);
    auto holds = [&](int a) {
        std::set<int> marked;
        for (int b = 0; b < n; ++b)
            if (in[b] == accepting) marked.insert(b);
        return uniform(th[a], marked, accepting);
    };
    for (int a = 0; a < n; ++a) in[a] = A.prio[a] % 2 == good;
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < n; ++a)
            if (in[a] && !holds(a)) in[a] = false, changed = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < n; ++a)
            if (!in[a] && holds(a)) in[a] = true, changed = true;
    }
    return in;
}

// Replaces trivially accepting or rejecting states by constants and drops
// the states not reachable from a.
std::pair<ModalAutomaton, int> reduce(const ModalAutomaton& A, int a) {
    const int n = A.size();
    auto yes = trivial_states(A, true);
    auto no = trivial_states(A, false);
    std::vector<int> value(n, 0);
    for (int b = 0; b < n; ++b) value[b] = yes[b] ? 1 : (no[b] ? -1 : 0);
    std::vector<OneStep> th(n);
    for (int b = 0; b < n; ++b) th[b] = simplify(constants(expand_nabla(A.theta[b]), value));
    ModalAutomaton r;
    if (value[a] != 0) {
        r.add(value[a] > 0 ? OneStep::top() : OneStep::bot(), 0, A.label[a]);
        return {r, 0};
    }
    std::vector<int> id(n, -1);
    std::vector<int> queue{a};
    id[a] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (int b : atoms_of(th[queue[i]]))
            if (id[b] < 0) id[b] = static_cast<int>(queue.size()), queue.push_back(b);
    std::map<int, int> h;
    for (int b = 0; b < n; ++b)
        if (id[b] >= 0) h[b] = id[b];
    for (int b : queue) r.add(rename_states(th[b], h), A.prio[b], A.label[b]);
    InitializedAutomaton q = quotient({std::move(r), 0});
    return {std::move(q.aut), q.init};
}

}  // namespace

Formula to_formula(const ModalAutomaton& input, int start) {
    auto [reduced, a] = reduce(input, start);
    ModalAutomaton A = linearize(reduced);
    const int n = A.size();
    std::string pre = fresh_prefix(A);
    std::vector<std::string> names(n);
    for (int i = 0; i < n; ++i) names[i] = pre + std::to_string(i);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return A.prio[x] < A.prio[y]; });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;
    // last level at which T(b) is still read
    std::vector<int> last(n, -1);
    last[a] = n;
    std::vector<std::set<int>> atoms(n);
    for (int m = 0; m < n; ++m) {
        atoms[m] = atoms_of(A.theta[m]);
        for (int b : atoms[m])
            if (rank[b] < rank[m]) last[b] = std::max(last[b], rank[m]);
    }
    std::vector<Formula> T(n);
    for (int i = 0; i < n; ++i) T[i] = prop(names[i]);
    std::vector<int> live;
    for (int k = 0; k < n; ++k) {
        int m = order[k];
        std::map<std::string, Formula> sub;
        for (int b : atoms[m])
            if (rank[b] < k) sub.emplace(names[b], T[b]);
        Formula body = to_formula(A.theta[m], names);
        if (!sub.empty()) body = substitute_nocapture(body, sub);
        Formula tm = body->has_free(names[m]) ? binder(A.prio[m] % 2 != 0 ? Kind::Mu : Kind::Nu, names[m], body) : body;
        std::vector<int> still;
        for (int b : live) {
            if (T[b]->has_free(names[m])) T[b] = substitute_nocapture(T[b], {{names[m], tm}});
            if (last[b] > k) still.push_back(b);
        }
        T[m] = tm;
        if (last[m] > k) still.push_back(m);
        live = std::move(still);
    }
    return T[a];
}

Formula to_formula(const InitializedAutomaton& A) { return to_formula(A.aut, A.init); }

// ---------------------------------------------------------------- dumps

std::string dump(const InitializedAutomaton& A) {
    std::ostringstream out;
    out << "states " << A.aut.size() << "\n";
    out << "initial " << A.init << "\n";
    if (A.aut.final_part) {
        out << "final";
        for (int a = 0; a < A.aut.size(); ++a)
            if ((*A.aut.final_part)[a]) out << ' ' << a;
        out << "\n";
    }
    for (int a = 0; a < A.aut.size(); ++a) out << a << ' ' << A.aut.prio[a] << ' ' << to_string(A.aut.theta[a]) << "\n";
    return out.str();
}

InitializedAutomaton parse_dump(const std::string& text) {
    std::istringstream in(text);
    std::string line, word;
    InitializedAutomaton r;
    int n = -1;
    std::vector<int> finals;
    bool has_final = false;
    std::map<int, std::pair<int, OneStep>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ls >> word;
        if (word == "states") {
            ls >> n;
        } else if (word == "initial") {
            ls >> r.init;
        } else if (word == "final") {
            has_final = true;
            int x;
            while (ls >> x) finals.push_back(x);
        } else {
            int id = std::stoi(word), pr;
            if (!(ls >> pr)) throw ParseError("automaton dump: missing priority", 0);
            std::string rest;
            std::getline(ls, rest);
            rows[id] = {pr, parse_onestep(rest)};
        }
    }
    if (n < 0 || static_cast<int>(rows.size()) != n) throw ParseError("automaton dump: state count mismatch", 0);
    if (has_final) r.aut.final_part = std::vector<bool>();
    for (int a = 0; a < n; ++a) {
        auto it = rows.find(a);
        if (it == rows.end()) throw ParseError("automaton dump: missing state " + std::to_string(a), 0);
        r.aut.add(it->second.second, it->second.first);
    }
    for (int x : finals) r.aut.final_part->at(x) = true;
    return r;
}

}  // namespace mucalc
