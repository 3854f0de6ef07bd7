#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"

namespace mucalc {

int state_cap() {
    if (const char* v = std::getenv("MUCALC_STATE_CAP")) {
        char* end = nullptr;
        long x = std::strtol(v, &end, 10);
        if (end != v && x > 0) return static_cast<int>(std::min<long>(x, 1 << 28));
    }
    return 20000;
}

namespace {

// Trace automaton: nondeterministic Büchi automaton over relations R ⊆ A×A
// accepting the relation streams that carry a trace whose largest priority
// seen infinitely often is odd.  State (a, mode): mode 0 waits, mode i > 0
// has committed to the odd priority odds[i-1].
struct TraceNba {
    int n = 0;
    std::vector<int> odds;
    std::vector<int> prio;

    int modes() const { return static_cast<int>(odds.size()) + 1; }
    int size() const { return n * modes(); }
    int id(int a, int mode) const { return a * modes() + mode; }
    int state_of(int q) const { return q / modes(); }
    int mode_of(int q) const { return q % modes(); }

    bool accepting(int q) const {
        int m = mode_of(q);
        return m > 0 && prio[state_of(q)] == odds[m - 1];
    }

    void enter(int b, int mode, std::vector<int>& out) const {
        if (mode == 0) {
            out.push_back(id(b, 0));
            for (int i = 0; i < static_cast<int>(odds.size()); ++i)
                if (prio[b] <= odds[i]) out.push_back(id(b, i + 1));
        } else if (prio[b] <= odds[mode - 1]) {
            out.push_back(id(b, mode));
        }
    }
};

struct SNode {
    int name = -1;           // -1 for nodes spawned in the current step
    std::vector<int> label;  // sorted NBA states
    std::vector<SNode> kids;
};

using Tree = std::vector<SNode>;  // empty or a single root

void encode(const SNode& v, std::vector<int>& out) {
    out.push_back(v.name);
    out.push_back(static_cast<int>(v.label.size()));
    out.insert(out.end(), v.label.begin(), v.label.end());
    out.push_back(static_cast<int>(v.kids.size()));
    for (const auto& k : v.kids) encode(k, out);
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

std::vector<int> unite(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

class Safra {
public:
    explicit Safra(const TraceNba& nba) : nba_(nba) {}

    int max_names() const { return nba_.size(); }

    // One determinization step on relation `rel` (pairs a*n+b).  Returns the
    // min-parity priority of the step.
    int step(Tree& t, const std::vector<int>& rel) {
        if (t.empty()) return 2 * max_names() + 1;
        succ_.assign(nba_.n, {});
        for (int x : rel) succ_[x / nba_.n].push_back(x % nba_.n);
        removed_.clear();
        green_.clear();
        SNode& root = t.front();
        relabel(root);
        spawn(root);
        horizontal(root);
        if (root.label.empty()) {
            collect(root, removed_);
            t.clear();
        } else {
            prune(root);
            vertical(root);
        }
        int p = 2 * max_names() + 1;
        for (int i : removed_) p = std::min(p, 2 * i + 1);
        for (int i : green_) p = std::min(p, 2 * i + 2);
        if (!t.empty()) {
            std::sort(removed_.begin(), removed_.end());
            int next = 0;
            count_named(t.front(), next);
            rename(t.front(), next);
        }
        return p;
    }

private:
    const TraceNba& nba_;
    std::vector<std::vector<int>> succ_;
    std::vector<int> removed_;
    std::vector<int> green_;

    void relabel(SNode& v) {
        std::vector<int> out;
        for (int q : v.label) {
            int a = nba_.state_of(q), mode = nba_.mode_of(q);
            for (int b : succ_[a]) nba_.enter(b, mode, out);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        v.label = std::move(out);
        for (auto& k : v.kids) relabel(k);
    }

    void spawn(SNode& v) {
        for (auto& k : v.kids) spawn(k);
        std::vector<int> acc;
        for (int q : v.label)
            if (nba_.accepting(q)) acc.push_back(q);
        if (!acc.empty()) v.kids.push_back(SNode{-1, std::move(acc), {}});
    }

    static void strip(SNode& v, const std::vector<int>& seen) {
        v.label = minus(v.label, seen);
        for (auto& k : v.kids) strip(k, seen);
    }

    void horizontal(SNode& v) {
        std::vector<int> seen;
        for (auto& k : v.kids) {
            strip(k, seen);
            seen = unite(seen, k.label);
            horizontal(k);
        }
    }

    static void collect(const SNode& v, std::vector<int>& out) {
        if (v.name >= 0) out.push_back(v.name);
        for (const auto& k : v.kids) collect(k, out);
    }

    void prune(SNode& v) {
        std::vector<SNode> keep;
        for (auto& k : v.kids) {
            if (k.label.empty()) {
                collect(k, removed_);
            } else {
                prune(k);
                keep.push_back(std::move(k));
            }
        }
        v.kids = std::move(keep);
    }

    void vertical(SNode& v) {
        if (v.kids.empty()) return;
        std::vector<int> all;
        for (const auto& k : v.kids) all = unite(all, k.label);
        if (all == v.label) {
            for (const auto& k : v.kids) collect(k, removed_);
            v.kids.clear();
            green_.push_back(v.name);
            return;
        }
        for (auto& k : v.kids) vertical(k);
    }

    static void count_named(const SNode& v, int& n) {
        if (v.name >= 0) ++n;
        for (const auto& k : v.kids) count_named(k, n);
    }

    void rename(SNode& v, int& next) {
        if (v.name >= 0) {
            int shift = static_cast<int>(std::lower_bound(removed_.begin(), removed_.end(), v.name) - removed_.begin());
            v.name -= shift;
        } else {
            v.name = next++;
        }
        for (auto& k : v.kids) rename(k, next);
    }
};

class Simulator {
public:
    explicit Simulator(const InitializedAutomaton& A) : A_(A), safra_(nba_) {
        nba_.n = A.aut.size();
        nba_.prio = A.aut.prio;
        std::set<int> odds;
        for (int p : A.aut.prio)
            if (p % 2 != 0) odds.insert(p);
        nba_.odds.assign(odds.begin(), odds.end());
        cap_ = state_cap();
    }

    InitializedAutomaton run() {
        const int n = nba_.n;
        if (static_cast<long long>(n) * n > (1LL << 30)) throw ResourceError("simulate: automaton too large");
        Tree t0;
        std::vector<int> start;
        nba_.enter(A_.init, 0, start);
        std::sort(start.begin(), start.end());
        t0.push_back(SNode{0, start, {}});
        const int C = 2 * safra_.max_names() + 3;
        int init = intern(t0, C - (2 * safra_.max_names() + 1));
        for (std::size_t i = 0; i < trees_.size(); ++i) {
            Tree t = trees_[i];
            std::vector<OneStep> disjuncts;
            for (const auto& d : transitions(t)) {
                std::vector<int> targets;
                for (const auto& rel : d.nabla) {
                    Tree u = t;
                    int p = safra_.step(u, rel);
                    targets.push_back(intern(u, C - p));
                }
                std::vector<OneStep> ks;
                for (const auto& l : d.pi) ks.push_back(l.positive ? OneStep::pos(l.letter) : OneStep::negl(l.letter));
                ks.push_back(OneStep::nabla(targets));
                if (ks.size() == 1) {
                    disjuncts.push_back(ks.front());
                } else {
                    OneStep c;
                    c.op = OneStep::Op::And;
                    c.kids = std::move(ks);
                    disjuncts.push_back(std::move(c));
                }
            }
            OneStep th;
            if (disjuncts.empty()) {
                th = OneStep::bot();
            } else if (disjuncts.size() == 1) {
                th = disjuncts.front();
            } else {
                th.op = OneStep::Op::Or;
                th.kids = std::move(disjuncts);
            }
            out_.aut.theta[i] = std::move(th);
        }
        out_.init = init;
        return out_;
    }

private:
    const InitializedAutomaton& A_;
    TraceNba nba_;
    Safra safra_;
    int cap_ = 0;
    std::map<std::pair<std::vector<int>, int>, int> ids_;
    std::vector<Tree> trees_;
    InitializedAutomaton out_;
    std::map<std::vector<int>, std::vector<MacroDisjunct>> dnf_cache_;

    int intern(const Tree& t, int prio) {
        std::vector<int> key;
        if (!t.empty()) encode(t.front(), key);
        auto k = std::make_pair(std::move(key), prio);
        auto it = ids_.find(k);
        if (it != ids_.end()) return it->second;
        if (static_cast<int>(trees_.size()) >= cap_)
            throw ResourceError("simulate: more than " + std::to_string(cap_) + " states");
        int id = static_cast<int>(trees_.size());
        ids_.emplace(std::move(k), id);
        trees_.push_back(t);
        out_.aut.add(OneStep::bot(), prio);
        return id;
    }

    const std::vector<MacroDisjunct>& transitions(const Tree& t) {
        std::vector<int> q;
        if (!t.empty())
            for (int x : t.front().label)
                if (nba_.mode_of(x) == 0) q.push_back(nba_.state_of(x));
        auto it = dnf_cache_.find(q);
        if (it != dnf_cache_.end()) return it->second;
        const int n = nba_.n;
        std::vector<OneStep> parts;
        for (int a : q) {
            std::map<int, int> h;
            for (int b : atoms_of(A_.aut.theta[a])) h[b] = a * n + b;
            parts.push_back(rename_states(A_.aut.theta[a], h));
        }
        auto r = dnf_one_step(OneStep::all(parts));
        return dnf_cache_.emplace(q, std::move(r)).first->second;
    }
};

}  // namespace

InitializedAutomaton simulate(const InitializedAutomaton& A) {
    if (A.aut.disjunctive()) return A;
    InitializedAutomaton small = quotient(A);
    Simulator s(small);
    return quotient(s.run());
}

}  // namespace mucalc
