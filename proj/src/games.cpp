#include "mucalc/games.hpp"

#include <functional>
#include <unordered_map>

#include "mucalc/error.hpp"

namespace mucalc {

std::map<std::string, int> variable_priorities(const Formula& xi) {
    DependencyOrder dep = dependency_order(xi);
    auto binders = binder_map(xi);
    std::map<std::string, int> prio;
    for (const auto& x : dep.vars) {
        int lo = 1;
        for (const auto& [y, p] : prio)
            if (dep.lt(y, x)) lo = std::max(lo, p);
        bool odd = binders.at(x)->kind == Kind::Mu;
        if ((lo % 2 != 0) != odd) ++lo;
        prio[x] = lo;
    }
    return prio;
}

EvaluationGame evaluation_game(const Formula& xi, const KripkeModel& S) {
    if (!xi->nnf) throw PreconditionError("evaluation_game: formula is not in negation normal form");
    if (!is_well_named(xi)) throw PreconditionError("evaluation_game: formula is not well-named");
    auto binders = binder_map(xi);
    auto prio = variable_priorities(xi);
    EvaluationGame e;
    e.n = S.n;
    std::vector<Formula> nodes;
    std::function<void(const Formula&)> index = [&](const Formula& f) {
        if (!f || e.node_index.count(f.get())) return;
        e.node_index.emplace(f.get(), static_cast<int>(nodes.size()));
        nodes.push_back(f);
        index(f->left);
        index(f->right);
    };
    index(xi);
    for (const auto& [x, b] : binders) index(b);
    ParityGame& g = e.game;
    const int n = S.n;
    for (const auto& f : nodes) {
        for (int s = 0; s < n; ++s) {
            Player who = Player::Exists;
            int pr = 0;
            std::vector<int> moves;
            switch (f->kind) {
                case Kind::Top: who = Player::Forall; break;
                case Kind::Bot: who = Player::Exists; break;
                case Kind::Prop:
                case Kind::NegProp: {
                    auto b = binders.find(f->name);
                    if (b != binders.end() && f->kind == Kind::Prop) {
                        pr = prio.at(f->name);
                        moves.push_back(e.position(b->second->left, s));
                        break;
                    }
                    bool truth = S.holds(f->name, s) == (f->kind == Kind::Prop);
                    who = truth ? Player::Forall : Player::Exists;
                    break;
                }
                case Kind::And:
                case Kind::Or:
                    who = f->kind == Kind::And ? Player::Forall : Player::Exists;
                    moves.push_back(e.position(f->left, s));
                    moves.push_back(e.position(f->right, s));
                    break;
                case Kind::Dia:
                case Kind::Box:
                    who = f->kind == Kind::Box ? Player::Forall : Player::Exists;
                    for (int t : S.succ[s]) moves.push_back(e.position(f->left, t));
                    break;
                case Kind::Mu:
                case Kind::Nu: moves.push_back(e.position(f->left, s)); break;
                case Kind::Neg: throw PreconditionError("evaluation_game: negation node");
            }
            int v = g.add(who, pr);
            g.succ[v] = std::move(moves);
        }
    }
    return e;
}

namespace {

Formula normalized(const Formula& xi) {
    Formula f = to_nnf(xi);
    return is_well_named(f) ? f : well_name(f);
}

}  // namespace

StateSet model_check_all(const Formula& xi, const KripkeModel& S) {
    Formula f = normalized(xi);
    EvaluationGame e = evaluation_game(f, S);
    Solution sol = solve(e.game);
    StateSet r(S.n);
    for (int s = 0; s < S.n; ++s) r[s] = sol.win_ex[e.position(f, s)];
    return r;
}

bool model_check(const Formula& xi, const KripkeModel& S, int s) { return model_check_all(xi, S).at(s); }

// ---------------------------------------------------------------- acceptance

namespace {

class GadgetBuilder {
public:
    GadgetBuilder(const ModalAutomaton& A, const KripkeModel& S, AcceptanceGame& out)
        : A_(A), S_(S), g_(out.game), out_(out) {}

    void run() {
        const int n = S_.n;
        out_.n = n;
        for (int a = 0; a < A_.size(); ++a)
            for (int s = 0; s < n; ++s) g_.add(Player::Exists, A_.prio[a]);
        for (int a = 0; a < A_.size(); ++a) {
            OneStep th = expand_nabla(A_.theta[a]);
            for (int s = 0; s < n; ++s) g_.edge(out_.basic(a, s), onestep(th, s));
        }
    }

private:
    const ModalAutomaton& A_;
    const KripkeModel& S_;
    ParityGame& g_;
    AcceptanceGame& out_;

    int dead(bool exists_wins) { return g_.add(exists_wins ? Player::Forall : Player::Exists, 0); }

    int onestep(const OneStep& a, int s) {
        switch (a.op) {
            case OneStep::Op::PosLit: return dead(S_.holds(a.letter, s));
            case OneStep::Op::NegLit: return dead(!S_.holds(a.letter, s));
            case OneStep::Op::Top: return dead(true);
            case OneStep::Op::Bot: return dead(false);
            case OneStep::Op::And:
            case OneStep::Op::Or: {
                int v = g_.add(a.op == OneStep::Op::And ? Player::Forall : Player::Exists, 0);
                for (const auto& k : a.kids) {
                    int w = onestep(k, s);
                    g_.edge(v, w);
                }
                return v;
            }
            case OneStep::Op::Dia:
            case OneStep::Op::Box: {
                int v = g_.add(a.op == OneStep::Op::Box ? Player::Forall : Player::Exists, 0);
                for (int t : S_.succ[s]) {
                    int w = lattice(a.arg, t);
                    g_.edge(v, w);
                }
                return v;
            }
            case OneStep::Op::Nabla: return onestep(expand_nabla(a), s);
        }
        return dead(false);
    }

    int lattice(const Lattice& l, int t) {
        switch (l.op) {
            case Lattice::Op::Atom: return out_.basic(l.atom, t);
            case Lattice::Op::Top: return dead(true);
            case Lattice::Op::Bot: return dead(false);
            case Lattice::Op::And:
            case Lattice::Op::Or: {
                int v = g_.add(l.op == Lattice::Op::And ? Player::Forall : Player::Exists, 0);
                for (const auto& k : l.kids) {
                    int w = lattice(k, t);
                    g_.edge(v, w);
                }
                return v;
            }
        }
        return dead(false);
    }
};

}  // namespace

AcceptanceGame acceptance_game(const ModalAutomaton& A, const KripkeModel& S) {
    AcceptanceGame out;
    GadgetBuilder b(A, S, out);
    b.run();
    return out;
}

AcceptanceGame acceptance_game_markings(const ModalAutomaton& A, const KripkeModel& S) {
    AcceptanceGame out;
    const int n = S.n, k = A.size();
    out.n = n;
    ParityGame& g = out.game;
    for (int a = 0; a < k; ++a)
        for (int s = 0; s < n; ++s) g.add(Player::Exists, A.prio[a]);
    if (k > 8) throw ResourceError("acceptance_game_markings: too many automaton states");
    for (int s = 0; s < n; ++s) {
        const auto& succ = S.succ[s];
        const int d = static_cast<int>(succ.size());
        if (d * k > 20) throw ResourceError("acceptance_game_markings: too many markings");
        OneStepModel m;
        for (const auto& [p, set] : S.val)
            if (set[s]) m.Y.insert(p);
        m.size = d;
        m.marking.assign(d, {});
        // markings are encoded as d*k bits
        std::vector<int> marking_pos(std::size_t{1} << (d * k), -1);
        for (std::uint32_t code = 0; code < (std::uint32_t{1} << (d * k)); ++code) {
            for (int i = 0; i < d; ++i) {
                m.marking[i].clear();
                for (int b = 0; b < k; ++b)
                    if (code >> (i * k + b) & 1) m.marking[i].insert(b);
            }
            for (int a = 0; a < k; ++a) {
                if (!sat1(m, A.theta[a])) continue;
                if (marking_pos[code] < 0) {
                    int v = g.add(Player::Forall, 0);
                    marking_pos[code] = v;
                    for (int i = 0; i < d; ++i)
                        for (int b = 0; b < k; ++b)
                            if (code >> (i * k + b) & 1) g.edge(v, out.basic(b, succ[i]));
                }
                g.edge(out.basic(a, s), marking_pos[code]);
            }
        }
    }
    return out;
}

StateSet accepted_states(const ModalAutomaton& A, int a, const KripkeModel& S) {
    AcceptanceGame ag = acceptance_game(A, S);
    Solution sol = solve(ag.game);
    StateSet r(S.n);
    for (int s = 0; s < S.n; ++s) r[s] = sol.win_ex[ag.basic(a, s)];
    return r;
}

bool accepts(const ModalAutomaton& A, int a, const KripkeModel& S, int s) { return accepted_states(A, a, S).at(s); }

}  // namespace mucalc
