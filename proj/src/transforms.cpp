#include <mutex>

#include "mucalc/automaton.hpp"
#include "mucalc/error.hpp"

namespace mucalc {

namespace {

Mutation g_mutation;
std::mutex g_mutation_lock;

void require_positive(const ModalAutomaton& A, const std::string& p, const char* who) {
    if (!A.positive_in(p)) throw PreconditionError(std::string(who) + ": automaton is not positive in " + p);
}

void require_disjunctive(const ModalAutomaton& A, const char* who) {
    if (!A.disjunctive()) throw PreconditionError(std::string(who) + ": automaton is not disjunctive");
}

std::map<int, int> shift(const OneStep& a, int off) {
    std::map<int, int> h;
    for (int b : atoms_of(a)) h[b] = b + off;
    return h;
}

OneStep shifted(const OneStep& a, int off) { return rename_states(a, shift(a, off)); }

std::string copy_label(const ModalAutomaton& A, int a) {
    return A.label[a].empty() ? std::string() : A.label[a] + "^bot";
}

// Appends the ⊥-copies a+n of all states and marks them as the final part.
void add_bot_copies(const ModalAutomaton& src, const std::string& p, ModalAutomaton& out) {
    const int n = src.size();
    std::vector<bool> fin(2 * n, false);
    for (int a = 0; a < n; ++a) {
        out.add(shifted(subst_bot(src.theta[a], p), n), src.prio[a], copy_label(src, a));
        fin[n + a] = true;
    }
    out.final_part = std::move(fin);
}

template <typename F>
ModalAutomaton bipartite_from_disjunctive(const ModalAutomaton& D, const std::string& p, const char* who, F initial) {
    require_disjunctive(D, who);
    require_positive(D, p, who);
    ModalAutomaton out;
    const int n = D.size();
    for (int a = 0; a < n; ++a) {
        auto [theta, prio] = initial(D.disj(a), D.prio[a], n);
        out.add(std::move(theta), prio, D.label[a]);
    }
    add_bot_copies(D, p, out);
    return out;
}

}  // namespace

void set_mutation(const Mutation& m) {
    std::lock_guard<std::mutex> lock(g_mutation_lock);
    g_mutation = m;
}

Mutation current_mutation() {
    std::lock_guard<std::mutex> lock(g_mutation_lock);
    return g_mutation;
}

ModalAutomaton transform_bot(const ModalAutomaton& A, const std::string& p) {
    require_positive(A, p, "transform_bot");
    ModalAutomaton out;
    for (int a = 0; a < A.size(); ++a) out.add(subst_bot(A.theta[a], p), A.prio[a], copy_label(A, a));
    return out;
}

ModalAutomaton transform_M(const ModalAutomaton& D, const std::string& p) {
    require_disjunctive(D, "transform_M");
    ModalAutomaton out;
    for (int a = 0; a < D.size(); ++a) out.add(to_onestep(translate_M(D.disj(a), p)), D.prio[a], D.label[a]);
    return out;
}

ModalAutomaton transform_W(const ModalAutomaton& D, const std::string& p) {
    const bool swap = current_mutation().swap_w_b;
    return bipartite_from_disjunctive(D, p, "transform_W", [&](const DisjForm& d, int prio, int n) {
        return std::make_pair(swap ? translate_B(d, n) : translate_W(d, n), prio);
    });
}

ModalAutomaton transform_B(const ModalAutomaton& D, const std::string& p) {
    const bool swap = current_mutation().swap_w_b;
    return bipartite_from_disjunctive(D, p, "transform_B", [&](const DisjForm& d, int prio, int n) {
        return std::make_pair(swap ? translate_W(d, n) : translate_B(d, n), prio);
    });
}

ModalAutomaton transform_F(const ModalAutomaton& D, const std::string& p) {
    const bool keep = current_mutation().keep_f_priorities;
    return bipartite_from_disjunctive(D, p, "transform_F", [&](const DisjForm& d, int prio, int n) {
        return std::make_pair(translate_F(d, p, n), keep ? prio : 1);
    });
}

ModalAutomaton transform_A(const ModalAutomaton& D, const std::string& p) {
    const bool keep = current_mutation().keep_f_priorities;
    return bipartite_from_disjunctive(D, p, "transform_A", [&](const DisjForm& d, int prio, int n) {
        return std::make_pair(translate_A(d, p, n), keep ? prio : 1);
    });
}

ModalAutomaton transform_U(const ModalAutomaton& D) {
    require_disjunctive(D, "transform_U");
    ModalAutomaton out;
    for (int a = 0; a < D.size(); ++a) out.add(translate_U(D.disj(a)), D.prio[a], D.label[a]);
    return out;
}

ModalAutomaton transform_D(const ModalAutomaton& A, const std::string& p) {
    require_positive(A, p, "transform_D");
    ModalAutomaton out;
    const int n = A.size();
    for (int a = 0; a < n; ++a) out.add(OneStep::any({A.theta[a], shifted(A.theta[a], n)}), 1, A.label[a]);
    add_bot_copies(A, p, out);
    if (A.final_part)
        for (int a = 0; a < n; ++a)
            if ((*A.final_part)[a]) (*out.final_part)[a] = true;
    return out;
}

InitializedAutomaton pipeline(const Formula& xi, Fragment x, const std::string& p) {
    InitializedAutomaton D = simulate(from_formula(prepare(xi)));
    InitializedAutomaton out;
    out.init = D.init;
    if (x == Fragment::U) {
        out.aut = transform_U(D.aut);
        return out;
    }
    ModalAutomaton M = transform_M(D.aut, p);
    switch (x) {
        case Fragment::M: out.aut = std::move(M); break;
        case Fragment::W: out.aut = transform_W(M, p); break;
        case Fragment::D: out.aut = transform_D(M, p); break;
        case Fragment::B: out.aut = transform_B(M, p); break;
        case Fragment::C: out.aut = transform_D(transform_W(M, p), p); break;
        case Fragment::F: out.aut = transform_F(M, p); break;
        case Fragment::A: out.aut = transform_A(M, p); break;
        case Fragment::U: break;
    }
    return out;
}

namespace {

bool check_class(const ModalAutomaton& A, OneStepClass initial_cls, bool odd_initial, const std::string& p) {
    if (!A.bipartite()) return false;
    std::vector<bool> initial(A.size());
    for (int a = 0; a < A.size(); ++a) initial[a] = !(*A.final_part)[a];
    for (int a = 0; a < A.size(); ++a) {
        if (!initial[a]) {
            if (!in_onestep_class(A.theta[a], OneStepClass::Final, p, initial)) return false;
            continue;
        }
        if (odd_initial && A.prio[a] % 2 == 0) return false;
        if (!in_onestep_class(A.theta[a], initial_cls, p, initial)) return false;
    }
    return true;
}

}  // namespace

bool in_class(const ModalAutomaton& A, AutClass c, const std::string& p) {
    switch (c) {
        case AutClass::W: return check_class(A, OneStepClass::WInitial, false, p);
        case AutClass::D: return check_class(A, OneStepClass::DInitial, true, p);
        case AutClass::B: return check_class(A, OneStepClass::BInitial, false, p);
        case AutClass::F: return check_class(A, OneStepClass::FInitial, true, p);
        case AutClass::A: return check_class(A, OneStepClass::AInitial, true, p);
        case AutClass::C:
            return check_class(A, OneStepClass::WInitial, false, p) && check_class(A, OneStepClass::DInitial, true, p);
    }
    return false;
}

}  // namespace mucalc
