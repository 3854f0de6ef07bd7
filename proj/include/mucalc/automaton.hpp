#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/onestep.hpp"

namespace mucalc {

struct ModalAutomaton {
    std::vector<OneStep> theta;
    std::vector<int> prio;
    std::vector<std::string> label;  // for dumps only
    // bipartition: final_part[a] is true for states of the final part
    std::optional<std::vector<bool>> final_part;

    int size() const { return static_cast<int>(theta.size()); }
    int add(OneStep t, int priority, std::string name = "");
    bool disjunctive() const;
    DisjForm disj(int a) const;  // throws unless Θ(a) is disjunctive
    bool positive_in(const std::string& p) const;
    bool bipartite() const;
};

struct InitializedAutomaton {
    ModalAutomaton aut;
    int init = 0;
};

// Occurrence graph: occurs[b] lists the states a occurring in Θ(b).
std::vector<std::vector<int>> occurrence_graph(const ModalAutomaton& A);
// reach[a][b]: b occurs (transitively) below a, i.e. b ◁ a.
std::vector<std::vector<bool>> below(const ModalAutomaton& A);

// Coarsest partition into states with equal priority, equal part and equal
// transitions modulo the partition.  Merging a class never changes acceptance.
std::vector<int> bisimulation_classes(const ModalAutomaton& A);
InitializedAutomaton quotient(const InitializedAutomaton& A);

InitializedAutomaton from_formula(const Formula& xi);

// Largest number of states simulate may create (MUCALC_STATE_CAP overrides).
int state_cap();
InitializedAutomaton simulate(const InitializedAutomaton& A);

ModalAutomaton linearize(const ModalAutomaton& A);
bool is_linear(const ModalAutomaton& A);

Formula to_formula(const ModalAutomaton& A, int a);
Formula to_formula(const InitializedAutomaton& A);

ModalAutomaton transform_bot(const ModalAutomaton& A, const std::string& p);
ModalAutomaton transform_M(const ModalAutomaton& D, const std::string& p);
ModalAutomaton transform_W(const ModalAutomaton& D, const std::string& p);
ModalAutomaton transform_B(const ModalAutomaton& D, const std::string& p);
ModalAutomaton transform_F(const ModalAutomaton& D, const std::string& p);
ModalAutomaton transform_A(const ModalAutomaton& D, const std::string& p);
ModalAutomaton transform_U(const ModalAutomaton& D);
ModalAutomaton transform_D(const ModalAutomaton& A, const std::string& p);

// Test hook for mutation checks: swaps the W and B one-step translations,
// or skips the priority reset of the F construction.
struct Mutation {
    bool swap_w_b = false;
    bool keep_f_priorities = false;
};
void set_mutation(const Mutation& m);
Mutation current_mutation();

InitializedAutomaton pipeline(const Formula& xi, Fragment x, const std::string& p);

enum class AutClass { W, D, B, F, A, C };
bool in_class(const ModalAutomaton& A, AutClass c, const std::string& p);

std::string dump(const InitializedAutomaton& A);
InitializedAutomaton parse_dump(const std::string& text);

}  // namespace mucalc
