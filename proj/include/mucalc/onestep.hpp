#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"

namespace mucalc {

// Lattice terms over state atoms (ints).
struct Lattice {
    enum class Op { Atom, Top, Bot, And, Or };
    Op op = Op::Top;
    int atom = -1;
    std::vector<Lattice> kids;

    static Lattice at(int a) { return {Op::Atom, a, {}}; }
    static Lattice top() { return {Op::Top, -1, {}}; }
    static Lattice bot() { return {Op::Bot, -1, {}}; }
    static Lattice all(std::vector<Lattice> ks);
    static Lattice any(std::vector<Lattice> ks);

    bool operator==(const Lattice& o) const { return op == o.op && atom == o.atom && kids == o.kids; }
    bool operator<(const Lattice& o) const;
};

// One-step formulas.  State atoms only occur inside Dia/Box/Nabla.
struct OneStep {
    enum class Op { PosLit, NegLit, Dia, Box, Nabla, Top, Bot, And, Or };
    Op op = Op::Top;
    std::string letter;       // PosLit/NegLit
    Lattice arg;              // Dia/Box
    std::vector<int> atoms;   // Nabla, sorted
    std::vector<OneStep> kids;  // And/Or

    static OneStep pos(const std::string& p) { return {Op::PosLit, p, {}, {}, {}}; }
    static OneStep negl(const std::string& p) { return {Op::NegLit, p, {}, {}, {}}; }
    static OneStep dia(Lattice l) { return {Op::Dia, "", std::move(l), {}, {}}; }
    static OneStep box(Lattice l) { return {Op::Box, "", std::move(l), {}, {}}; }
    static OneStep nabla(std::vector<int> atoms);
    static OneStep top() { return {Op::Top, "", {}, {}, {}}; }
    static OneStep bot() { return {Op::Bot, "", {}, {}, {}}; }
    static OneStep all(std::vector<OneStep> ks);
    static OneStep any(std::vector<OneStep> ks);

    bool operator==(const OneStep& o) const {
        return op == o.op && letter == o.letter && arg == o.arg && atoms == o.atoms && kids == o.kids;
    }
};

struct Literal {
    std::string letter;
    bool positive = true;
    auto operator<=>(const Literal&) const = default;
};

// π ∧ ∇B with π a sorted literal conjunction and B a sorted set of atoms.
struct Disjunct {
    std::vector<Literal> pi;
    std::vector<int> nabla;
    auto operator<=>(const Disjunct&) const = default;
};
using DisjForm = std::vector<Disjunct>;  // sorted; empty means ⊥

// Disjuncts over macro atoms (sets of atoms); the empty macro is unconstrained.
struct MacroDisjunct {
    std::vector<Literal> pi;
    std::vector<std::vector<int>> nabla;
    auto operator<=>(const MacroDisjunct&) const = default;
};

struct OneStepModel {
    std::set<std::string> Y;
    int size = 0;                       // carrier 0..size-1
    std::vector<std::set<int>> marking;  // per carrier element
};

bool sat1(const OneStepModel& m, const OneStep& a);
bool sat1(const OneStepModel& m, const Lattice& l, int t);

OneStep expand_nabla(const OneStep& a);
OneStep subst_bot(const OneStep& a, const std::string& p);
OneStep rename_states(const OneStep& a, const std::map<int, int>& h);
Lattice rename_states(const Lattice& l, const std::map<int, int>& h);
OneStep simplify(const OneStep& a);

std::set<int> atoms_of(const OneStep& a);
std::set<std::string> letters_of(const OneStep& a);
bool positive_in(const OneStep& a, const std::string& p);

OneStep to_onestep(const Disjunct& d);
OneStep to_onestep(const DisjForm& d);
std::optional<DisjForm> as_disjunctive(const OneStep& a);
DisjForm normalize(DisjForm d);

bool consistent(const std::vector<Literal>& pi);

std::vector<MacroDisjunct> dnf_one_step(const OneStep& a);

// Translations of disjunctive formulas.  `copy` maps an atom to its ⊥-copy.
DisjForm translate_M(const DisjForm& d, const std::string& p);
OneStep translate_W(const DisjForm& d, int copy_offset);
OneStep translate_B(const DisjForm& d, int copy_offset);
OneStep translate_F(const DisjForm& d, const std::string& p, int copy_offset);
OneStep translate_A(const DisjForm& d, const std::string& p, int copy_offset);
OneStep translate_U(const DisjForm& d);

enum class OneStepClass { WInitial, DInitial, BInitial, FInitial, AInitial, Final };
// `initial` tells which atoms belong to the initial part.
bool in_onestep_class(const OneStep& a, OneStepClass c, const std::string& p,
                      const std::vector<bool>& initial);

// Formula over letters: atom a becomes the letter names[a].
Formula to_formula(const OneStep& a, const std::vector<std::string>& names);

std::string to_string(const OneStep& a);
std::string to_string(const Lattice& l);
OneStep parse_onestep(std::string_view text);

}  // namespace mucalc
