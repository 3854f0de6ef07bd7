#pragma once

#include <vector>

#include "mucalc/automaton.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"
#include "mucalc/parity.hpp"

namespace mucalc {

// Priorities of the bound variables of a well-named formula, as used by the
// evaluation game: odd for μ, even for ν, monotone along the dependency order.
std::map<std::string, int> variable_priorities(const Formula& xi);

struct EvaluationGame {
    ParityGame game;
    std::map<const Node*, int> node_index;  // position of (node, s) is index*n + s
    int n = 0;

    int position(const Formula& f, int s) const { return node_index.at(f.get()) * n + s; }
};

EvaluationGame evaluation_game(const Formula& xi, const KripkeModel& S);

// Accepts any formula (normalized internally).
bool model_check(const Formula& xi, const KripkeModel& S, int s);
StateSet model_check_all(const Formula& xi, const KripkeModel& S);

struct AcceptanceGame {
    ParityGame game;
    int n = 0;
    int basic(int a, int s) const { return a * n + s; }  // basic positions come first
};

AcceptanceGame acceptance_game(const ModalAutomaton& A, const KripkeModel& S);
// Reference arena with explicit marking moves; exponential, for tests.
AcceptanceGame acceptance_game_markings(const ModalAutomaton& A, const KripkeModel& S);

bool accepts(const ModalAutomaton& A, int a, const KripkeModel& S, int s);
StateSet accepted_states(const ModalAutomaton& A, int a, const KripkeModel& S);

}  // namespace mucalc
