#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mucalc/automaton.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace mucalc {

// Satisfiability over all pointed models, via the emptiness game of the
// disjunctive automaton for ξ.
bool sat(const Formula& xi);
bool valid(const Formula& xi);
bool equiv(const Formula& a, const Formula& b);

// Emptiness game winner for a disjunctive automaton.
bool nonempty(const InitializedAutomaton& D);

// ξ^X: the translation of ξ into fragment X relative to p.
Formula translate_fragment(const Formula& xi, Fragment x, const std::string& p);

enum class PropertyId {
    Monotone,
    FiniteWidth,
    FiniteDepth,
    SingleBranch,
    Continuous,
    FullyAdditive,
    CompletelyAdditive,
    PreservedUnderSubstructures,
};

std::string property_name(PropertyId p);
// Accepts the canonical names and short aliases (width, depth, branch, ...).
std::optional<PropertyId> property_from_name(std::string_view s);
Fragment fragment_of(PropertyId p);

enum class ContinuityMode { Direct, Composite };

bool decide_property(const Formula& xi, PropertyId prop, const std::string& p,
                     ContinuityMode mode = ContinuityMode::Direct);

// First enumerated pointed model (at most max_states states) on which a and b
// differ.  Gives up after `budget` models.
std::optional<KripkeModel> separating_model(const Formula& a, const Formula& b, int max_states,
                                            long budget = 2'000'000);

void clear_caches();

}  // namespace mucalc
