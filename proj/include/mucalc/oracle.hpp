#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mucalc/decide.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace mucalc {

// Largest model the subset-enumerating checks accept.
constexpr int kOracleStateBound = 8;

bool check_monotone_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s);
bool check_fully_additive_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s);
bool check_completely_additive_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s);
bool check_normal_on(const Formula& xi, const std::string& p, const KripkeModel& S, int s);
bool check_substructures_on(const Formula& xi, const KripkeModel& S, int s);

// Semantic check of a property at one pointed model.  Throws
// PreconditionError for finite width, finite depth, single branch and
// continuity, which every finite model satisfies trivially.
bool semantic_check(const Formula& xi, PropertyId prop, const std::string& p, const KripkeModel& S, int s);
bool semantically_checkable(PropertyId prop);

// First pointed model (in enumeration order, so the smallest) violating the
// property, over all models with at most max_states states.
std::optional<KripkeModel> find_counterexample(const Formula& xi, PropertyId prop, const std::string& p,
                                               int max_states);

struct CorpusEntry {
    std::string name;
    Formula formula;
    std::optional<std::set<Fragment>> holds;  // expected properties, if given
};

// One entry per line: `[name =] formula [; holds X Y ...]`, `#` starts a comment.
std::vector<CorpusEntry> parse_corpus(const std::string& text);

struct OracleBounds {
    int max_states = 2;
    std::string letter = "p";
};

struct CheckResult {
    std::string name;
    std::string formula;
    std::string model;  // JSON of the counterexample, or "-"
    bool pass = true;

    std::string line() const;
};

struct Report {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    int failures() const;
    std::string text() const;  // sorted, one CHECK line per result
};

Report cross_validate(const std::vector<CorpusEntry>& corpus, const OracleBounds& bounds);

}  // namespace mucalc
