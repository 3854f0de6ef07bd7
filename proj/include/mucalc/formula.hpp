#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mucalc {

enum class Kind : std::uint8_t { Top, Bot, Prop, NegProp, Neg, And, Or, Dia, Box, Mu, Nu };

class Node;

// Formulas are hash-consed: two structurally equal formulas are the same
// pointer, so `==` on Formula is structural equality.
using Formula = std::shared_ptr<const Node>;

class Node {
public:
    Kind kind;
    std::string name;  // letter for Prop/NegProp, bound variable for Mu/Nu
    Formula left;      // only child of Neg/Dia/Box/Mu/Nu, left child of And/Or
    Formula right;
    std::uint64_t id;
    std::vector<std::string> free;  // sorted free names
    bool nnf;                       // no general Neg node below
    std::uint64_t tree_size;        // saturating

    bool is_binder() const { return kind == Kind::Mu || kind == Kind::Nu; }
    bool has_free(const std::string& n) const;

    Node(Kind k, std::string n, Formula l, Formula r, std::uint64_t i);
};

Formula top();
Formula bot();
Formula prop(const std::string& name);
Formula nprop(const std::string& name);
Formula neg(const Formula& f);
Formula conj(const Formula& a, const Formula& b);
Formula disj(const Formula& a, const Formula& b);
Formula dia(const Formula& f);
Formula box(const Formula& f);
Formula mu(const std::string& var, const Formula& body);
Formula nu(const std::string& var, const Formula& body);
Formula binder(Kind k, const std::string& var, const Formula& body);
Formula make(Kind k, const std::string& name, const Formula& l, const Formula& r);

// Constructors that absorb ⊤/⊥ units.
Formula simp_and(const Formula& a, const Formula& b);
Formula simp_or(const Formula& a, const Formula& b);
Formula simp_dia(const Formula& f);
Formula simp_box(const Formula& f);
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

bool is_keyword(std::string_view s);
bool is_identifier(std::string_view s);

Formula parse(std::string_view text);
std::string to_string(const Formula& f);

Formula to_nnf(const Formula& f);
Formula negate(const Formula& f);  // requires NNF

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> bound_vars(const Formula& f);
std::set<std::string> all_names(const Formula& f);
std::uint64_t dag_size(const Formula& f);

bool is_well_named(const Formula& f);
Formula well_name(const Formula& f);

bool is_guarded(const Formula& f);
Formula guard(const Formula& f);

// NNF, then (only if needed) well-naming and guarding.
Formula prepare(const Formula& f);

Formula substitute(const Formula& f, const std::map<std::string, Formula>& bindings);

// Substitution for the case where no capture can happen (replacement
// formulas have no free names bound anywhere in f). Shares unchanged subterms.
Formula substitute_nocapture(const Formula& f, const std::map<std::string, Formula>& bindings);

// Occurrence handles: child index 0 for the unique/left child, 1 for right.
using Path = std::vector<int>;
Formula subformula_at(const Formula& xi, const Path& path);
std::vector<std::pair<Path, Formula>> subformula_occurrences(const Formula& xi);

std::set<std::string> active(const Formula& xi, const Path& occurrence);

// Binder node for each bound variable of a well-named formula.
std::map<std::string, Formula> binder_map(const Formula& xi);

struct DependencyOrder {
    std::vector<std::string> vars;                      // innermost first
    std::set<std::pair<std::string, std::string>> less;  // (x, y) means x < y
    bool lt(const std::string& x, const std::string& y) const { return less.count({x, y}) > 0; }
};
DependencyOrder dependency_order(const Formula& xi);

enum class Fragment { M, W, D, B, C, F, A, U };
std::string fragment_name(Fragment f);
std::optional<Fragment> fragment_from_name(std::string_view s);

bool positive_in(const Formula& f, const std::string& p);
bool in_fragment(const Formula& f, Fragment frag, const std::string& p);

}  // namespace mucalc
