#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mucalc/automaton.hpp"
#include "mucalc/decide.hpp"
#include "mucalc/error.hpp"
#include "mucalc/games.hpp"
#include "mucalc/oracle.hpp"

using namespace mucalc;

namespace {

enum Exit { kYes = 0, kNo = 1, kUsage = 2, kResource = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int verdict(bool yes) {
    std::cout << (yes ? "yes" : "no") << "\n";
    return yes ? kYes : kNo;
}

Fragment fragment_arg(const std::string& s) {
    auto f = fragment_from_name(s);
    if (!f) throw PreconditionError("unknown fragment '" + s + "'");
    return *f;
}

InitializedAutomaton stage(const std::string& name, const Formula& xi, const std::string& p) {
    if (name == "alt") return from_formula(prepare(xi));
    if (name == "disj") return simulate(from_formula(prepare(xi)));
    return pipeline(xi, fragment_arg(name), p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modal mu-calculus toolkit"};
    app.require_subcommand(1);

    std::string formula, formula2, model_file, property, letter = "p", fragment, stage_name, corpus_file, mode = "direct",
                                                          mutate;
    int max_states = 2;
    int state = -1;

    auto* parse_cmd = app.add_subcommand("parse", "Print the canonical form of a formula");
    parse_cmd->add_option("formula", formula)->required();

    auto* nnf_cmd = app.add_subcommand("nnf", "Print the negation normal form");
    nnf_cmd->add_option("formula", formula)->required();

    auto* mc_cmd = app.add_subcommand("mc", "Model check a formula at a pointed model");
    mc_cmd->add_option("--model", model_file, "Model JSON file")->required();
    mc_cmd->add_option("--state", state, "State to check (defaults to the model's point, else 0)");
    mc_cmd->add_option("formula", formula)->required();

    auto* sat_cmd = app.add_subcommand("sat", "Decide satisfiability");
    sat_cmd->add_option("formula", formula)->required();

    auto* equiv_cmd = app.add_subcommand("equiv", "Decide equivalence of two formulas");
    equiv_cmd->add_option("formula1", formula)->required();
    equiv_cmd->add_option("formula2", formula2)->required();

    auto* decide_cmd = app.add_subcommand("decide", "Decide a semantic property");
    decide_cmd->add_option("--property", property, "Property name or alias")->required();
    decide_cmd->add_option("--letter", letter, "Proposition letter");
    decide_cmd->add_option("--mode", mode, "Continuity mode")->check(CLI::IsMember({"direct", "composite"}));
    decide_cmd->add_option("formula", formula)->required();

    auto* translate_cmd = app.add_subcommand("translate", "Translate into a fragment");
    translate_cmd->add_option("--fragment", fragment, "M W D B C F A U")->required();
    translate_cmd->add_option("--letter", letter, "Proposition letter");
    translate_cmd->add_option("formula", formula)->required();

    auto* automaton_cmd = app.add_subcommand("automaton", "Dump an automaton of the pipeline");
    automaton_cmd->add_option("--stage", stage_name, "alt disj M W D B C F A U")
        ->required()
        ->check(CLI::IsMember({"alt", "disj", "M", "W", "D", "B", "C", "F", "A", "U"}));
    automaton_cmd->add_option("--letter", letter, "Proposition letter");
    automaton_cmd->add_option("formula", formula)->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "Cross-validate a corpus against brute force");
    oracle_cmd->add_option("--corpus", corpus_file, "Corpus file")->required();
    oracle_cmd->add_option("--max-states", max_states, "Largest enumerated model")->check(CLI::Range(1, 4));
    oracle_cmd->add_option("--letter", letter, "Proposition letter");
    oracle_cmd->add_option("--mutate", mutate, "Inject a known-bad construction")
        ->check(CLI::IsMember({"swap-w-b", "keep-f-priorities"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*parse_cmd) {
            std::cout << to_string(parse(formula)) << "\n";
            return kYes;
        }
        if (*nnf_cmd) {
            std::cout << to_string(to_nnf(parse(formula))) << "\n";
            return kYes;
        }
        if (*mc_cmd) {
            KripkeModel m = model_from_json(read_file(model_file));
            int s = state >= 0 ? state : m.point.value_or(0);
            if (s < 0 || s >= m.n) throw PreconditionError("state out of range");
            bool yes = model_check(parse(formula), m, s);
            std::cout << (yes ? "true" : "false") << "\n";
            return yes ? kYes : kNo;
        }
        if (*sat_cmd) return verdict(sat(parse(formula)));
        if (*equiv_cmd) return verdict(equiv(parse(formula), parse(formula2)));
        if (*decide_cmd) {
            auto prop = property_from_name(property);
            if (!prop) throw PreconditionError("unknown property '" + property + "'");
            auto m = mode == "composite" ? ContinuityMode::Composite : ContinuityMode::Direct;
            return verdict(decide_property(parse(formula), *prop, letter, m));
        }
        if (*translate_cmd) {
            std::cout << to_string(translate_fragment(parse(formula), fragment_arg(fragment), letter)) << "\n";
            return kYes;
        }
        if (*automaton_cmd) {
            std::cout << dump(stage(stage_name, parse(formula), letter));
            return kYes;
        }
        if (*oracle_cmd) {
            Mutation mu;
            mu.swap_w_b = mutate == "swap-w-b";
            mu.keep_f_priorities = mutate == "keep-f-priorities";
            set_mutation(mu);
            Report r = cross_validate(parse_corpus(read_file(corpus_file)), OracleBounds{max_states, letter});
            std::cout << r.text();
            return r.all_pass() ? kYes : kNo;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
