#pragma once

#include "fairlab/paths.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fairlab
{

// The state-shifted system: one state per initial state of the input and
// one per transition (a copy of its target), so that transition
// propositions become state propositions.
struct ConvertedLTS
{
    struct CState
    {
        StateIdx original;                   // state whose propositions hold here
        std::optional<TransIdx> entered_by; // nullopt for the copies of initial states
    };
    std::vector<CState> states;
    std::vector<std::pair<std::size_t, std::size_t>> transitions; // (source, target) in converted indices
    std::vector<std::size_t> initial;
    // converted index of the state for transition t is first_transition_state + t
    std::size_t first_transition_state = 0;
};

ConvertedLTS ltl_convert(const AugmentedLTS& lts);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula
{
    enum class Op
    {
        truth,
        falsity,
        enabled, // state proposition: a task has a member leaving the state
        occurs,  // transition proposition: the entering transition is in the task
        goal,    // state proposition: the state is in a named goal
        neg,
        conj,
        disj,
        implies,
        eventually,
        always,
        next
    };
    Op op = Op::truth;
    std::string name; // task or goal name for propositions
    FormulaPtr left, right;
};

FormulaPtr ltl_prop(Formula::Op op, std::string name);
FormulaPtr ltl_unary(Formula::Op op, FormulaPtr f);
FormulaPtr ltl_binary(Formula::Op op, FormulaPtr l, FormulaPtr r);
FormulaPtr ltl_true();

// Grammar: imp := or ['->' imp]; or := and {'|' and}; and := un {'&' un};
// un := '!' un | 'F' un | 'G' un | 'X' un | '(' imp ')' | true | false
//     | enabled(NAME) | occurs(NAME) | goal(NAME)
FormulaPtr parse_ltl(const std::string& text);
std::string ltl_str(const FormulaPtr& f);

// Conjunction over the tasks of G(G enabled(T) -> F occurs(T)), resp.
// G(G F enabled(T) -> F occurs(T)).
FormulaPtr weak_fairness_formula(const TaskSet& ts);
FormulaPtr strong_fairness_formula(const TaskSet& ts);

// Proposition context: tasks looked up by name, goals by name in the LTS.
struct LtlContext
{
    const AugmentedLTS* lts = nullptr;
    const ConvertedLTS* converted = nullptr;
    std::vector<const TaskSet*> tasksets;
};

// The lasso lifted to the converted system: the copy of its (initial)
// start state, then one converted state per transition.
struct ConvertedLasso
{
    std::vector<std::size_t> stem;  // converted states
    std::vector<std::size_t> cycle; // converted states, repeated forever
};

ConvertedLasso convert_lasso(const AugmentedLTS& lts, const ConvertedLTS& c, const Lasso& l);

// Throws LtsError on an unknown task or goal name.
bool eval_ltl(const LtlContext& ctx, const ConvertedLasso& l, const FormulaPtr& f);

} // namespace fairlab
