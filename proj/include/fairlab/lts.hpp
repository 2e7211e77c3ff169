#pragma once

#include "fairlab/ccs.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairlab
{

// Schema violations, dangling references, missing annotations.
class LtsError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

using StateIdx = std::size_t;
using TransIdx = std::size_t;

struct StateRec
{
    std::string id;
    std::optional<std::string> expr;
};

struct AugTransition
{
    std::string id;
    StateIdx source = 0;
    StateIdx target = 0;
    ActionLabel label;
    std::optional<std::vector<std::string>> instr; // sorted
    std::optional<std::vector<ComponentPath>> comp; // sorted
    bool blocking = false;
};

struct GoalDisjunct
{
    enum class Kind
    {
        state,     // StateIs: whole state equals expr, modulo instruction names
        component, // ComponentAt: the component at path equals expr, modulo names
        states     // ExplicitStates
    };
    Kind kind = Kind::states;
    std::string expr;
    ComponentPath path;
    std::vector<std::string> ids;
};

struct GoalSpec
{
    std::vector<GoalDisjunct> disjuncts;
};

struct Task
{
    std::string name;
    std::vector<TransIdx> members; // sorted, unique
};

struct TaskSet
{
    std::string notion; // A T I Z C G custom
    std::vector<Task> tasks;
    bool bounded = false; // extracted from a truncated exploration
};

enum class Origin
{
    ccs,
    handwritten
};

class AugmentedLTS
{
public:
    std::vector<StateRec> states;
    std::vector<AugTransition> transitions;
    std::vector<StateIdx> initial;
    std::map<std::string, GoalSpec> goals;
    std::map<std::string, TaskSet> tasks;
    Origin origin = Origin::handwritten;
    bool truncated = false;

    // Present only for systems explored in this process.
    ProcessSpecPtr spec;
    std::vector<Expr> state_exprs;
    // False for states whose successors were not computed (truncation).
    std::vector<bool> expanded;

    // Outgoing transitions per state, in id order. Rebuilt by reindex().
    std::vector<std::vector<TransIdx>> out;

    void reindex();

    [[nodiscard]] StateIdx state_index(const std::string& id) const;
    [[nodiscard]] TransIdx transition_index(const std::string& id) const;
    [[nodiscard]] bool has_instr() const;
    [[nodiscard]] bool has_comp() const;
    [[nodiscard]] bool is_expanded(StateIdx s) const { return expanded.empty() || expanded[s]; }

private:
    std::map<std::string, StateIdx> state_ids_;
    std::map<std::string, TransIdx> transition_ids_;
};

AugmentedLTS load_lts(const std::string& json_text);
std::string save_lts(const AugmentedLTS& lts);

GoalSpec parse_goal_spec(const std::string& json_text);
std::string goal_spec_json(const GoalSpec& g);

// Membership vector over lts.states.
std::vector<bool> goal_states(const AugmentedLTS& lts, const GoalSpec& g);
std::vector<bool> goal_states(const AugmentedLTS& lts, const std::string& goal_name);

// t ⌣ u: disjoint component sets.
bool concurrent(const AugmentedLTS& lts, TransIdx t, TransIdx u);

struct ConditionResult
{
    std::string name; // "(1)" "(2)" "(3)" "(4)" "(5)" "(6)" "(#)" "reflexivity"
    bool checked = false;
    bool passed = true;
    std::string counterexample;
    std::string note;
};

struct SideConditionReport
{
    std::vector<ConditionResult> results;
    bool bounded = false;

    [[nodiscard]] const ConditionResult& get(const std::string& name) const;
    // Checked conditions all passed.
    [[nodiscard]] bool all_passed() const;
};

SideConditionReport validate_side_conditions(const AugmentedLTS& lts);

// The instruction-to-component map: from the program when available,
// otherwise inferred from the transitions (nullopt if no map exists).
std::optional<std::map<std::string, ComponentPath>> instruction_components(const AugmentedLTS& lts);

} // namespace fairlab
