#pragma once

#include "fairlab/paths.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairlab
{

enum class Holds
{
    yes,
    no,
    bounded_unknown
};

std::string holds_str(Holds h);

struct Verdict
{
    Holds holds = Holds::bounded_unknown;
    Assumption assumption;
    std::string goal;
    std::optional<Lasso> lasso;       // infinite counterexample
    std::optional<PathPrefix> prefix; // finite counterexample, or a path into a trap for Fu/Pr
    std::vector<std::string> notes;
};

// {"assumption","goal","holds","witness"?,"notes"}
std::string verdict_json(const AugmentedLTS& lts, const Verdict& v);

std::vector<bool> reachable_states(const AugmentedLTS& lts);

// The goal is reachable from every reachable state; reactive: along
// non-blocking transitions only.
bool agef(const AugmentedLTS& lts, const std::vector<bool>& goal, bool reactive = false);

Verdict liveness(const AugmentedLTS& lts, const std::vector<bool>& goal, const std::string& goal_name,
                 const Assumption& a);
Verdict liveness(const AugmentedLTS& lts, const std::string& goal_name, const Assumption& a);

// A rooted goal-avoiding path of exactly `length` steps visiting no state
// twice, if the explored system has one.
std::optional<PathPrefix> loopfree_witness(const AugmentedLTS& lts, const std::vector<bool>& goal,
                                           std::size_t length);

// Fair scheduler over a matrix with one column per
// extension step listing the tasks enabled at that point, except tasks that
// still have an uncrossed entry. Each step takes the first uncrossed entry
// (column order, then task-name order) whose task is enabled now, fires the
// lowest-id enabled transition of that task and crosses the entry out.
class FairScheduler
{
public:
    FairScheduler(const AugmentedLTS& lts, const TaskSet& ts, bool reactive = false);

    // Fills the column for the current end of `path`. Call once before the
    // first step.
    void start(const PathPrefix& path);
    // Appends one transition to `path`; false when no task is enabled.
    bool step(PathPrefix& path);
    // Tasks with uncrossed entries in entry order. Together with the state
    // this determines every later step.
    [[nodiscard]] std::vector<std::size_t> digest() const;

private:
    const AugmentedLTS& lts_;
    std::vector<const Task*> tasks_; // task-name order
    bool reactive_;
    // uncrossed entries as (column, task index)
    std::set<std::pair<std::size_t, std::size_t>> entries_;
    std::size_t column_ = 0;

    void fill(StateIdx s);
};

PathPrefix fair_extend(const AugmentedLTS& lts, const PathPrefix& prefix, const TaskSet& ts, std::size_t step_cap,
                       bool reactive = false);

struct FairLassoResult
{
    std::optional<Lasso> lasso;       // set when a (state, digest) pair repeated
    std::optional<PathPrefix> finite; // set when the scheduler stopped
    std::size_t steps = 0;
};

// Runs the scheduler from `prefix` until the first repetition of
// (state, digest) after the prefix, and closes the lasso there.
FairLassoResult fair_lasso(const AugmentedLTS& lts, const PathPrefix& prefix, const TaskSet& ts,
                           std::size_t step_cap, bool reactive = false);

struct LassoBounds
{
    std::size_t stem = 5;
    std::size_t cycle = 6;
};

// Rooted stems of length <= stem, followed by closed walks of length
// 1..cycle from the stem's end that use no transition twice.
std::vector<Lasso> enumerate_lassos(const AugmentedLTS& lts, LassoBounds b);

struct HierarchyReport
{
    std::string stronger, weaker;
    std::size_t lassos_checked = 0;
    std::vector<Lasso> violations; // stronger-fair, weaker-unfair
    bool skipped = false;
    std::string skip_reason;
};

// `needed` names side conditions ("(1)", "(#)", ...) the arrow depends
// on; the check is skipped when one of them does not validate.
HierarchyReport hierarchy_check(const AugmentedLTS& lts, const Assumption& stronger, const Assumption& weaker,
                                LassoBounds b = {}, const std::vector<std::string>& needed = {});
HierarchyReport hierarchy_check(const AugmentedLTS& lts, const std::vector<Lasso>& lassos,
                                const Assumption& stronger, const Assumption& weaker);

} // namespace fairlab
