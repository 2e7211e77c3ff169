#pragma once

#include "fairlab/lts.hpp"

#include <string>
#include <vector>

namespace fairlab
{

struct PathPrefix
{
    StateIdx start = 0;
    std::vector<TransIdx> steps;
};

// stem followed by cycle repeated forever.
struct Lasso
{
    PathPrefix stem;
    std::vector<TransIdx> cycle;
};

enum class AssumptionKind
{
    P,
    Just,
    J,
    W,
    S,
    SWI,
    Fu,
    ST,
    Pr
};

struct Assumption
{
    AssumptionKind kind = AssumptionKind::P;
    TaskSet taskset; // J, W, S
    bool reactive = false;

    // "P", "just", "W:A", "S:custom", "SWI", ... plus ",reactive"
    [[nodiscard]] std::string str() const;
    [[nodiscard]] bool path_level() const;
};

Assumption make_assumption(AssumptionKind kind, bool reactive = false);
Assumption make_assumption(AssumptionKind kind, TaskSet ts, bool reactive = false);

// Throws LtsError when the steps do not form a path.
void check_path(const AugmentedLTS& lts, const PathPrefix& p);
void check_lasso(const AugmentedLTS& lts, const Lasso& l);
StateIdx last_state(const AugmentedLTS& lts, const PathPrefix& p);

bool enabled(const AugmentedLTS& lts, const Task& task, StateIdx s, bool reactive = false);
bool enabled_during(const AugmentedLTS& lts, const Task& task, TransIdx u, bool reactive = false);

bool classify_lasso(const AugmentedLTS& lts, const Lasso& lasso, const Assumption& a);
bool classify_finite(const AugmentedLTS& lts, const PathPrefix& prefix, const Assumption& a);

// Tasks T_I for every instruction of the program (or of the transitions
// for LTSs without a program), in name order.
TaskSet instruction_tasks(const AugmentedLTS& lts);

struct PrefixCertificate
{
    PathPrefix prefix;
    Task task;
    bool enabled_everywhere = false;
    bool occurs = false;
    std::size_t length = 0;
};

PrefixCertificate prefix_certificate(const AugmentedLTS& lts, const PathPrefix& prefix, const Task& task);

std::string prefix_str(const AugmentedLTS& lts, const PathPrefix& p);
std::string lasso_str(const AugmentedLTS& lts, const Lasso& l);

} // namespace fairlab
