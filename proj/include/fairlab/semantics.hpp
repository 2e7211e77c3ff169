#pragma once

#include "fairlab/ccs.hpp"
#include "fairlab/lts.hpp"

#include <string>
#include <vector>

namespace fairlab
{

// One conclusion of the SOS rules: label, instruction names threaded through
// the derivation, and the target expression.
struct Derivation
{
    ActionLabel label;
    std::vector<std::string> instr; // sorted
    Expr target;
};

// All conclusions for a closed named expression, without any program
// context (so also usable on a component taken in isolation).
std::vector<Derivation> derive(const Expr& state);

struct StepResult
{
    ActionLabel label;
    std::vector<std::string> instr;
    std::vector<ComponentPath> comp;
    bool blocking = false;
    Expr target;
    std::string target_key;
};

// Successors of a state of the program, sorted by (label, instr, target).
std::vector<StepResult> step(const ProcessSpec& spec, const Expr& state);

struct ExploreCaps
{
    std::size_t state_cap = 512;
    std::size_t depth_cap = 256;
};

struct ExplorationReport
{
    AugmentedLTS lts;
    bool truncated = false;
    ExploreCaps caps;
};

// Thrown by explore when the program is outside the fragment.
class FragmentError : public std::runtime_error
{
public:
    explicit FragmentError(std::vector<Diagnostic> d);
    std::vector<Diagnostic> diagnostics;
};

ExplorationReport explore(const ProcessSpecPtr& spec, ExploreCaps caps = {});

bool unique_synchronisation_check(const AugmentedLTS& lts);

// I is requested in a state if the component cmp(I), taken in isolation,
// can perform a transition involving I. nullopt if the component is not
// present in the state.
std::optional<bool> requested_opt(const AugmentedLTS& lts, const std::string& instruction, StateIdx state);
// Throws LtsError when the component is absent or the LTS has no program.
bool requested(const AugmentedLTS& lts, const std::string& instruction, StateIdx state);

} // namespace fairlab
