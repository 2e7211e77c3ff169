#include "fairlab/paths.hpp"

#include "fairlab/semantics.hpp"

#include <algorithm>

namespace fairlab
{

std::string Assumption::str() const
{
    std::string s;
    switch (kind) {
    case AssumptionKind::P:
        s = "P";
        break;
    case AssumptionKind::Just:
        s = "just";
        break;
    case AssumptionKind::J:
        s = "J:" + taskset.notion;
        break;
    case AssumptionKind::W:
        s = "W:" + taskset.notion;
        break;
    case AssumptionKind::S:
        s = "S:" + taskset.notion;
        break;
    case AssumptionKind::SWI:
        s = "SWI";
        break;
    case AssumptionKind::Fu:
        s = "Fu";
        break;
    case AssumptionKind::ST:
        s = "ST";
        break;
    case AssumptionKind::Pr:
        s = "Pr";
        break;
    }
    return reactive ? s + ",reactive" : s;
}

bool Assumption::path_level() const
{
    return kind != AssumptionKind::Fu && kind != AssumptionKind::ST && kind != AssumptionKind::Pr;
}

Assumption make_assumption(AssumptionKind kind, bool reactive)
{
    Assumption a;
    a.kind = kind;
    a.reactive = reactive;
    return a;
}

Assumption make_assumption(AssumptionKind kind, TaskSet ts, bool reactive)
{
    Assumption a = make_assumption(kind, reactive);
    a.taskset = std::move(ts);
    return a;
}

void check_path(const AugmentedLTS& lts, const PathPrefix& p)
{
    if (p.start >= lts.states.size())
        throw LtsError("path starts at an unknown state");
    StateIdx cur = p.start;
    for (TransIdx t : p.steps) {
        if (t >= lts.transitions.size())
            throw LtsError("path uses an unknown transition");
        if (lts.transitions[t].source != cur)
            throw LtsError("transition " + lts.transitions[t].id + " does not leave state " + lts.states[cur].id);
        cur = lts.transitions[t].target;
    }
}

void check_lasso(const AugmentedLTS& lts, const Lasso& l)
{
    check_path(lts, l.stem);
    if (l.cycle.empty())
        throw LtsError("lasso cycle is empty");
    StateIdx loop = last_state(lts, l.stem);
    check_path(lts, {loop, l.cycle});
    if (last_state(lts, {loop, l.cycle}) != loop)
        throw LtsError("lasso cycle does not return to " + lts.states[loop].id);
}

StateIdx last_state(const AugmentedLTS& lts, const PathPrefix& p)
{
    return p.steps.empty() ? p.start : lts.transitions[p.steps.back()].target;
}

bool enabled(const AugmentedLTS& lts, const Task& task, StateIdx s, bool reactive)
{
    for (TransIdx t : lts.out[s]) {
        if (reactive && lts.transitions[t].blocking)
            continue;
        if (std::binary_search(task.members.begin(), task.members.end(), t))
            return true;
    }
    return false;
}

bool enabled_during(const AugmentedLTS& lts, const Task& task, TransIdx u, bool reactive)
{
    for (TransIdx t : lts.out[lts.transitions[u].source]) {
        if (reactive && lts.transitions[t].blocking)
            continue;
        if (std::binary_search(task.members.begin(), task.members.end(), t) && concurrent(lts, t, u))
            return true;
    }
    return false;
}

TaskSet instruction_tasks(const AugmentedLTS& lts)
{
    if (!lts.has_instr())
        throw LtsError("instruction tasks need instruction annotations");
    std::map<std::string, std::vector<TransIdx>> by;
    if (lts.spec)
        for (const auto& [name, info] : lts.spec->names)
            by[name];
    for (TransIdx t = 0; t < lts.transitions.size(); ++t)
        for (const auto& i : *lts.transitions[t].instr)
            by[i].push_back(t);
    TaskSet ts;
    ts.notion = "I";
    for (auto& [name, members] : by)
        ts.tasks.push_back({name, std::move(members)});
    return ts;
}

namespace
{

bool occurs_in(const Task& task, const std::vector<TransIdx>& ts)
{
    return std::any_of(ts.begin(), ts.end(),
                       [&](TransIdx t) { return std::binary_search(task.members.begin(), task.members.end(), t); });
}

bool interferes(const AugmentedLTS& lts, TransIdx t, TransIdx u) { return !concurrent(lts, t, u); }

bool just_lasso(const AugmentedLTS& lts, const Lasso& l, bool reactive)
{
    if (!lts.has_comp())
        throw LtsError("justness needs component annotations");
    auto needs = [&](TransIdx t) { return !(reactive && lts.transitions[t].blocking); };
    // Anything interfered with by some cycle transition is settled forever.
    auto by_cycle = [&](TransIdx t) {
        return std::any_of(l.cycle.begin(), l.cycle.end(), [&](TransIdx u) { return interferes(lts, t, u); });
    };
    for (TransIdx u : l.cycle)
        for (TransIdx t : lts.out[lts.transitions[u].source])
            if (needs(t) && !by_cycle(t))
                return false;
    StateIdx s = l.stem.start;
    for (std::size_t i = 0; i < l.stem.steps.size(); ++i) {
        for (TransIdx t : lts.out[s]) {
            if (!needs(t) || by_cycle(t))
                continue;
            bool hit = false;
            for (std::size_t j = i; j < l.stem.steps.size() && !hit; ++j)
                hit = interferes(lts, t, l.stem.steps[j]);
            if (!hit)
                return false;
        }
        s = lts.transitions[l.stem.steps[i]].target;
    }
    return true;
}

bool swi_lasso(const AugmentedLTS& lts, const Lasso& l, bool reactive)
{
    if (!lts.spec)
        throw LtsError("SWI needs an LTS explored from a program");
    TaskSet ti = instruction_tasks(lts);
    for (const auto& task : ti.tasks) {
        if (occurs_in(task, l.cycle))
            continue;
        bool some_enabled = false, always_requested = true;
        for (TransIdx u : l.cycle) {
            StateIdx s = lts.transitions[u].source;
            some_enabled |= enabled(lts, task, s, reactive);
            always_requested &= requested_opt(lts, task.name, s).value_or(false);
        }
        if (some_enabled && always_requested)
            return false;
    }
    return true;
}

} // namespace

bool classify_lasso(const AugmentedLTS& lts, const Lasso& l, const Assumption& a)
{
    check_lasso(lts, l);
    std::vector<StateIdx> cyc_states;
    for (TransIdx u : l.cycle)
        cyc_states.push_back(lts.transitions[u].source);

    switch (a.kind) {
    case AssumptionKind::P:
        return true;
    case AssumptionKind::Just:
        return just_lasso(lts, l, a.reactive);
    case AssumptionKind::SWI:
        return swi_lasso(lts, l, a.reactive);
    case AssumptionKind::W:
    case AssumptionKind::S:
    case AssumptionKind::J:
        for (const auto& task : a.taskset.tasks) {
            if (occurs_in(task, l.cycle))
                continue;
            bool all = true, any = false;
            for (StateIdx s : cyc_states) {
                bool e = enabled(lts, task, s, a.reactive);
                all &= e;
                any |= e;
            }
            if (a.kind == AssumptionKind::S && any)
                return false;
            if (a.kind == AssumptionKind::W && all)
                return false;
            if (a.kind == AssumptionKind::J && all) {
                if (!lts.has_comp())
                    throw LtsError("J-fairness needs component annotations");
                bool during = std::all_of(l.cycle.begin(), l.cycle.end(),
                                          [&](TransIdx u) { return enabled_during(lts, task, u, a.reactive); });
                if (during)
                    return false;
            }
        }
        return true;
    default:
        throw LtsError("assumption " + a.str() + " does not classify single paths");
    }
}

bool classify_finite(const AugmentedLTS& lts, const PathPrefix& prefix, const Assumption& a)
{
    check_path(lts, prefix);
    if (!a.path_level())
        throw LtsError("assumption " + a.str() + " does not classify single paths");
    // Every path assumption includes progress: a finite path is fair only
    // when it ends in a state without (non-blocking) transitions, and then
    // no task or instruction is enabled there either.
    StateIdx end = last_state(lts, prefix);
    for (TransIdx t : lts.out[end])
        if (!(a.reactive && lts.transitions[t].blocking))
            return false;
    return true;
}

PrefixCertificate prefix_certificate(const AugmentedLTS& lts, const PathPrefix& prefix, const Task& task)
{
    check_path(lts, prefix);
    PrefixCertificate c;
    c.prefix = prefix;
    c.task = task;
    c.length = prefix.steps.size();
    c.occurs = occurs_in(task, prefix.steps);
    c.enabled_everywhere = enabled(lts, task, prefix.start);
    for (TransIdx t : prefix.steps)
        c.enabled_everywhere = c.enabled_everywhere && enabled(lts, task, lts.transitions[t].target);
    return c;
}

std::string prefix_str(const AugmentedLTS& lts, const PathPrefix& p)
{
    std::string s = lts.states[p.start].id;
    for (TransIdx t : p.steps)
        s += " -" + lts.transitions[t].id + "-> " + lts.states[lts.transitions[t].target].id;
    return s;
}

std::string lasso_str(const AugmentedLTS& lts, const Lasso& l)
{
    std::string s = prefix_str(lts, l.stem) + " (";
    for (std::size_t i = 0; i < l.cycle.size(); ++i) {
        const auto& t = lts.transitions[l.cycle[i]];
        s += (i ? " -" : "-") + t.id + "-> " + lts.states[t.target].id;
    }
    return s + ")^ω";
}

} // namespace fairlab
