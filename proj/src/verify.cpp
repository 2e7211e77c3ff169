#include "fairlab/verify.hpp"

#include "fairlab/semantics.hpp"
#include "fairlab/tasks.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace fairlab
{

std::string holds_str(Holds h)
{
    switch (h) {
    case Holds::yes:
        return "yes";
    case Holds::no:
        return "no";
    default:
        return "bounded-unknown";
    }
}

namespace
{

nlohmann::ordered_json prefix_json(const AugmentedLTS& lts, const PathPrefix& p)
{
    nlohmann::ordered_json j;
    j["start"] = lts.states[p.start].id;
    std::vector<std::string> steps;
    for (TransIdx t : p.steps)
        steps.push_back(lts.transitions[t].id);
    j["steps"] = steps;
    return j;
}

} // namespace

std::string verdict_json(const AugmentedLTS& lts, const Verdict& v)
{
    nlohmann::ordered_json j;
    j["assumption"] = v.assumption.str();
    j["goal"] = v.goal;
    j["holds"] = holds_str(v.holds);
    if (v.lasso) {
        nlohmann::ordered_json w;
        w["kind"] = "lasso";
        w["stem"] = prefix_json(lts, v.lasso->stem);
        std::vector<std::string> cycle;
        for (TransIdx t : v.lasso->cycle)
            cycle.push_back(lts.transitions[t].id);
        w["cycle"] = cycle;
        j["witness"] = std::move(w);
    } else if (v.prefix) {
        nlohmann::ordered_json w;
        w["kind"] = "prefix";
        auto p = prefix_json(lts, *v.prefix);
        w["start"] = p["start"];
        w["steps"] = p["steps"];
        j["witness"] = std::move(w);
    }
    j["notes"] = v.notes;
    return j.dump(2) + "\n";
}

std::vector<bool> reachable_states(const AugmentedLTS& lts)
{
    std::vector<bool> seen(lts.states.size(), false);
    std::deque<StateIdx> todo;
    for (StateIdx s : lts.initial)
        if (!seen[s]) {
            seen[s] = true;
            todo.push_back(s);
        }
    while (!todo.empty()) {
        StateIdx s = todo.front();
        todo.pop_front();
        for (TransIdx t : lts.out[s]) {
            StateIdx q = lts.transitions[t].target;
            if (!seen[q]) {
                seen[q] = true;
                todo.push_back(q);
            }
        }
    }
    return seen;
}

namespace
{

// States from which the goal can be reached.
std::vector<bool> can_reach(const AugmentedLTS& lts, const std::vector<bool>& goal, bool reactive)
{
    std::vector<std::vector<TransIdx>> in(lts.states.size());
    for (TransIdx t = 0; t < lts.transitions.size(); ++t)
        if (!(reactive && lts.transitions[t].blocking))
            in[lts.transitions[t].target].push_back(t);
    std::vector<bool> ok = goal;
    std::deque<StateIdx> todo;
    for (StateIdx s = 0; s < ok.size(); ++s)
        if (ok[s])
            todo.push_back(s);
    while (!todo.empty()) {
        StateIdx s = todo.front();
        todo.pop_front();
        for (TransIdx t : in[s]) {
            StateIdx p = lts.transitions[t].source;
            if (!ok[p]) {
                ok[p] = true;
                todo.push_back(p);
            }
        }
    }
    return ok;
}

// Shortest rooted path to a state satisfying `target`, moving only through
// states allowed by `region`.
std::optional<PathPrefix> shortest_path(const AugmentedLTS& lts, const std::vector<bool>& region,
                                        const std::function<bool(StateIdx)>& target)
{
    std::vector<std::optional<TransIdx>> via(lts.states.size());
    std::vector<bool> seen(lts.states.size(), false);
    std::deque<StateIdx> todo;
    for (StateIdx s : lts.initial)
        if (region[s] && !seen[s]) {
            seen[s] = true;
            todo.push_back(s);
        }
    while (!todo.empty()) {
        StateIdx s = todo.front();
        todo.pop_front();
        if (target(s)) {
            PathPrefix p;
            StateIdx cur = s;
            while (via[cur]) {
                p.steps.push_back(*via[cur]);
                cur = lts.transitions[*via[cur]].source;
            }
            std::reverse(p.steps.begin(), p.steps.end());
            p.start = cur;
            return p;
        }
        for (TransIdx t : lts.out[s]) {
            StateIdx q = lts.transitions[t].target;
            if (region[q] && !seen[q]) {
                seen[q] = true;
                via[q] = t;
                todo.push_back(q);
            }
        }
    }
    return std::nullopt;
}

} // namespace

bool agef(const AugmentedLTS& lts, const std::vector<bool>& goal, bool reactive)
{
    auto reach = reachable_states(lts);
    auto ok = can_reach(lts, goal, reactive);
    for (StateIdx s = 0; s < lts.states.size(); ++s)
        if (reach[s] && !ok[s])
            return false;
    return true;
}

// ------------------------------------------------------- fair-cycle search

namespace
{

struct Support
{
    std::vector<StateIdx> states; // sorted
    std::vector<TransIdx> edges;  // sorted
};

class CycleSearch
{
public:
    CycleSearch(const AugmentedLTS& lts, const Assumption& a, const std::vector<bool>& region)
        : lts_(lts), a_(a), region_(region)
    {
        if (a_.kind == AssumptionKind::ST) {
            a_.taskset = extract_tasks(lts, "T");
            a_.kind = AssumptionKind::S;
        }
        if (a_.kind == AssumptionKind::SWI) {
            if (!lts.spec)
                throw LtsError("SWI needs an LTS explored from a program");
            instr_tasks_ = instruction_tasks(lts).tasks;
        }
        if ((a_.kind == AssumptionKind::Just || a_.kind == AssumptionKind::J) && !lts.has_comp())
            throw LtsError(a.str() + " needs component annotations");
    }

    // All maximal fair supports, in discovery order.
    std::vector<Support> run()
    {
        std::vector<StateIdx> all;
        for (StateIdx s = 0; s < lts_.states.size(); ++s)
            if (region_[s])
                all.push_back(s);
        refine(all);
        return found_;
    }

private:
    const AugmentedLTS& lts_;
    Assumption a_;
    const std::vector<bool>& region_;
    std::vector<Task> instr_tasks_;
    std::vector<Support> found_;

    static bool member(const Task& t, TransIdx x) { return std::binary_search(t.members.begin(), t.members.end(), x); }

    std::vector<Support> sccs(const std::vector<StateIdx>& states)
    {
        std::vector<bool> in(lts_.states.size(), false);
        for (StateIdx s : states)
            in[s] = true;
        // iterative Tarjan
        std::vector<int> index(lts_.states.size(), -1), low(lts_.states.size(), 0);
        std::vector<bool> on_stack(lts_.states.size(), false);
        std::vector<StateIdx> stack;
        std::vector<std::vector<StateIdx>> comps;
        int counter = 0;
        for (StateIdx root : states) {
            if (index[root] != -1)
                continue;
            std::vector<std::pair<StateIdx, std::size_t>> call{{root, 0}};
            index[root] = low[root] = counter++;
            stack.push_back(root);
            on_stack[root] = true;
            while (!call.empty()) {
                auto& [v, i] = call.back();
                if (i < lts_.out[v].size()) {
                    StateIdx w = lts_.transitions[lts_.out[v][i]].target;
                    ++i;
                    if (!in[w])
                        continue;
                    if (index[w] == -1) {
                        index[w] = low[w] = counter++;
                        stack.push_back(w);
                        on_stack[w] = true;
                        call.push_back({w, 0});
                    } else if (on_stack[w]) {
                        low[v] = std::min(low[v], index[w]);
                    }
                } else {
                    StateIdx done = v;
                    call.pop_back();
                    if (!call.empty())
                        low[call.back().first] = std::min(low[call.back().first], low[done]);
                    if (low[done] == index[done]) {
                        std::vector<StateIdx> comp;
                        StateIdx w;
                        do {
                            w = stack.back();
                            stack.pop_back();
                            on_stack[w] = false;
                            comp.push_back(w);
                        } while (w != done);
                        comps.push_back(std::move(comp));
                    }
                }
            }
        }
        std::vector<Support> out;
        for (auto& c : comps) {
            std::sort(c.begin(), c.end());
            Support sp;
            sp.states = c;
            for (StateIdx s : c)
                for (TransIdx t : lts_.out[s])
                    if (std::binary_search(c.begin(), c.end(), lts_.transitions[t].target))
                        sp.edges.push_back(t);
            if (sp.edges.empty())
                continue;
            std::sort(sp.edges.begin(), sp.edges.end());
            out.push_back(std::move(sp));
        }
        std::sort(out.begin(), out.end(), [](const Support& x, const Support& y) { return x.states < y.states; });
        return out;
    }

    bool occurs(const Task& t, const Support& sp)
    {
        return std::any_of(sp.edges.begin(), sp.edges.end(), [&](TransIdx e) { return member(t, e); });
    }

    void refine(const std::vector<StateIdx>& states)
    {
        for (const Support& sp : sccs(states)) {
            std::set<StateIdx> remove;
            bool reject = false;
            switch (a_.kind) {
            case AssumptionKind::P:
                break;
            case AssumptionKind::W:
            case AssumptionKind::J:
                for (const auto& task : a_.taskset.tasks) {
                    if (occurs(task, sp))
                        continue;
                    bool all = std::all_of(sp.states.begin(), sp.states.end(),
                                           [&](StateIdx s) { return enabled(lts_, task, s, a_.reactive); });
                    if (all && a_.kind == AssumptionKind::J)
                        all = std::all_of(sp.edges.begin(), sp.edges.end(),
                                          [&](TransIdx u) { return enabled_during(lts_, task, u, a_.reactive); });
                    if (all) {
                        reject = true;
                        break;
                    }
                }
                break;
            case AssumptionKind::S:
                for (const auto& task : a_.taskset.tasks) {
                    if (occurs(task, sp))
                        continue;
                    for (StateIdx s : sp.states)
                        if (enabled(lts_, task, s, a_.reactive))
                            remove.insert(s);
                }
                break;
            case AssumptionKind::SWI:
                for (const auto& task : instr_tasks_) {
                    if (occurs(task, sp))
                        continue;
                    bool always_requested = std::all_of(sp.states.begin(), sp.states.end(), [&](StateIdx s) {
                        return requested_opt(lts_, task.name, s).value_or(false);
                    });
                    if (!always_requested)
                        continue;
                    for (StateIdx s : sp.states)
                        if (enabled(lts_, task, s, a_.reactive))
                            remove.insert(s);
                }
                break;
            case AssumptionKind::Just:
                for (StateIdx s : sp.states)
                    for (TransIdx t : lts_.out[s]) {
                        if (a_.reactive && lts_.transitions[t].blocking)
                            continue;
                        bool hit = std::any_of(sp.edges.begin(), sp.edges.end(),
                                               [&](TransIdx u) { return !concurrent(lts_, t, u); });
                        if (!hit)
                            remove.insert(s);
                    }
                break;
            default:
                throw std::logic_error("cycle search for " + a_.str());
            }
            if (reject)
                continue;
            if (remove.empty()) {
                found_.push_back(sp);
                continue;
            }
            std::vector<StateIdx> rest;
            for (StateIdx s : sp.states)
                if (!remove.count(s))
                    rest.push_back(s);
            refine(rest);
        }
    }
};

// BFS within the support's edges.
std::vector<TransIdx> walk(const AugmentedLTS& lts, const Support& sp, StateIdx from, StateIdx to)
{
    if (from == to)
        return {};
    std::map<StateIdx, TransIdx> via;
    std::deque<StateIdx> todo{from};
    std::set<StateIdx> seen{from};
    while (!todo.empty()) {
        StateIdx s = todo.front();
        todo.pop_front();
        for (TransIdx t : lts.out[s]) {
            if (!std::binary_search(sp.edges.begin(), sp.edges.end(), t))
                continue;
            StateIdx q = lts.transitions[t].target;
            if (!seen.insert(q).second)
                continue;
            via[q] = t;
            if (q == to) {
                std::vector<TransIdx> path;
                for (StateIdx cur = to; cur != from; cur = lts.transitions[via[cur]].source)
                    path.push_back(via[cur]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            todo.push_back(q);
        }
    }
    throw std::logic_error("support is not strongly connected");
}

std::vector<TransIdx> covering_cycle(const AugmentedLTS& lts, const Support& sp, StateIdx entry)
{
    std::vector<TransIdx> cycle;
    StateIdx cur = entry;
    for (TransIdx e : sp.edges) {
        auto w = walk(lts, sp, cur, lts.transitions[e].source);
        cycle.insert(cycle.end(), w.begin(), w.end());
        cycle.push_back(e);
        cur = lts.transitions[e].target;
    }
    auto back = walk(lts, sp, cur, entry);
    cycle.insert(cycle.end(), back.begin(), back.end());
    return cycle;
}

// Stem for justness: every transition enabled along the stem and not
// interfered with by the cycle must be interfered with by a later stem step.
std::optional<PathPrefix> just_stem(const AugmentedLTS& lts, const std::vector<bool>& region, const Support& sp,
                                    bool reactive)
{
    auto settled_by_cycle = [&](TransIdx t) {
        return std::any_of(sp.edges.begin(), sp.edges.end(), [&](TransIdx u) { return !concurrent(lts, t, u); });
    };
    using Pending = std::vector<std::vector<ComponentPath>>; // sorted, unique comp sets
    using Node = std::pair<StateIdx, Pending>;
    std::map<Node, std::optional<std::pair<Node, TransIdx>>> parent;
    std::deque<Node> todo;
    for (StateIdx s : lts.initial)
        if (region[s]) {
            Node n{s, {}};
            if (parent.emplace(n, std::nullopt).second)
                todo.push_back(n);
        }
    while (!todo.empty()) {
        Node n = todo.front();
        todo.pop_front();
        if (std::binary_search(sp.states.begin(), sp.states.end(), n.first) && n.second.empty()) {
            PathPrefix p;
            Node cur = n;
            while (parent.at(cur)) {
                auto [prev, t] = *parent.at(cur);
                p.steps.push_back(t);
                cur = prev;
            }
            std::reverse(p.steps.begin(), p.steps.end());
            p.start = cur.first;
            return p;
        }
        std::set<std::vector<ComponentPath>> open(n.second.begin(), n.second.end());
        for (TransIdx t : lts.out[n.first])
            if (!(reactive && lts.transitions[t].blocking) && !settled_by_cycle(t))
                open.insert(*lts.transitions[t].comp);
        for (TransIdx u : lts.out[n.first]) {
            StateIdx q = lts.transitions[u].target;
            if (!region[q])
                continue;
            const auto& cu = *lts.transitions[u].comp;
            Pending next;
            for (const auto& c : open) {
                bool hit = std::any_of(c.begin(), c.end(),
                                       [&](const ComponentPath& x) { return std::binary_search(cu.begin(), cu.end(), x); });
                if (!hit)
                    next.push_back(c);
            }
            Node m{q, std::move(next)};
            if (parent.emplace(m, std::make_pair(n, u)).second)
                todo.push_back(std::move(m));
        }
    }
    return std::nullopt;
}

} // namespace

Verdict liveness(const AugmentedLTS& lts, const std::vector<bool>& goal, const std::string& goal_name,
                 const Assumption& a)
{
    Verdict v;
    v.assumption = a;
    v.goal = goal_name;
    if (goal.size() != lts.states.size())
        throw LtsError("goal does not match the state space");
    if (a.kind == AssumptionKind::Pr && a.reactive)
        throw LtsError("probabilistic fairness is not defined for reactive systems");
    if (lts.truncated) {
        v.holds = Holds::bounded_unknown;
        v.notes.push_back("exploration truncated; no verdict on the unexplored part");
        return v;
    }

    if (a.kind == AssumptionKind::Fu || a.kind == AssumptionKind::Pr) {
        bool ok = agef(lts, goal, a.reactive);
        v.holds = ok ? Holds::yes : Holds::no;
        if (!ok) {
            auto good = can_reach(lts, goal, a.reactive);
            std::vector<bool> everywhere(lts.states.size(), true);
            v.prefix = shortest_path(lts, everywhere, [&](StateIdx s) { return !good[s]; });
            v.notes.push_back("goal not reachable from the end state of the witness");
        }
        if (a.kind == AssumptionKind::Pr)
            v.notes.push_back("decided via AGEF (probabilistic fairness coincides with ST on finite systems)");
        return v;
    }

    // goal-avoiding region reachable from the initial states
    std::vector<bool> avoid(lts.states.size());
    for (StateIdx s = 0; s < avoid.size(); ++s)
        avoid[s] = !goal[s];
    std::vector<bool> region(lts.states.size(), false);
    {
        std::deque<StateIdx> todo;
        for (StateIdx s : lts.initial)
            if (avoid[s] && !region[s]) {
                region[s] = true;
                todo.push_back(s);
            }
        while (!todo.empty()) {
            StateIdx s = todo.front();
            todo.pop_front();
            for (TransIdx t : lts.out[s]) {
                StateIdx q = lts.transitions[t].target;
                if (avoid[q] && !region[q]) {
                    region[q] = true;
                    todo.push_back(q);
                }
            }
        }
    }

    // (a) finite complete paths
    auto dead = [&](StateIdx s) {
        return std::all_of(lts.out[s].begin(), lts.out[s].end(),
                           [&](TransIdx t) { return a.reactive && lts.transitions[t].blocking; });
    };
    if (auto p = shortest_path(lts, region, dead)) {
        if (!classify_finite(lts, *p, a.kind == AssumptionKind::ST ? make_assumption(AssumptionKind::P) : a))
            throw std::logic_error("finite witness does not classify as fair");
        v.holds = Holds::no;
        v.prefix = p;
        v.notes.push_back("finite path ends in a state without " +
                          std::string(a.reactive ? "non-blocking " : "") + "transitions");
        return v;
    }

    // (b) infinite paths: fair strongly connected supports
    CycleSearch search(lts, a, region);
    Assumption check = a;
    if (a.kind == AssumptionKind::ST) {
        check.kind = AssumptionKind::S;
        check.taskset = extract_tasks(lts, "T");
    }
    for (const Support& sp : search.run()) {
        std::optional<PathPrefix> stem;
        if (a.kind == AssumptionKind::Just)
            stem = just_stem(lts, region, sp, a.reactive);
        else
            stem = shortest_path(lts, region, [&](StateIdx s) {
                return std::binary_search(sp.states.begin(), sp.states.end(), s);
            });
        if (!stem)
            continue;
        Lasso l{*stem, covering_cycle(lts, sp, last_state(lts, *stem))};
        if (!classify_lasso(lts, l, check))
            throw std::logic_error("lasso witness does not classify as fair: " + lasso_str(lts, l));
        v.holds = Holds::no;
        v.lasso = std::move(l);
        v.notes.push_back("fair goal-avoiding cycle over " + std::to_string(sp.states.size()) + " states");
        return v;
    }
    v.holds = Holds::yes;
    return v;
}

Verdict liveness(const AugmentedLTS& lts, const std::string& goal_name, const Assumption& a)
{
    return liveness(lts, goal_states(lts, goal_name), goal_name, a);
}

// ------------------------------------------------------------- loop-free

std::optional<PathPrefix> loopfree_witness(const AugmentedLTS& lts, const std::vector<bool>& goal,
                                           std::size_t length)
{
    std::size_t budget = 2000000;
    std::vector<bool> on_path(lts.states.size(), false);
    PathPrefix path;
    std::function<bool(StateIdx)> dfs = [&](StateIdx s) {
        if (path.steps.size() == length)
            return true;
        if (budget-- == 0)
            return false;
        for (TransIdx t : lts.out[s]) {
            StateIdx q = lts.transitions[t].target;
            if (goal[q] || on_path[q])
                continue;
            on_path[q] = true;
            path.steps.push_back(t);
            if (dfs(q))
                return true;
            path.steps.pop_back();
            on_path[q] = false;
        }
        return false;
    };
    for (StateIdx s : lts.initial) {
        if (goal[s])
            continue;
        path = {s, {}};
        std::fill(on_path.begin(), on_path.end(), false);
        on_path[s] = true;
        if (dfs(s))
            return path;
    }
    return std::nullopt;
}

// ------------------------------------------------------------ scheduler

FairScheduler::FairScheduler(const AugmentedLTS& lts, const TaskSet& ts, bool reactive)
    : lts_(lts), reactive_(reactive)
{
    for (const auto& t : ts.tasks)
        tasks_.push_back(&t);
    std::stable_sort(tasks_.begin(), tasks_.end(), [](const Task* a, const Task* b) { return a->name < b->name; });
}

void FairScheduler::fill(StateIdx s)
{
    std::vector<bool> pending(tasks_.size(), false);
    for (const auto& e : entries_)
        pending[e.second] = true;
    for (std::size_t k = 0; k < tasks_.size(); ++k)
        if (!pending[k] && enabled(lts_, *tasks_[k], s, reactive_))
            entries_.insert({column_, k});
    ++column_;
}

void FairScheduler::start(const PathPrefix& path)
{
    entries_.clear();
    column_ = 0;
    fill(last_state(lts_, path));
}

bool FairScheduler::step(PathPrefix& path)
{
    StateIdx s = last_state(lts_, path);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        const Task& task = *tasks_[it->second];
        for (TransIdx t : lts_.out[s]) {
            if (reactive_ && lts_.transitions[t].blocking)
                continue;
            if (!std::binary_search(task.members.begin(), task.members.end(), t))
                continue;
            entries_.erase(it);
            path.steps.push_back(t);
            fill(lts_.transitions[t].target);
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> FairScheduler::digest() const
{
    std::vector<std::size_t> order;
    for (const auto& e : entries_)
        order.push_back(e.second);
    return order;
}

PathPrefix fair_extend(const AugmentedLTS& lts, const PathPrefix& prefix, const TaskSet& ts, std::size_t step_cap,
                       bool reactive)
{
    check_path(lts, prefix);
    PathPrefix path = prefix;
    FairScheduler sched(lts, ts, reactive);
    sched.start(path);
    for (std::size_t i = 0; i < step_cap && sched.step(path); ++i) {
    }
    return path;
}

FairLassoResult fair_lasso(const AugmentedLTS& lts, const PathPrefix& prefix, const TaskSet& ts,
                           std::size_t step_cap, bool reactive)
{
    check_path(lts, prefix);
    FairLassoResult r;
    PathPrefix path = prefix;
    FairScheduler sched(lts, ts, reactive);
    sched.start(path);
    std::map<std::pair<StateIdx, std::vector<std::size_t>>, std::size_t> seen;
    seen.emplace(std::make_pair(last_state(lts, path), sched.digest()), path.steps.size());
    for (std::size_t i = 0; i < step_cap; ++i) {
        if (!sched.step(path)) {
            r.finite = path;
            return r;
        }
        ++r.steps;
        auto [it, fresh] = seen.emplace(std::make_pair(last_state(lts, path), sched.digest()), path.steps.size());
        if (!fresh) {
            Lasso l;
            l.stem.start = path.start;
            l.stem.steps.assign(path.steps.begin(), path.steps.begin() + static_cast<std::ptrdiff_t>(it->second));
            l.cycle.assign(path.steps.begin() + static_cast<std::ptrdiff_t>(it->second), path.steps.end());
            r.lasso = std::move(l);
            return r;
        }
    }
    return r;
}

// ------------------------------------------------------------ hierarchy

std::vector<Lasso> enumerate_lassos(const AugmentedLTS& lts, LassoBounds b)
{
    // closed walks without repeated transitions, per start state
    std::map<StateIdx, std::vector<std::vector<TransIdx>>> cycles;
    auto cycles_from = [&](StateIdx s) -> const std::vector<std::vector<TransIdx>>& {
        auto it = cycles.find(s);
        if (it != cycles.end())
            return it->second;
        std::vector<std::vector<TransIdx>> found;
        std::vector<TransIdx> walk;
        std::function<void(StateIdx)> dfs = [&](StateIdx cur) {
            for (TransIdx t : lts.out[cur]) {
                if (std::find(walk.begin(), walk.end(), t) != walk.end())
                    continue;
                walk.push_back(t);
                StateIdx q = lts.transitions[t].target;
                if (q == s)
                    found.push_back(walk);
                if (walk.size() < b.cycle)
                    dfs(q);
                walk.pop_back();
            }
        };
        dfs(s);
        return cycles.emplace(s, std::move(found)).first->second;
    };

    std::vector<Lasso> out;
    PathPrefix stem;
    std::function<void(StateIdx)> stems = [&](StateIdx cur) {
        for (const auto& c : cycles_from(cur))
            out.push_back({stem, c});
        if (stem.steps.size() == b.stem)
            return;
        for (TransIdx t : lts.out[cur]) {
            stem.steps.push_back(t);
            stems(lts.transitions[t].target);
            stem.steps.pop_back();
        }
    };
    for (StateIdx s : lts.initial) {
        stem = {s, {}};
        stems(s);
    }
    return out;
}

HierarchyReport hierarchy_check(const AugmentedLTS& lts, const std::vector<Lasso>& lassos,
                                const Assumption& stronger, const Assumption& weaker)
{
    HierarchyReport r;
    r.stronger = stronger.str();
    r.weaker = weaker.str();
    for (const auto& l : lassos) {
        ++r.lassos_checked;
        if (classify_lasso(lts, l, stronger) && !classify_lasso(lts, l, weaker))
            r.violations.push_back(l);
    }
    return r;
}

HierarchyReport hierarchy_check(const AugmentedLTS& lts, const Assumption& stronger, const Assumption& weaker,
                                LassoBounds b, const std::vector<std::string>& needed)
{
    if (!needed.empty()) {
        auto rep = validate_side_conditions(lts);
        for (const auto& n : needed) {
            const auto& c = rep.get(n);
            if (!c.checked || !c.passed) {
                HierarchyReport r;
                r.stronger = stronger.str();
                r.weaker = weaker.str();
                r.skipped = true;
                r.skip_reason = "side condition " + n + (c.checked ? " fails: " + c.counterexample : " not checkable");
                return r;
            }
        }
    }
    return hierarchy_check(lts, enumerate_lassos(lts, b), stronger, weaker);
}

} // namespace fairlab
