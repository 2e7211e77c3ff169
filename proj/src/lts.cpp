#include "fairlab/lts.hpp"

#include "fairlab/semantics.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>

namespace fairlab
{

using json = nlohmann::ordered_json;

void AugmentedLTS::reindex()
{
    state_ids_.clear();
    transition_ids_.clear();
    for (StateIdx s = 0; s < states.size(); ++s)
        if (!state_ids_.emplace(states[s].id, s).second)
            throw LtsError("duplicate state id '" + states[s].id + "'");
    for (TransIdx t = 0; t < transitions.size(); ++t)
        if (!transition_ids_.emplace(transitions[t].id, t).second)
            throw LtsError("duplicate transition id '" + transitions[t].id + "'");
    out.assign(states.size(), {});
    for (TransIdx t = 0; t < transitions.size(); ++t) {
        const auto& tr = transitions[t];
        if (tr.source >= states.size() || tr.target >= states.size())
            throw LtsError("transition '" + tr.id + "' has a dangling endpoint");
        out[tr.source].push_back(t);
    }
}

StateIdx AugmentedLTS::state_index(const std::string& id) const
{
    auto it = state_ids_.find(id);
    if (it == state_ids_.end())
        throw LtsError("unknown state '" + id + "'");
    return it->second;
}

TransIdx AugmentedLTS::transition_index(const std::string& id) const
{
    auto it = transition_ids_.find(id);
    if (it == transition_ids_.end())
        throw LtsError("unknown transition '" + id + "'");
    return it->second;
}

bool AugmentedLTS::has_instr() const
{
    return std::all_of(transitions.begin(), transitions.end(), [](const AugTransition& t) { return t.instr.has_value(); });
}

bool AugmentedLTS::has_comp() const
{
    return std::all_of(transitions.begin(), transitions.end(), [](const AugTransition& t) { return t.comp.has_value(); });
}

// ------------------------------------------------------------------ JSON

namespace
{

const std::set<std::string> k_notions{"A", "T", "I", "Z", "C", "G", "custom"};

template <class J>
const J& field(const J& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw LtsError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

template <class J>
std::string str_field(const J& obj, const char* key, const std::string& where)
{
    const auto& v = field(obj, key, where);
    if (!v.is_string())
        throw LtsError(where + ": field '" + key + "' must be a string");
    return v.template get<std::string>();
}

template <class J>
std::vector<std::string> str_list(const J& v, const std::string& where)
{
    if (!v.is_array())
        throw LtsError(where + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string())
            throw LtsError(where + ": expected an array of strings");
        out.push_back(x.template get<std::string>());
    }
    return out;
}

bool valid_path(const std::string& p)
{
    return std::all_of(p.begin(), p.end(), [](char c) { return c == 'L' || c == 'R'; });
}

template <class J>
GoalSpec goal_from_json(const J& j, const std::string& where)
{
    GoalSpec g;
    const auto& ds = field(j, "disjuncts", where);
    if (!ds.is_array())
        throw LtsError(where + ": 'disjuncts' must be an array");
    for (const auto& d : ds) {
        GoalDisjunct gd;
        std::string kind = str_field(d, "kind", where);
        if (kind == "state") {
            gd.kind = GoalDisjunct::Kind::state;
            gd.expr = str_field(d, "expr", where);
        } else if (kind == "component") {
            gd.kind = GoalDisjunct::Kind::component;
            gd.path = str_field(d, "path", where);
            gd.expr = str_field(d, "expr", where);
            if (!valid_path(gd.path))
                throw LtsError(where + ": component path must be over L and R");
        } else if (kind == "states") {
            gd.kind = GoalDisjunct::Kind::states;
            gd.ids = str_list(field(d, "ids", where), where);
        } else {
            throw LtsError(where + ": unknown goal kind '" + kind + "'");
        }
        g.disjuncts.push_back(std::move(gd));
    }
    return g;
}

json goal_to_json(const GoalSpec& g)
{
    json ds = json::array();
    for (const auto& d : g.disjuncts) {
        json o;
        switch (d.kind) {
        case GoalDisjunct::Kind::state:
            o["kind"] = "state";
            o["expr"] = d.expr;
            break;
        case GoalDisjunct::Kind::component:
            o["kind"] = "component";
            o["path"] = d.path;
            o["expr"] = d.expr;
            break;
        case GoalDisjunct::Kind::states:
            o["kind"] = "states";
            o["ids"] = d.ids;
            break;
        }
        ds.push_back(std::move(o));
    }
    json j;
    j["disjuncts"] = std::move(ds);
    return j;
}

} // namespace

GoalSpec parse_goal_spec(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw LtsError(std::string("goal: ") + e.what());
    }
    return goal_from_json(j, "goal");
}

std::string goal_spec_json(const GoalSpec& g) { return goal_to_json(g).dump(); }

AugmentedLTS load_lts(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw LtsError(std::string("lts: ") + e.what());
    }
    if (!j.is_object())
        throw LtsError("lts: top level must be an object");

    AugmentedLTS lts;
    const auto& states = field(j, "states", "lts");
    if (!states.is_array())
        throw LtsError("lts: 'states' must be an array");
    for (const auto& s : states) {
        StateRec r;
        r.id = str_field(s, "id", "state");
        if (s.contains("expr")) {
            if (!s.at("expr").is_string())
                throw LtsError("state " + r.id + ": 'expr' must be a string");
            r.expr = s.at("expr").get<std::string>();
        }
        lts.states.push_back(std::move(r));
    }
    std::map<std::string, StateIdx> sid;
    for (StateIdx i = 0; i < lts.states.size(); ++i)
        if (!sid.emplace(lts.states[i].id, i).second)
            throw LtsError("lts: duplicate state id '" + lts.states[i].id + "'");
    auto state_ref = [&](const std::string& id, const std::string& where) {
        auto it = sid.find(id);
        if (it == sid.end())
            throw LtsError(where + ": unknown state '" + id + "'");
        return it->second;
    };

    const auto& trs = field(j, "transitions", "lts");
    if (!trs.is_array())
        throw LtsError("lts: 'transitions' must be an array");
    for (const auto& t : trs) {
        AugTransition tr;
        tr.id = str_field(t, "id", "transition");
        std::string where = "transition " + tr.id;
        tr.source = state_ref(str_field(t, "source", where), where);
        tr.target = state_ref(str_field(t, "target", where), where);
        try {
            tr.label = ActionLabel::parse(str_field(t, "label", where));
        } catch (const std::invalid_argument& e) {
            throw LtsError(where + ": " + e.what());
        }
        if (t.contains("instr")) {
            auto v = str_list(t.at("instr"), where);
            if (v.empty())
                throw LtsError(where + ": 'instr' must be nonempty");
            std::sort(v.begin(), v.end());
            tr.instr = std::move(v);
        }
        if (t.contains("comp")) {
            auto v = str_list(t.at("comp"), where);
            if (v.empty())
                throw LtsError(where + ": 'comp' must be nonempty");
            for (const auto& p : v)
                if (!valid_path(p))
                    throw LtsError(where + ": component path must be over L and R");
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            tr.comp = std::move(v);
        }
        const auto& b = field(t, "blocking", where);
        if (!b.is_boolean())
            throw LtsError(where + ": 'blocking' must be a boolean");
        tr.blocking = b.get<bool>();
        lts.transitions.push_back(std::move(tr));
    }

    for (const auto& id : str_list(field(j, "initial", "lts"), "initial"))
        lts.initial.push_back(state_ref(id, "initial"));
    if (lts.initial.empty())
        throw LtsError("lts: 'initial' must be nonempty");

    std::string origin = str_field(j, "origin", "lts");
    if (origin == "ccs")
        lts.origin = Origin::ccs;
    else if (origin == "handwritten")
        lts.origin = Origin::handwritten;
    else
        throw LtsError("lts: unknown origin '" + origin + "'");
    const auto& trunc = field(j, "truncated", "lts");
    if (!trunc.is_boolean())
        throw LtsError("lts: 'truncated' must be a boolean");
    lts.truncated = trunc.get<bool>();

    lts.reindex();

    if (j.contains("goals")) {
        if (!j.at("goals").is_object())
            throw LtsError("lts: 'goals' must be an object");
        for (const auto& [name, g] : j.at("goals").items()) {
            GoalSpec gs = goal_from_json(g, "goal " + name);
            for (const auto& d : gs.disjuncts)
                for (const auto& id : d.ids)
                    state_ref(id, "goal " + name);
            lts.goals.emplace(name, std::move(gs));
        }
    }
    if (j.contains("tasks")) {
        if (!j.at("tasks").is_object())
            throw LtsError("lts: 'tasks' must be an object");
        for (const auto& [name, ts] : j.at("tasks").items()) {
            std::string where = "taskset " + name;
            TaskSet set;
            set.notion = str_field(ts, "notion", where);
            if (!k_notions.count(set.notion))
                throw LtsError(where + ": unknown notion '" + set.notion + "'");
            const auto& list = field(ts, "tasks", where);
            if (!list.is_array())
                throw LtsError(where + ": 'tasks' must be an array");
            for (const auto& t : list) {
                Task task;
                task.name = str_field(t, "name", where);
                for (const auto& m : str_list(field(t, "members", where), where)) {
                    try {
                        task.members.push_back(lts.transition_index(m));
                    } catch (const LtsError&) {
                        throw LtsError(where + ": task " + task.name + " references unknown transition '" + m + "'");
                    }
                }
                std::sort(task.members.begin(), task.members.end());
                task.members.erase(std::unique(task.members.begin(), task.members.end()), task.members.end());
                set.tasks.push_back(std::move(task));
            }
            lts.tasks.emplace(name, std::move(set));
        }
    }
    if (lts.origin == Origin::ccs && !(lts.has_instr() && lts.has_comp()))
        throw LtsError("lts: ccs-origin transitions need instr and comp");
    return lts;
}

std::string save_lts(const AugmentedLTS& lts)
{
    json j;
    json states = json::array();
    for (const auto& s : lts.states) {
        json o;
        o["id"] = s.id;
        if (s.expr)
            o["expr"] = *s.expr;
        states.push_back(std::move(o));
    }
    j["states"] = std::move(states);
    json trs = json::array();
    for (const auto& t : lts.transitions) {
        json o;
        o["id"] = t.id;
        o["source"] = lts.states[t.source].id;
        o["target"] = lts.states[t.target].id;
        o["label"] = t.label.str();
        if (t.instr)
            o["instr"] = *t.instr;
        if (t.comp)
            o["comp"] = *t.comp;
        o["blocking"] = t.blocking;
        trs.push_back(std::move(o));
    }
    j["transitions"] = std::move(trs);
    json init = json::array();
    for (StateIdx s : lts.initial)
        init.push_back(lts.states[s].id);
    j["initial"] = std::move(init);
    json goals = json::object();
    for (const auto& [name, g] : lts.goals)
        goals[name] = goal_to_json(g);
    j["goals"] = std::move(goals);
    json tasks = json::object();
    for (const auto& [name, ts] : lts.tasks) {
        json list = json::array();
        for (const auto& t : ts.tasks) {
            json members = json::array();
            for (TransIdx m : t.members)
                members.push_back(lts.transitions[m].id);
            list.push_back({{"name", t.name}, {"members", std::move(members)}});
        }
        tasks[name] = {{"notion", ts.notion}, {"tasks", std::move(list)}};
    }
    j["tasks"] = std::move(tasks);
    j["origin"] = lts.origin == Origin::ccs ? "ccs" : "handwritten";
    j["truncated"] = lts.truncated;
    return j.dump(2) + "\n";
}

// ----------------------------------------------------------------- goals

namespace
{

// Named state text with instruction names and instance suffixes dropped.
std::string strip_names(const std::string& named)
{
    static const std::regex names(R"(\{[^}]*\}|/[0-9]+)");
    return std::regex_replace(named, names, "");
}

std::string unnamed_state(const AugmentedLTS& lts, StateIdx s)
{
    if (s < lts.state_exprs.size() && lts.state_exprs[s])
        return print_expr(lts.state_exprs[s], PrintMode::unnamed);
    if (!lts.states[s].expr)
        throw LtsError("state " + lts.states[s].id + " has no expression");
    return strip_names(*lts.states[s].expr);
}

std::string unnamed_goal(const AugmentedLTS& lts, const std::string& text)
{
    try {
        Expr e = lts.spec ? parse_ccs_expr(*lts.spec, text) : parse_ccs_term(text);
        return print_expr(e, PrintMode::unnamed);
    } catch (const ParseError& e) {
        throw LtsError("goal expression '" + text + "': " + e.what());
    }
}

} // namespace

std::vector<bool> goal_states(const AugmentedLTS& lts, const GoalSpec& g)
{
    std::vector<bool> in(lts.states.size(), false);
    for (const auto& d : g.disjuncts) {
        switch (d.kind) {
        case GoalDisjunct::Kind::states:
            for (const auto& id : d.ids)
                in[lts.state_index(id)] = true;
            break;
        case GoalDisjunct::Kind::state: {
            std::string want = unnamed_goal(lts, d.expr);
            for (StateIdx s = 0; s < lts.states.size(); ++s)
                if (!in[s] && unnamed_state(lts, s) == want)
                    in[s] = true;
            break;
        }
        case GoalDisjunct::Kind::component: {
            if (lts.state_exprs.size() != lts.states.size())
                throw LtsError("component goals need an LTS explored from a program");
            std::string want = unnamed_goal(lts, d.expr);
            for (StateIdx s = 0; s < lts.states.size(); ++s) {
                auto part = project(lts.state_exprs[s], d.path);
                if (part && print_expr(*part, PrintMode::unnamed) == want)
                    in[s] = true;
            }
            break;
        }
        }
    }
    return in;
}

std::vector<bool> goal_states(const AugmentedLTS& lts, const std::string& goal_name)
{
    auto it = lts.goals.find(goal_name);
    if (it == lts.goals.end())
        throw LtsError("unknown goal '" + goal_name + "'");
    return goal_states(lts, it->second);
}

bool concurrent(const AugmentedLTS& lts, TransIdx t, TransIdx u)
{
    const auto& ct = lts.transitions.at(t).comp;
    const auto& cu = lts.transitions.at(u).comp;
    if (!ct || !cu)
        throw LtsError("concurrency needs component annotations");
    for (const auto& c : *ct)
        if (std::binary_search(cu->begin(), cu->end(), c))
            return false;
    return true;
}

// ------------------------------------------------------------ validators

const ConditionResult& SideConditionReport::get(const std::string& name) const
{
    for (const auto& r : results)
        if (r.name == name)
            return r;
    throw std::out_of_range("no side condition " + name);
}

bool SideConditionReport::all_passed() const
{
    return std::all_of(results.begin(), results.end(), [](const ConditionResult& r) { return !r.checked || r.passed; });
}

std::optional<std::map<std::string, ComponentPath>> instruction_components(const AugmentedLTS& lts)
{
    if (!lts.has_instr() || !lts.has_comp())
        return std::nullopt;
    std::map<std::string, ComponentPath> cmp;
    if (lts.spec) {
        for (const auto& [name, info] : lts.spec->names)
            cmp[name] = info.cmp;
        return cmp;
    }
    // Singleton instruction sets fix cmp directly; the rest is filled with
    // the components not yet covered by the other instructions.
    for (const auto& t : lts.transitions)
        if (t.instr->size() == 1 && t.comp->size() == 1 && !cmp.count(t.instr->front()))
            cmp[t.instr->front()] = t.comp->front();
    for (const auto& t : lts.transitions) {
        std::set<ComponentPath> missing(t.comp->begin(), t.comp->end());
        for (const auto& i : *t.instr)
            if (cmp.count(i))
                missing.erase(cmp[i]);
        for (const auto& i : *t.instr) {
            if (cmp.count(i))
                continue;
            if (missing.empty())
                cmp[i] = t.comp->front();
            else {
                cmp[i] = *missing.begin();
                missing.erase(missing.begin());
            }
        }
    }
    return cmp;
}

namespace
{

ConditionResult condition(std::string name)
{
    ConditionResult r;
    r.name = std::move(name);
    return r;
}

} // namespace

SideConditionReport validate_side_conditions(const AugmentedLTS& lts)
{
    SideConditionReport rep;
    rep.bounded = lts.truncated;
    const bool instr = lts.has_instr();
    const bool comp = lts.has_comp();
    auto fail = [](ConditionResult& r, std::string why) {
        if (r.passed) {
            r.passed = false;
            r.counterexample = std::move(why);
        }
    };

    ConditionResult c1 = condition("(1)");
    if (instr) {
        c1.checked = true;
        for (StateIdx s = 0; s < lts.states.size() && c1.passed; ++s) {
            std::map<std::vector<std::string>, TransIdx> seen;
            for (TransIdx t : lts.out[s]) {
                auto [it, fresh] = seen.emplace(*lts.transitions[t].instr, t);
                if (!fresh)
                    fail(c1, "state " + lts.states[s].id + ": " + lts.transitions[it->second].id + " and " +
                                 lts.transitions[t].id + " share their instruction set");
            }
        }
    } else {
        c1.note = "no instruction annotations";
    }
    rep.results.push_back(c1);

    ConditionResult c2 = condition("(2)");
    if (instr) {
        // Finitely many instructions: a program has finitely many prefixes and
        // a stored LTS finitely many transitions.
        c2.checked = true;
    } else {
        c2.note = "no instruction annotations";
    }
    rep.results.push_back(c2);

    auto cmp = instruction_components(lts);
    ConditionResult c3 = condition("(3)");
    if (cmp) {
        c3.checked = true;
        for (const auto& t : lts.transitions) {
            std::set<ComponentPath> image;
            for (const auto& i : *t.instr) {
                auto it = cmp->find(i);
                if (it != cmp->end())
                    image.insert(it->second);
            }
            if (std::vector<ComponentPath>(image.begin(), image.end()) != *t.comp) {
                fail(c3, "transition " + t.id + ": comp differs from the components of its instructions");
                break;
            }
        }
    } else {
        c3.note = "needs instruction and component annotations";
    }
    rep.results.push_back(c3);

    ConditionResult c4 = condition("(4)"), c5 = condition("(5)");
    if (lts.spec && lts.state_exprs.size() == lts.states.size()) {
        c4.checked = c5.checked = true;
        std::vector<std::string> names;
        for (const auto& [n, info] : lts.spec->names)
            names.push_back(n);
        std::vector<std::map<std::string, std::optional<bool>>> req(lts.states.size());
        auto is_req = [&](StateIdx s, const std::string& i) {
            auto it = req[s].find(i);
            if (it == req[s].end())
                it = req[s].emplace(i, requested_opt(lts, i, s)).first;
            return it->second.value_or(false);
        };
        for (StateIdx s = 0; s < lts.states.size(); ++s) {
            if (!lts.is_expanded(s))
                continue;
            for (TransIdx t : lts.out[s])
                for (const auto& i : *lts.transitions[t].instr)
                    if (!is_req(s, i))
                        fail(c4, "instruction " + i + " enabled but not requested in " + lts.states[s].id);
            for (const auto& i : names) {
                if (!is_req(s, i))
                    continue;
                const ComponentPath& ci = lts.spec->names.at(i).cmp;
                for (TransIdx u : lts.out[s]) {
                    const auto& tu = lts.transitions[u];
                    if (std::binary_search(tu.comp->begin(), tu.comp->end(), ci))
                        continue;
                    if (!is_req(tu.target, i))
                        fail(c5, "instruction " + i + " requested in " + lts.states[s].id + " but not after " +
                                     tu.id);
                }
            }
        }
    } else {
        c4.note = c5.note = "needs a program (requested is defined on expressions)";
    }

    ConditionResult c6 = condition("(6)"), sharp = condition("(#)");
    if (comp) {
        sharp.checked = true;
        c6.checked = instr;
        if (!instr)
            c6.note = "no instruction annotations";
        for (StateIdx s = 0; s < lts.states.size(); ++s) {
            for (TransIdx t : lts.out[s]) {
                for (TransIdx u : lts.out[s]) {
                    if (!concurrent(lts, t, u))
                        continue;
                    StateIdx q = lts.transitions[u].target;
                    if (!lts.is_expanded(q))
                        continue;
                    bool same_comp = false, same_instr = false;
                    for (TransIdx v : lts.out[q]) {
                        same_comp |= lts.transitions[v].comp == lts.transitions[t].comp;
                        if (instr)
                            same_instr |= lts.transitions[v].instr == lts.transitions[t].instr;
                    }
                    if (!same_comp)
                        fail(sharp, lts.transitions[t].id + " concurrent with " + lts.transitions[u].id +
                                        " but no successor of the latter shares its components");
                    if (instr && !same_instr)
                        fail(c6, lts.transitions[t].id + " concurrent with " + lts.transitions[u].id +
                                     " but no successor of the latter has its instructions");
                }
            }
        }
    } else {
        sharp.note = c6.note = "no component annotations";
    }
    rep.results.push_back(c4);
    rep.results.push_back(c5);
    rep.results.push_back(c6);
    rep.results.push_back(sharp);

    ConditionResult refl = condition("reflexivity");
    if (comp) {
        refl.checked = true;
        for (TransIdx t = 0; t < lts.transitions.size(); ++t)
            if (concurrent(lts, t, t)) {
                fail(refl, "transition " + lts.transitions[t].id + " is concurrent with itself");
                break;
            }
    } else {
        refl.note = "no component annotations";
    }
    rep.results.push_back(refl);
    return rep;
}

} // namespace fairlab
