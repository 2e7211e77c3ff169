#include "fairlab/tasks.hpp"

#include <json.hpp>

#include <algorithm>

namespace fairlab
{

std::string path_str(const ComponentPath& c) { return c.empty() ? "ε" : c; }

namespace
{

template <class Range>
std::string set_str(const Range& items)
{
    std::string s = "{";
    bool first = true;
    for (const auto& i : items) {
        if (!first)
            s += ",";
        s += i;
        first = false;
    }
    return s + "}";
}

} // namespace

TaskSet extract_tasks(const AugmentedLTS& lts, const std::string& notion)
{
    if (notion == "I" || notion == "Z") {
        if (!lts.has_instr())
            throw LtsError("notion " + notion + " needs instruction annotations");
    } else if (notion == "C" || notion == "G") {
        if (!lts.has_comp())
            throw LtsError("notion " + notion + " needs component annotations");
    } else if (notion != "A" && notion != "T") {
        throw LtsError("unknown notion '" + notion + "'");
    }

    std::map<std::string, std::vector<TransIdx>> by_name;
    for (TransIdx t = 0; t < lts.transitions.size(); ++t) {
        const auto& tr = lts.transitions[t];
        if (notion == "A") {
            by_name["A:" + tr.label.str()].push_back(t);
        } else if (notion == "T") {
            by_name["T:" + tr.id].push_back(t);
        } else if (notion == "I") {
            for (const auto& i : *tr.instr)
                by_name["I:" + i].push_back(t);
        } else if (notion == "Z") {
            by_name["Z:" + set_str(*tr.instr)].push_back(t);
        } else if (notion == "C") {
            for (const auto& c : *tr.comp)
                by_name["C:" + path_str(c)].push_back(t);
        } else {
            std::vector<std::string> shown;
            for (const auto& c : *tr.comp)
                shown.push_back(path_str(c));
            by_name["G:" + set_str(shown)].push_back(t);
        }
    }
    TaskSet ts;
    ts.notion = notion;
    ts.bounded = lts.truncated;
    for (auto& [name, members] : by_name)
        ts.tasks.push_back({name, std::move(members)});
    return ts;
}

TaskSet load_custom_tasks(const AugmentedLTS& lts, const std::string& json_text)
{
    using json = nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw LtsError(std::string("tasks: ") + e.what());
    }
    if (!j.is_object() || !j.contains("tasks") || !j.at("tasks").is_array())
        throw LtsError("tasks: expected {\"tasks\": [...]}");
    TaskSet ts;
    ts.notion = "custom";
    ts.bounded = lts.truncated;
    for (const auto& t : j.at("tasks")) {
        if (!t.is_object() || !t.contains("name") || !t.at("name").is_string() || !t.contains("members") ||
            !t.at("members").is_array())
            throw LtsError("tasks: each task needs a name and a members array");
        Task task;
        task.name = t.at("name").get<std::string>();
        for (const auto& m : t.at("members")) {
            if (!m.is_string())
                throw LtsError("tasks: members are transition ids");
            try {
                task.members.push_back(lts.transition_index(m.get<std::string>()));
            } catch (const LtsError&) {
                throw LtsError("tasks: task " + task.name + " references unknown transition '" +
                               m.get<std::string>() + "'");
            }
        }
        std::sort(task.members.begin(), task.members.end());
        task.members.erase(std::unique(task.members.begin(), task.members.end()), task.members.end());
        ts.tasks.push_back(std::move(task));
    }
    return ts;
}

std::string custom_tasks_json(const AugmentedLTS& lts, const TaskSet& ts)
{
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& t : ts.tasks) {
        std::vector<std::string> ids;
        for (TransIdx m : t.members)
            ids.push_back(lts.transitions[m].id);
        list.push_back({{"name", t.name}, {"members", ids}});
    }
    nlohmann::ordered_json j;
    j["tasks"] = std::move(list);
    return j.dump(2) + "\n";
}

TaskSet with_progress_task(const TaskSet& ts, const AugmentedLTS& lts)
{
    std::vector<bool> covered(lts.transitions.size(), false);
    for (const auto& t : ts.tasks)
        for (TransIdx m : t.members)
            covered[m] = true;
    if (std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
        return ts;
    TaskSet out = ts;
    Task all{"Tr", {}};
    for (TransIdx t = 0; t < lts.transitions.size(); ++t)
        all.members.push_back(t);
    out.tasks.push_back(std::move(all));
    return out;
}

} // namespace fairlab
