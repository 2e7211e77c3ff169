#pragma once

#include "fairlab/lts.hpp"

#include <string>

namespace fairlab
{

// notion: one of A T I Z C G. Tasks come out sorted by name; empty tasks
// are omitted. Throws LtsError when the LTS lacks the needed annotation.
TaskSet extract_tasks(const AugmentedLTS& lts, const std::string& notion);

// {"tasks":[{"name":str,"members":[str]}]}
TaskSet load_custom_tasks(const AugmentedLTS& lts, const std::string& json_text);
std::string custom_tasks_json(const AugmentedLTS& lts, const TaskSet& ts);

// Adds the task "Tr" of all transitions unless the tasks already cover Tr.
TaskSet with_progress_task(const TaskSet& ts, const AugmentedLTS& lts);

// Display form of a component path; the whole system is "ε".
std::string path_str(const ComponentPath& c);

} // namespace fairlab
