#pragma once

#include "fairlab/semantics.hpp"
#include "fairlab/verify.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fairlab
{

// A .ccs program (parsed, checked, explored) or an LTS .json file. Goals
// given here are added to those stored in the file.
AugmentedLTS load_system(const std::filesystem::path& file, ExploreCaps caps = {},
                         const std::map<std::string, GoalSpec>& goals = {});

std::map<std::string, GoalSpec> load_goals(const std::string& json_text);

// "A".."G", "custom=<file>" (relative to base), "tasks=<name>" (a task set
// stored in the LTS).
TaskSet resolve_taskset(const std::string& text, const AugmentedLTS& lts, const std::filesystem::path& base);

// P | just | J:x | W:x | S:x | SWI | Fu | ST | Pr, x as in resolve_taskset,
// optionally followed by ",reactive".
Assumption parse_assumption(const std::string& text, const AugmentedLTS& lts, const std::filesystem::path& base);

// Steps separated by blanks: a transition id (t3), a label (a, 'a, tau) or
// a label with its instruction set (tau{b@1,b~@1}). Each step must pick
// exactly one transition leaving the current state.
PathPrefix resolve_path(const AugmentedLTS& lts, StateIdx start, const std::string& steps);
// "STEM ; CYCLE", starting from the first initial state.
Lasso resolve_lasso(const AugmentedLTS& lts, const std::string& text);

// Lassos denoting the same infinite path get the same canonical form:
// primitive cycle, shortest stem.
Lasso canonical_lasso(const AugmentedLTS& lts, const Lasso& l);

struct CorpusCheck
{
    std::string entry;
    std::string kind; // verdict lasso separation prefix loopfree agef states simulate truncated
    std::string what;
    std::string expected;
    std::string actual;
    bool passed = false;
    std::string note;
};

struct CorpusReport
{
    std::string text; // matrix plus one line per check
    std::vector<CorpusCheck> checks;
    std::size_t entries = 0;
    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] std::size_t failures() const;
};

struct CorpusEntry
{
    std::string id;
    std::filesystem::path source;
    ExploreCaps caps;
    std::map<std::string, GoalSpec> goals;
    std::map<std::string, std::string> lassos; // name -> lasso text
    std::string note;
};

// Reads <dir>/corpus.json.
std::vector<CorpusEntry> load_corpus_entries(const std::filesystem::path& dir);
AugmentedLTS load_entry_system(const CorpusEntry& e);

// Runs every entry whose id matches the glob (empty: all).
CorpusReport run_corpus(const std::filesystem::path& dir, const std::string& filter = "");

// Matrix column headers in print order.
const std::vector<std::string>& matrix_columns();

} // namespace fairlab
