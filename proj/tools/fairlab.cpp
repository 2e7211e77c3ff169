// fairlab command-line front end.
#include "fairlab/corpus.hpp"
#include "fairlab/ltl.hpp"
#include "fairlab/simulate.hpp"
#include "fairlab/tasks.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace fairlab;

namespace
{

// Missing or unreadable files and bad flag values: exit 2.
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw UsageError("cannot write " + path);
}

// key=value defaults; '#' starts a comment.
struct Config
{
    ExploreCaps caps;
    LassoBounds bounds;
    std::size_t horizon = 200;
    std::size_t runs = 2000;
    std::uint64_t seed = k_default_seed;

    void load(const std::string& path)
    {
        std::istringstream in(read_file(path));
        std::string line;
        for (int n = 1; std::getline(in, line); ++n) {
            line = line.substr(0, line.find('#'));
            auto eq = line.find('=');
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t\r"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
                return s;
            };
            if (trim(line).empty())
                continue;
            if (eq == std::string::npos)
                throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
            std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            std::uint64_t v;
            try {
                std::size_t used = 0;
                v = std::stoull(value, &used, 0);
                if (used != value.size())
                    throw std::invalid_argument(value);
            } catch (const std::logic_error&) {
                throw UsageError(path + ":" + std::to_string(n) + ": '" + value + "' is not a number");
            }
            if (key == "state_cap")
                caps.state_cap = v;
            else if (key == "depth_cap")
                caps.depth_cap = v;
            else if (key == "stem")
                bounds.stem = v;
            else if (key == "cycle")
                bounds.cycle = v;
            else if (key == "horizon")
                horizon = v;
            else if (key == "runs")
                runs = v;
            else if (key == "seed")
                seed = v;
            else
                throw UsageError(path + ":" + std::to_string(n) + ": unknown key '" + key + "'");
        }
    }
};

std::map<std::string, GoalSpec> goals_from(const std::string& file)
{
    return file.empty() ? std::map<std::string, GoalSpec>{} : load_goals(read_file(file));
}

AugmentedLTS open_system(const std::string& file, const ExploreCaps& caps, const std::string& goals_file)
{
    if (!fs::is_regular_file(file))
        throw UsageError("cannot read " + file);
    auto goals = goals_from(goals_file);
    AugmentedLTS lts = load_system(file, caps, goals);
    if (lts.truncated && fs::path(file).extension() == ".ccs")
        std::cerr << "warning: exploration of " << file << " was truncated at state cap " << caps.state_cap
                  << " / depth cap " << caps.depth_cap << "\n";
    else if (lts.truncated)
        std::cerr << "warning: " << file << " is a truncated system; verdicts are bounded\n";
    return lts;
}

fs::path base_of(const std::string& file) { return fs::path(file).parent_path(); }

PathPrefix rooted(const AugmentedLTS& lts, const std::string& steps)
{
    return resolve_path(lts, lts.initial.at(0), steps);
}

std::string task_list(const AugmentedLTS& lts, const TaskSet& ts)
{
    std::ostringstream out;
    out << "notion " << ts.notion << ": " << ts.tasks.size() << " tasks" << (ts.bounded ? " (bounded)" : "") << "\n";
    for (const auto& t : ts.tasks) {
        out << "  " << t.name << ":";
        for (TransIdx m : t.members)
            out << " " << lts.transitions[m].id;
        out << "\n";
    }
    return out.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fairness, justness and liveness checks for CCS programs and transition systems"};
    app.require_subcommand(1);
    std::string config_file;
    app.add_option("--config", config_file, "file of key=value lines: state_cap, depth_cap, stem, cycle, horizon, runs, seed");

    Config cfg;
    std::optional<std::size_t> state_cap, depth_cap, stem, cycle, horizon, runs;
    std::optional<std::uint64_t> seed;
    std::string input, output, goal, assume, goals_file, notion, lasso_text, prefix_text, formula, weights, filter;
    std::string stronger, weaker;
    std::vector<std::string> extra_tasks;
    std::size_t steps = 20;
    std::string corpus_dir = "corpus";
    bool all_goals = false;

    auto add_caps = [&](CLI::App* c) {
        c->add_option("--state-cap", state_cap, "maximum number of explored states");
        c->add_option("--depth-cap", depth_cap, "maximum exploration depth");
        c->add_option("--goals", goals_file, "JSON file with an object of named goals");
    };
    auto add_input = [&](CLI::App* c) {
        c->add_option("input", input, ".ccs program or LTS .json")->required();
        add_caps(c);
    };

    auto* ccs2lts = app.add_subcommand("ccs2lts", "explore a CCS program and write the LTS as JSON");
    ccs2lts->add_option("input", input, ".ccs program")->required();
    ccs2lts->add_option("-o,--output", output, "output file (default stdout)");
    add_caps(ccs2lts);

    auto* live = app.add_subcommand("liveness", "decide a liveness property under an assumption");
    add_input(live);
    live->add_option("--goal", goal, "goal name")->required();
    live->add_option("--assume", assume, "P | just | J:x | W:x | S:x | SWI | Fu | ST | Pr [,reactive]")->required();

    auto* corpus = app.add_subcommand("corpus", "run the example corpus and compare with its expectations");
    corpus->add_option("--dir", corpus_dir, "corpus directory");
    corpus->add_option("--filter", filter, "glob on entry ids");

    auto* tasks = app.add_subcommand("tasks", "print the tasks of a notion");
    add_input(tasks);
    tasks->add_option("--notion", notion, "A T I Z C G, custom=<file> or tasks=<name>")->required();

    auto* classify = app.add_subcommand("classify", "classify a lasso or a finite path");
    add_input(classify);
    classify->add_option("--assume", assume, "assumption")->required();
    auto* lasso_opt = classify->add_option("--lasso", lasso_text, "\"STEM ; CYCLE\"");
    classify->add_option("--prefix", prefix_text, "finite rooted path")->excludes(lasso_opt);

    auto* extend = app.add_subcommand("extend", "extend a rooted path fairly");
    add_input(extend);
    extend->add_option("--tasks", notion, "task notion")->required();
    extend->add_option("--steps", steps, "number of steps");
    extend->add_option("--prefix", prefix_text, "rooted path to start from");

    auto* hier = app.add_subcommand("hierarchy", "check that one assumption implies another on enumerated lassos");
    add_input(hier);
    hier->add_option("--stronger", stronger, "assumption")->required();
    hier->add_option("--weaker", weaker, "assumption")->required();
    hier->add_option("--stem", stem, "maximum stem length");
    hier->add_option("--cycle", cycle, "maximum cycle length");

    auto* ltl = app.add_subcommand("ltl", "evaluate an LTL formula on a lasso");
    add_input(ltl);
    ltl->add_option("--formula", formula, "formula, or weak:<notion> / strong:<notion>")->required();
    ltl->add_option("--lasso", lasso_text, "\"STEM ; CYCLE\"")->required();
    ltl->add_option("--tasks", extra_tasks, "task notions whose names the formula uses");

    auto* sim = app.add_subcommand("simulate", "estimate the probability of reaching a goal");
    add_input(sim);
    sim->add_option("--goal", goal, "goal name")->required();
    sim->add_option("--weights", weights, "{\"weights\":{...}} file");
    sim->add_option("--horizon", horizon, "steps per run");
    sim->add_option("--runs", runs, "number of runs");
    sim->add_option("--seed", seed, "seed (default FAIRLAB_SEED or 0xC0FFEE)");

    auto* validate = app.add_subcommand("validate", "check the structural side conditions");
    add_input(validate);

    auto* agef_cmd = app.add_subcommand("agef", "check that a goal stays reachable");
    add_input(agef_cmd);
    agef_cmd->add_option("--goal", goal, "goal name");
    agef_cmd->add_flag("--all", all_goals, "every goal of the system");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_file.empty())
            cfg.load(config_file);
        if (const char* env = std::getenv("FAIRLAB_SEED")) {
            try {
                cfg.seed = std::stoull(env, nullptr, 0);
            } catch (const std::logic_error&) {
                throw UsageError(std::string("FAIRLAB_SEED='") + env + "' is not a number");
            }
        }
        if (state_cap)
            cfg.caps.state_cap = *state_cap;
        if (depth_cap)
            cfg.caps.depth_cap = *depth_cap;
        if (stem)
            cfg.bounds.stem = *stem;
        if (cycle)
            cfg.bounds.cycle = *cycle;
        if (horizon)
            cfg.horizon = *horizon;
        if (runs)
            cfg.runs = *runs;
        if (seed)
            cfg.seed = *seed;

        if (*ccs2lts) {
            AugmentedLTS lts = open_system(input, cfg.caps, goals_file);
            // exported files carry no program, so goals become state lists
            for (auto& [name, g] : lts.goals) {
                auto in = goal_states(lts, g);
                GoalDisjunct d;
                d.kind = GoalDisjunct::Kind::states;
                for (StateIdx s = 0; s < lts.states.size(); ++s)
                    if (in[s])
                        d.ids.push_back(lts.states[s].id);
                g.disjuncts = {d};
            }
            const std::string text = save_lts(lts);
            if (output.empty())
                std::cout << text;
            else
                write_file(output, text);
            return 0;
        }
        if (*corpus) {
            if (!fs::is_regular_file(fs::path(corpus_dir) / "corpus.json"))
                throw UsageError("no corpus.json in " + corpus_dir);
            auto rep = run_corpus(corpus_dir, filter);
            std::cout << rep.text;
            return rep.all_passed() ? 0 : 1;
        }

        AugmentedLTS lts = open_system(input, cfg.caps, goals_file);
        const fs::path base = base_of(input);

        if (*live) {
            Verdict v = liveness(lts, goal, parse_assumption(assume, lts, base));
            std::cout << verdict_json(lts, v);
            return v.holds == Holds::yes ? 0 : 1;
        }
        if (*tasks) {
            std::cout << task_list(lts, resolve_taskset(notion, lts, base));
            return 0;
        }
        if (*classify) {
            Assumption a = parse_assumption(assume, lts, base);
            bool fair;
            std::string shown;
            if (!lasso_text.empty()) {
                Lasso l = resolve_lasso(lts, lasso_text);
                fair = classify_lasso(lts, l, a);
                shown = lasso_str(lts, l);
            } else {
                PathPrefix p = rooted(lts, prefix_text);
                fair = classify_finite(lts, p, a);
                shown = prefix_str(lts, p);
            }
            std::cout << shown << "\n" << a.str() << ": " << (fair ? "fair" : "unfair") << "\n";
            return fair ? 0 : 1;
        }
        if (*extend) {
            TaskSet ts = resolve_taskset(notion, lts, base);
            PathPrefix p = fair_extend(lts, rooted(lts, prefix_text), ts, steps);
            std::cout << prefix_str(lts, p) << "\n";
            for (TransIdx t : p.steps)
                std::cout << lts.transitions[t].id << " " << lts.transitions[t].label.str() << "\n";
            return 0;
        }
        if (*hier) {
            auto rep = hierarchy_check(lts, parse_assumption(stronger, lts, base), parse_assumption(weaker, lts, base),
                                       cfg.bounds);
            if (rep.skipped) {
                std::cout << rep.stronger << " => " << rep.weaker << ": skipped (" << rep.skip_reason << ")\n";
                return 0;
            }
            std::cout << rep.stronger << " => " << rep.weaker << ": " << rep.lassos_checked << " lassos, "
                      << rep.violations.size() << " violations\n";
            for (const auto& l : rep.violations)
                std::cout << "  " << lasso_str(lts, l) << "\n";
            return rep.violations.empty() ? 0 : 1;
        }
        if (*ltl) {
            std::vector<TaskSet> sets;
            FormulaPtr f;
            if (formula.rfind("weak:", 0) == 0 || formula.rfind("strong:", 0) == 0) {
                bool strong = formula[0] == 's';
                sets.push_back(resolve_taskset(formula.substr(strong ? 7 : 5), lts, base));
                f = strong ? strong_fairness_formula(sets.back()) : weak_fairness_formula(sets.back());
            } else {
                f = parse_ltl(formula);
            }
            for (const auto& n : extra_tasks)
                sets.push_back(resolve_taskset(n, lts, base));
            ConvertedLTS conv = ltl_convert(lts);
            LtlContext ctx{&lts, &conv, {}};
            for (const auto& s : sets)
                ctx.tasksets.push_back(&s);
            Lasso l = resolve_lasso(lts, lasso_text);
            bool holds = eval_ltl(ctx, convert_lasso(lts, conv, l), f);
            std::cout << ltl_str(f) << "\n" << (holds ? "true" : "false") << "\n";
            return holds ? 0 : 1;
        }
        if (*sim) {
            std::map<TransIdx, double> w;
            if (!weights.empty())
                w = load_weights(lts, read_file(weights));
            auto p = simulate(lts, goal_states(lts, goal), w, cfg.horizon, cfg.runs, cfg.seed);
            std::cout << estimate_json(p);
            return 0;
        }
        if (*validate) {
            auto rep = validate_side_conditions(lts);
            for (const auto& c : rep.results) {
                std::cout << c.name << " " << (!c.checked ? "n/a" : c.passed ? "pass" : "FAIL");
                if (!c.counterexample.empty())
                    std::cout << " " << c.counterexample;
                if (!c.note.empty())
                    std::cout << " (" << c.note << ")";
                std::cout << "\n";
            }
            return rep.all_passed() ? 0 : 1;
        }
        if (*agef_cmd) {
            std::vector<std::string> names;
            if (all_goals)
                for (const auto& [n, g] : lts.goals)
                    names.push_back(n);
            else if (!goal.empty())
                names.push_back(goal);
            else
                throw UsageError("agef needs --goal or --all");
            bool all = true;
            for (const auto& n : names) {
                bool h = agef(lts, goal_states(lts, n));
                all &= h;
                std::cout << n << ": " << (h ? "yes" : "no") << "\n";
            }
            return all ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "fairlab: " << e.what() << "\n";
        return 2;
    } catch (const FragmentError& e) {
        for (const auto& d : e.diagnostics)
            std::cerr << input << ":" << d.str() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << input << ":" << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fairlab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
