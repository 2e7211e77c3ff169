#include "fairlab/corpus.hpp"

#include "fairlab/ltl.hpp"
#include "fairlab/simulate.hpp"
#include "fairlab/tasks.hpp"

#include <json.hpp>

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fairlab
{

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw LtsError("cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

} // namespace

std::map<std::string, GoalSpec> load_goals(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw LtsError(std::string("goals: ") + e.what());
    }
    if (!j.is_object())
        throw LtsError("goals: expected an object of goal specifications");
    std::map<std::string, GoalSpec> out;
    for (const auto& [name, g] : j.items())
        out.emplace(name, parse_goal_spec(g.dump()));
    return out;
}

AugmentedLTS load_system(const fs::path& file, ExploreCaps caps, const std::map<std::string, GoalSpec>& goals)
{
    AugmentedLTS lts;
    const std::string text = read_file(file);
    if (file.extension() == ".ccs") {
        lts = explore(parse_ccs(text), caps).lts;
    } else {
        lts = load_lts(text);
    }
    for (const auto& [name, g] : goals)
        lts.goals[name] = g;
    // evaluate once so that bad goals fail at load time
    for (const auto& [name, g] : lts.goals)
        goal_states(lts, g);
    return lts;
}

TaskSet resolve_taskset(const std::string& text, const AugmentedLTS& lts, const fs::path& base)
{
    if (text.rfind("custom=", 0) == 0)
        return load_custom_tasks(lts, read_file(base / text.substr(7)));
    if (text.rfind("tasks=", 0) == 0) {
        auto it = lts.tasks.find(text.substr(6));
        if (it == lts.tasks.end())
            throw LtsError("no task set '" + text.substr(6) + "' in the system");
        return it->second;
    }
    return extract_tasks(lts, text);
}

Assumption parse_assumption(const std::string& text, const AugmentedLTS& lts, const fs::path& base)
{
    std::string body = text;
    bool reactive = false;
    const std::string suffix = ",reactive";
    if (body.size() > suffix.size() && body.compare(body.size() - suffix.size(), suffix.size(), suffix) == 0) {
        reactive = true;
        body.resize(body.size() - suffix.size());
    }
    static const std::map<std::string, AssumptionKind> plain{
        {"P", AssumptionKind::P},   {"just", AssumptionKind::Just}, {"SWI", AssumptionKind::SWI},
        {"Fu", AssumptionKind::Fu}, {"ST", AssumptionKind::ST},     {"Pr", AssumptionKind::Pr}};
    if (auto it = plain.find(body); it != plain.end())
        return make_assumption(it->second, reactive);
    if (body.size() > 2 && body[1] == ':') {
        AssumptionKind k;
        switch (body[0]) {
        case 'J':
            k = AssumptionKind::J;
            break;
        case 'W':
            k = AssumptionKind::W;
            break;
        case 'S':
            k = AssumptionKind::S;
            break;
        default:
            throw LtsError("unknown assumption '" + text + "'");
        }
        return make_assumption(k, resolve_taskset(body.substr(2), lts, base), reactive);
    }
    throw LtsError("unknown assumption '" + text + "'");
}

namespace
{

bool step_matches(const AugmentedLTS& lts, TransIdx t, const std::string& tok)
{
    const auto& tr = lts.transitions[t];
    std::size_t brace = tok.find('{');
    if (brace == std::string::npos)
        return tr.label.str() == tok;
    if (tok.back() != '}')
        throw LtsError("bad step '" + tok + "'");
    if (tr.label.str() != tok.substr(0, brace))
        return false;
    std::vector<std::string> want;
    std::string inner = tok.substr(brace + 1, tok.size() - brace - 2);
    std::stringstream ss(inner);
    for (std::string part; std::getline(ss, part, ',');)
        want.push_back(part);
    std::sort(want.begin(), want.end());
    return tr.instr && *tr.instr == want;
}

} // namespace

PathPrefix resolve_path(const AugmentedLTS& lts, StateIdx start, const std::string& steps)
{
    PathPrefix p{start, {}};
    StateIdx cur = start;
    for (const auto& tok : split_ws(steps)) {
        std::vector<TransIdx> hits;
        for (TransIdx t : lts.out[cur])
            if (lts.transitions[t].id == tok)
                hits = {t};
        if (hits.empty())
            for (TransIdx t : lts.out[cur])
                if (step_matches(lts, t, tok))
                    hits.push_back(t);
        if (hits.size() != 1)
            throw LtsError("step '" + tok + "' matches " + std::to_string(hits.size()) + " transitions from " +
                           lts.states[cur].id);
        p.steps.push_back(hits[0]);
        cur = lts.transitions[hits[0]].target;
    }
    return p;
}

Lasso resolve_lasso(const AugmentedLTS& lts, const std::string& text)
{
    std::size_t semi = text.find(';');
    if (semi == std::string::npos)
        throw LtsError("lasso needs 'STEM ; CYCLE'");
    Lasso l;
    l.stem = resolve_path(lts, lts.initial.at(0), text.substr(0, semi));
    l.cycle = resolve_path(lts, last_state(lts, l.stem), text.substr(semi + 1)).steps;
    check_lasso(lts, l);
    return l;
}

Lasso canonical_lasso(const AugmentedLTS& lts, const Lasso& l)
{
    check_lasso(lts, l);
    Lasso c = l;
    const std::size_t m = c.cycle.size();
    for (std::size_t p = 1; p < m; ++p) {
        if (m % p != 0)
            continue;
        bool periodic = true;
        for (std::size_t i = 0; i < m && periodic; ++i)
            periodic = c.cycle[i] == c.cycle[(i + p) % m];
        if (periodic) {
            c.cycle.resize(p);
            break;
        }
    }
    while (!c.stem.steps.empty() && c.stem.steps.back() == c.cycle.back()) {
        std::rotate(c.cycle.rbegin(), c.cycle.rbegin() + 1, c.cycle.rend());
        c.stem.steps.pop_back();
    }
    return c;
}

bool CorpusReport::all_passed() const { return failures() == 0; }

std::size_t CorpusReport::failures() const
{
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CorpusCheck& c) { return !c.passed; }));
}

const std::vector<std::string>& matrix_columns()
{
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"P", "just"};
        for (const char* k : {"J", "W", "S"})
            for (const char* n : {"A", "T", "I", "Z", "C", "G"})
                c.push_back(std::string(k) + ":" + n);
        for (const char* x : {"SWI", "Fu", "ST", "Pr"})
            c.emplace_back(x);
        return c;
    }();
    return cols;
}

std::vector<CorpusEntry> load_corpus_entries(const fs::path& dir)
{
    json j;
    try {
        j = json::parse(read_file(dir / "corpus.json"));
    } catch (const json::exception& e) {
        throw LtsError(std::string("corpus.json: ") + e.what());
    }
    std::vector<CorpusEntry> out;
    for (const auto& e : j.at("entries")) {
        CorpusEntry ce;
        ce.id = e.at("id").get<std::string>();
        ce.source = dir / e.at("source").get<std::string>();
        ce.note = e.value("note", "");
        if (e.contains("caps")) {
            ce.caps.state_cap = e.at("caps").value("state_cap", ce.caps.state_cap);
            ce.caps.depth_cap = e.at("caps").value("depth_cap", ce.caps.depth_cap);
        }
        if (e.contains("goals"))
            ce.goals = load_goals(e.at("goals").dump());
        if (e.contains("lassos"))
            for (const auto& [name, text] : e.at("lassos").items())
                ce.lassos[name] = text.get<std::string>();
        out.push_back(std::move(ce));
    }
    return out;
}

AugmentedLTS load_entry_system(const CorpusEntry& e) { return load_system(e.source, e.caps, e.goals); }

namespace
{

char verdict_char(Holds h) { return h == Holds::yes ? 'y' : h == Holds::no ? 'n' : '?'; }

std::string fmt_double(double d)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    s << d;
    return s.str();
}

class EntryRunner
{
public:
    EntryRunner(const CorpusEntry& e, const json& spec, CorpusReport& rep)
        : entry_(e), spec_(spec), rep_(rep), base_(e.source.parent_path())
    {
    }

    void run(std::ostringstream& matrix)
    {
        try {
            lts_ = load_entry_system(entry_);
        } catch (const std::exception& ex) {
            add("load", entry_.source.filename().string(), "loads", std::string("error: ") + ex.what(), false);
            return;
        }
        print_matrix(matrix);
        if (!spec_.contains("expect"))
            return;
        for (const auto& x : spec_.at("expect")) {
            const std::string kind = x.at("kind").get<std::string>();
            try {
                check(kind, x);
            } catch (const std::exception& ex) {
                add(kind, x.dump(), "evaluates", std::string("error: ") + ex.what(), false, x.value("note", ""));
            }
        }
    }

private:
    const CorpusEntry& entry_;
    const json& spec_;
    CorpusReport& rep_;
    fs::path base_;
    AugmentedLTS lts_;
    std::map<std::pair<std::string, std::string>, Holds> cells_;

    void add(const std::string& kind, const std::string& what, const std::string& expected, const std::string& actual,
             bool ok, const std::string& note = "")
    {
        rep_.checks.push_back({entry_.id, kind, what, expected, actual, ok, note});
    }

    Holds cell(const std::string& goal, const std::string& col)
    {
        auto key = std::make_pair(goal, col);
        auto it = cells_.find(key);
        if (it != cells_.end())
            return it->second;
        Holds h = liveness(lts_, goal, parse_assumption(col, lts_, base_)).holds;
        cells_.emplace(key, h);
        return h;
    }

    void print_matrix(std::ostringstream& out)
    {
        for (const auto& [goal, g] : lts_.goals) {
            std::string row = entry_.id + "/" + goal;
            out << row << std::string(row.size() < 34 ? 34 - row.size() : 1, ' ');
            for (const auto& col : matrix_columns()) {
                char c;
                try {
                    c = verdict_char(cell(goal, col));
                } catch (const LtsError&) {
                    c = '-';
                }
                std::string s(1, c);
                out << s << std::string(col.size() + 1 > s.size() ? col.size() + 1 - s.size() : 1, ' ');
            }
            out << "\n";
        }
    }

    std::vector<bool> goal(const json& x) { return goal_states(lts_, x.at("goal").get<std::string>()); }

    void check(const std::string& kind, const json& x)
    {
        const std::string note = x.value("note", "");
        if (kind == "verdict") {
            const std::string g = x.at("goal").get<std::string>();
            const std::string as = x.at("assume").get<std::string>();
            Holds h = liveness(lts_, g, parse_assumption(as, lts_, base_)).holds;
            const std::string want = x.at("holds").get<std::string>();
            add(kind, g + " under " + as, want, holds_str(h), holds_str(h) == want, note);
        } else if (kind == "lasso") {
            const std::string name = x.at("lasso").get<std::string>();
            const std::string as = x.at("assume").get<std::string>();
            Lasso l = resolve_lasso(lts_, entry_.lassos.at(name));
            bool fair = classify_lasso(lts_, l, parse_assumption(as, lts_, base_));
            bool want = x.at("fair").get<bool>();
            add(kind, name + " under " + as, want ? "fair" : "unfair", fair ? "fair" : "unfair", fair == want, note);
        } else if (kind == "separation") {
            const std::string name = x.at("lasso").get<std::string>();
            const std::string f = x.at("fair_under").get<std::string>();
            const std::string u = x.at("unfair_under").get<std::string>();
            LassoBounds b;
            b.stem = x.value("stem", b.stem);
            b.cycle = x.value("cycle", b.cycle);
            Lasso want = canonical_lasso(lts_, resolve_lasso(lts_, entry_.lassos.at(name)));
            auto rep = hierarchy_check(lts_, parse_assumption(f, lts_, base_), parse_assumption(u, lts_, base_), b);
            bool found = false;
            for (const auto& v : rep.violations) {
                Lasso c = canonical_lasso(lts_, v);
                found |= c.stem.start == want.stem.start && c.stem.steps == want.stem.steps && c.cycle == want.cycle;
            }
            add(kind, name + " is " + f + "-fair but not " + u + "-fair", "found",
                found ? "found" : "not found (" + std::to_string(rep.violations.size()) + " other violations)",
                found, note);
        } else if (kind == "prefix") {
            PathPrefix p = resolve_path(lts_, lts_.initial.at(0), x.at("path").get<std::string>());
            TaskSet ts = resolve_taskset(x.at("taskset").get<std::string>(), lts_, base_);
            const std::string which = x.at("task").get<std::string>();
            bool ok = true;
            std::string actual;
            std::size_t n = 0;
            for (const auto& t : ts.tasks) {
                if (which != "*" && t.name != which)
                    continue;
                ++n;
                auto c = prefix_certificate(lts_, p, t);
                if (x.contains("enabled_everywhere") && c.enabled_everywhere != x.at("enabled_everywhere").get<bool>()) {
                    ok = false;
                    actual += t.name + " enabledEverywhere=" + (c.enabled_everywhere ? "true " : "false ");
                }
                if (x.contains("occurs") && c.occurs != x.at("occurs").get<bool>()) {
                    ok = false;
                    actual += t.name + " occurs=" + (c.occurs ? "true " : "false ");
                }
            }
            if (n == 0) {
                ok = false;
                actual = "no such task";
            }
            std::string want;
            if (x.contains("enabled_everywhere"))
                want += std::string("enabledEverywhere=") + (x.at("enabled_everywhere").get<bool>() ? "true" : "false");
            if (x.contains("occurs"))
                want += std::string(want.empty() ? "" : " ") + "occurs=" + (x.at("occurs").get<bool>() ? "true" : "false");
            add(kind, "task " + which + " over " + std::to_string(p.steps.size()) + " steps", want,
                ok ? want : actual, ok, note);
        } else if (kind == "loopfree") {
            std::size_t len = x.at("length").get<std::size_t>();
            auto w = loopfree_witness(lts_, goal(x), len);
            bool want = x.at("present").get<bool>();
            add(kind, "goal " + x.at("goal").get<std::string>() + ", length " + std::to_string(len),
                want ? "present" : "absent", w ? "present" : "absent", w.has_value() == want, note);
        } else if (kind == "agef") {
            bool reactive = x.value("reactive", false);
            bool h = agef(lts_, goal(x), reactive);
            bool want = x.at("holds").get<bool>();
            add(kind, "goal " + x.at("goal").get<std::string>() + (reactive ? " (reactive)" : ""),
                want ? "yes" : "no", h ? "yes" : "no", h == want, note);
        } else if (kind == "states") {
            auto g = goal(x);
            std::size_t n = static_cast<std::size_t>(std::count(g.begin(), g.end(), true));
            std::size_t want = x.at("count").get<std::size_t>();
            add(kind, "goal " + x.at("goal").get<std::string>(), std::to_string(want), std::to_string(n), n == want,
                note);
        } else if (kind == "size") {
            std::string want, got;
            if (x.contains("states")) {
                want += "states=" + std::to_string(x.at("states").get<std::size_t>()) + " ";
                got += "states=" + std::to_string(lts_.states.size()) + " ";
            }
            if (x.contains("transitions")) {
                want += "transitions=" + std::to_string(x.at("transitions").get<std::size_t>()) + " ";
                got += "transitions=" + std::to_string(lts_.transitions.size()) + " ";
            }
            if (x.contains("truncated")) {
                want += std::string("truncated=") + (x.at("truncated").get<bool>() ? "true" : "false");
                got += std::string("truncated=") + (lts_.truncated ? "true" : "false");
            }
            add(kind, "explored system", want, got, want == got, note);
        } else if (kind == "simulate") {
            std::map<TransIdx, double> w;
            if (x.contains("weights"))
                w = load_weights(lts_, read_file(base_ / x.at("weights").get<std::string>()));
            auto p = simulate(lts_, goal(x), w, x.at("horizon").get<std::size_t>(), x.at("runs").get<std::size_t>(),
                              x.value("seed", k_default_seed));
            bool ok = true;
            std::string want;
            if (x.contains("at_least")) {
                ok &= p.estimate >= x.at("at_least").get<double>();
                want = ">= " + fmt_double(x.at("at_least").get<double>());
            }
            if (x.contains("at_most")) {
                ok &= p.estimate <= x.at("at_most").get<double>();
                want = "<= " + fmt_double(x.at("at_most").get<double>());
            }
            add(kind, "goal " + x.at("goal").get<std::string>() + " within " + std::to_string(p.horizon) + " steps",
                want, fmt_double(p.estimate), ok, note);
        } else if (kind == "extend") {
            TaskSet ts = resolve_taskset(x.at("taskset").get<std::string>(), lts_, base_);
            PathPrefix start{lts_.initial.at(0), {}};
            if (x.contains("from"))
                start = resolve_path(lts_, start.start, x.at("from").get<std::string>());
            PathPrefix p = fair_extend(lts_, start, ts, x.at("steps").get<std::size_t>());
            std::string labels;
            for (TransIdx t : p.steps)
                labels += (labels.empty() ? "" : " ") + lts_.transitions[t].label.str();
            if (x.contains("labels")) {
                const std::string want = x.at("labels").get<std::string>();
                add(kind, "fair extension by " + ts.notion, want, labels, labels == want, note);
            }
            if (x.contains("contains")) {
                const std::string tok = x.at("contains").get<std::string>();
                bool hit = std::any_of(p.steps.begin(), p.steps.end(),
                                       [&](TransIdx t) { return step_matches(lts_, t, tok); });
                add(kind, "fair extension by " + ts.notion + " contains " + tok, "yes", hit ? "yes" : "no", hit, note);
            }
        } else if (kind == "finite") {
            const std::string as = x.at("assume").get<std::string>();
            PathPrefix p = resolve_path(lts_, lts_.initial.at(0), x.at("path").get<std::string>());
            bool fair = classify_finite(lts_, p, parse_assumption(as, lts_, base_));
            bool want = x.at("fair").get<bool>();
            add(kind, prefix_str(lts_, p) + " under " + as, want ? "fair" : "unfair", fair ? "fair" : "unfair",
                fair == want, note);
        } else if (kind == "ltl") {
            const std::string name = x.at("lasso").get<std::string>();
            const std::string text = x.at("formula").get<std::string>();
            std::vector<TaskSet> sets;
            FormulaPtr f;
            if (text.rfind("weak:", 0) == 0 || text.rfind("strong:", 0) == 0) {
                const bool strong = text[0] == 's';
                sets.push_back(resolve_taskset(text.substr(strong ? 7 : 5), lts_, base_));
                f = strong ? strong_fairness_formula(sets.back()) : weak_fairness_formula(sets.back());
            } else {
                f = parse_ltl(text);
            }
            if (x.contains("tasks"))
                for (const auto& n : x.at("tasks"))
                    sets.push_back(resolve_taskset(n.get<std::string>(), lts_, base_));
            ConvertedLTS conv = ltl_convert(lts_);
            LtlContext ctx{&lts_, &conv, {}};
            for (const auto& s : sets)
                ctx.tasksets.push_back(&s);
            Lasso l = resolve_lasso(lts_, entry_.lassos.at(name));
            bool holds = eval_ltl(ctx, convert_lasso(lts_, conv, l), f);
            bool want = x.at("holds").get<bool>();
            add(kind, text + " on " + name, want ? "true" : "false", holds ? "true" : "false", holds == want, note);
        } else if (kind == "validate") {
            auto rep = validate_side_conditions(lts_);
            std::string failed;
            for (const auto& c : rep.results)
                if (c.checked && !c.passed)
                    failed += c.name + " ";
            add(kind, "side conditions", "all pass", failed.empty() ? "all pass" : "failed: " + failed, failed.empty(),
                note);
        } else {
            throw LtsError("unknown expectation kind '" + kind + "'");
        }
    }
};

} // namespace

CorpusReport run_corpus(const fs::path& dir, const std::string& filter)
{
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "corpus.json"));
    } catch (const json::exception& e) {
        throw LtsError(std::string("corpus.json: ") + e.what());
    }
    auto entries = load_corpus_entries(dir);
    CorpusReport rep;
    std::ostringstream matrix;
    matrix << "entry/goal" << std::string(24, ' ');
    for (const auto& c : matrix_columns())
        matrix << c << " ";
    matrix << "\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!filter.empty() && fnmatch(filter.c_str(), e.id.c_str(), 0) != 0)
            continue;
        ++rep.entries;
        EntryRunner(e, manifest.at("entries").at(i), rep).run(matrix);
    }
    std::ostringstream text;
    text << matrix.str() << "\n";
    for (const auto& c : rep.checks) {
        text << (c.passed ? "PASS " : "FAIL ") << c.entry << " [" << c.kind << "] " << c.what << ": expected "
             << c.expected;
        if (!c.passed)
            text << ", got " << c.actual;
        if (!c.note.empty())
            text << "  -- " << c.note;
        text << "\n";
    }
    text << "\n" << rep.entries << " entries, " << rep.checks.size() << " checks, " << rep.failures() << " failed\n";
    rep.text = text.str();
    return rep;
}

} // namespace fairlab
