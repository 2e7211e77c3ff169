#include "fairlab/verify.hpp"
#include "test_util.hpp"

#include <random>

#include <gtest/gtest.h>

using namespace fairlab;
using namespace fairlab::testing;

namespace
{

Holds holds(const AugmentedLTS& lts, const std::vector<bool>& goal, const std::string& a)
{
    return liveness(lts, goal, "g", assume(lts, a)).holds;
}

std::vector<bool> all_states(const AugmentedLTS& lts)
{
    return std::vector<bool>(lts.states.size(), true);
}

} // namespace

TEST(agef, offset_cycles_diagonal)
{
    auto lts = corpus_system("offset-cycles.ccs");
    auto entries = load_corpus_entries(corpus_dir());
    auto it = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.id == "offset-cycles"; });
    ASSERT_NE(it, entries.end());
    EXPECT_TRUE(agef(lts, goal_states(lts, it->goals.at("diagonal"))));
    EXPECT_TRUE(agef(lts, all_states(lts)));
}

TEST(agef, phone_and_traps)
{
    auto phone = corpus_system("phone.ccs");
    auto g = goal_states(phone, component_goal("R", "0"));
    EXPECT_TRUE(agef(phone, g));
    EXPECT_EQ(holds(phone, g, "Fu"), Holds::yes);
    EXPECT_EQ(holds(phone, g, "just"), Holds::no);

    auto trap = corpus_system("pr-trap.json");
    EXPECT_FALSE(agef(trap, goal_states(trap, "reached")));
}

TEST(agef, reactive)
{
    auto lts = corpus_system("reactive-signal.ccs");
    auto g = goal_states(lts, state_goal("0"));
    EXPECT_TRUE(agef(lts, g));
    EXPECT_FALSE(agef(lts, g, true));
}

TEST(liveness, mutex)
{
    auto lts = corpus_system("mutex.json");
    auto g = goal_states(lts, "critical");
    EXPECT_EQ(holds(lts, g, "S:custom=mutex-tasks.json"), Holds::yes);
    auto v = liveness(lts, g, "critical", assume(lts, "W:custom=mutex-tasks.json"));
    ASSERT_EQ(v.holds, Holds::no);
    ASSERT_TRUE(v.lasso);
    std::set<std::string> labels;
    for (TransIdx t : v.lasso->cycle)
        labels.insert(lts.transitions[t].label.str());
    EXPECT_EQ(labels, (std::set<std::string>{"m1", "m2", "m3"}));
}

TEST(liveness, lone_a)
{
    auto lts = corpus_system("lone-a.ccs");
    auto g = goal_states(lts, component_goal("L", "0"));
    EXPECT_EQ(holds(lts, g, "S:A"), Holds::no);
    for (const char* x : {"J", "W", "S"})
        for (const char* y : {"T", "I", "Z", "C", "G"})
            EXPECT_EQ(holds(lts, g, std::string(x) + ":" + y), Holds::yes) << x << y;
}

TEST(liveness, four_way_relay)
{
    auto lts = corpus_system("four-way-relay.ccs");
    auto g = goal_states(lts, component_goal("LLL", "0"));
    EXPECT_EQ(holds(lts, g, "W:C"), Holds::yes);
    for (const char* y : {"A", "T", "I", "Z", "G"})
        EXPECT_EQ(holds(lts, g, std::string("W:") + y), Holds::no) << y;
}

TEST(liveness, witnesses_are_fair_and_avoid_the_goal)
{
    const std::vector<std::pair<std::string, GoalSpec>> cases{
        {"clerk.ccs", component_goal("LR", "Y2s")},
        {"phone.ccs", component_goal("R", "0")},
        {"loop-or-exit.ccs", state_goal("0")},
        {"four-way-relay.ccs", component_goal("LLL", "0")},
        {"alternating-sync.ccs", component_goal("LL", "0")},
    };
    for (const auto& [f, spec] : cases) {
        auto lts = corpus_system(f);
        auto g = goal_states(lts, spec);
        std::vector<std::string> as{"P", "just", "SWI"};
        for (const char* x : {"J", "W", "S"})
            for (const char* y : {"A", "T", "I", "Z", "C", "G"})
                as.push_back(std::string(x) + ":" + y);
        for (const auto& a : as) {
            auto v = liveness(lts, g, "g", assume(lts, a));
            if (v.holds != Holds::no)
                continue;
            if (v.lasso) {
                EXPECT_TRUE(classify_lasso(lts, *v.lasso, v.assumption)) << f << " " << a;
                StateIdx s = v.lasso->stem.start;
                EXPECT_FALSE(g[s]);
                for (TransIdx t : v.lasso->stem.steps)
                    EXPECT_FALSE(g[lts.transitions[t].target]) << f << " " << a;
                for (TransIdx t : v.lasso->cycle)
                    EXPECT_FALSE(g[lts.transitions[t].target]) << f << " " << a;
            } else {
                ASSERT_TRUE(v.prefix) << f << " " << a;
                EXPECT_TRUE(classify_finite(lts, *v.prefix, v.assumption)) << f << " " << a;
            }
        }
    }
}

TEST(liveness, truncated_is_bounded_unknown)
{
    ExploreCaps caps;
    caps.state_cap = 16;
    auto lts = corpus_system("relabel-chain.ccs", caps);
    auto g = goal_states(lts, component_goal("L", "0"));
    EXPECT_EQ(holds(lts, g, "S:T"), Holds::bounded_unknown);
    EXPECT_EQ(holds(lts, g, "ST"), Holds::bounded_unknown);
}

TEST(liveness, st_matches_agef)
{
    for (const char* f : {"offset-cycles.ccs", "phone.ccs", "clerk.ccs", "pr-trap.json", "lone-a.ccs"}) {
        auto lts = corpus_system(f);
        for (const auto& [name, spec] : lts.goals) {
            auto g = goal_states(lts, spec);
            EXPECT_EQ(holds(lts, g, "ST") == Holds::yes, agef(lts, g)) << f << " " << name;
        }
    }
}

TEST(loopfree_witness, relabel_chain_and_pigeonhole)
{
    ExploreCaps caps;
    caps.state_cap = 128;
    auto chain = corpus_system("relabel-chain.ccs", caps);
    auto w = loopfree_witness(chain, goal_states(chain, component_goal("L", "0")), 50);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->steps.size(), 50u);
    for (TransIdx t : w->steps)
        EXPECT_EQ(chain.transitions[t].label.base, "b");

    auto lts = corpus_system("offset-cycles.ccs");
    std::vector<bool> none(lts.states.size(), false);
    EXPECT_FALSE(loopfree_witness(lts, none, lts.states.size() + 1));

    auto two = corpus_system("two-counter.json");
    EXPECT_TRUE(loopfree_witness(two, goal_states(two, "zero"), 30));
}

TEST(fair_extend, mutex_alternates)
{
    auto lts = corpus_system("mutex.json");
    const auto& ts = lts.tasks.at("LM");
    auto p = fair_extend(lts, PathPrefix{lts.initial[0], {}}, ts, 12);
    ASSERT_EQ(p.steps.size(), 12u);
    std::string labels;
    for (TransIdx t : p.steps)
        labels += lts.transitions[t].label.str() + " ";
    EXPECT_EQ(labels, "l1 l2 l3 m1 m2 m3 l1 l2 l3 m1 m2 m3 ");
    auto l = fair_lasso(lts, PathPrefix{lts.initial[0], {}}, ts, 1000);
    ASSERT_TRUE(l.lasso);
    EXPECT_TRUE(classify_lasso(lts, *l.lasso, make_assumption(AssumptionKind::S, ts)));
}

TEST(fair_lasso, closed_lassos_are_strongly_fair)
{
    auto lts = corpus_system("clerk.ccs");
    std::mt19937_64 rng(3);
    for (const char* y : {"A", "T", "I", "C"}) {
        auto ts = extract_tasks(lts, y);
        auto strong = make_assumption(AssumptionKind::S, ts);
        for (int i = 0; i < 30; ++i) {
            PathPrefix p{lts.initial[0], {}};
            StateIdx s = p.start;
            for (std::size_t k = rng() % 8; k > 0 && !lts.out[s].empty(); --k) {
                p.steps.push_back(lts.out[s][rng() % lts.out[s].size()]);
                s = lts.transitions[p.steps.back()].target;
            }
            auto r = fair_lasso(lts, p, ts, 100000);
            ASSERT_TRUE(r.lasso);
            EXPECT_TRUE(classify_lasso(lts, *r.lasso, strong)) << y << " " << prefix_str(lts, p);
        }
    }
}

TEST(fair_extend, deadlock_returns_prefix)
{
    auto lts = corpus_system("progress-chain.json");
    PathPrefix end{lts.initial[0], {lts.transition_index("t"), lts.transition_index("u")}};
    auto p = fair_extend(lts, end, extract_tasks(lts, "T"), 10);
    EXPECT_EQ(p.steps, end.steps);
}

TEST(fair_extend, lone_a_schedules_the_exit)
{
    auto lts = corpus_system("lone-a.ccs");
    auto p = fair_extend(lts, PathPrefix{lts.initial[0], {}}, extract_tasks(lts, "I"), 6);
    bool exit = false;
    for (TransIdx t : p.steps)
        exit |= lts.transitions[t].instr->front() == "a@1";
    EXPECT_TRUE(exit);
}

TEST(hierarchy_check, weak_below_strong)
{
    for (const char* f : {"clerk.ccs", "relay-with-exit.ccs", "sync-pair.ccs"}) {
        auto lts = corpus_system(f);
        auto r = hierarchy_check(lts, assume(lts, "S:I"), assume(lts, "W:I"));
        EXPECT_TRUE(r.violations.empty()) << f;
        EXPECT_GT(r.lassos_checked, 0u);
    }
}

TEST(hierarchy_check, si_below_sz)
{
    auto lts = corpus_system("loop-or-exit.ccs");
    EXPECT_TRUE(hierarchy_check(lts, assume(lts, "S:Z"), assume(lts, "S:I"), {}, {"(2)"}).violations.empty());
}

TEST(hierarchy_check, no_arrow_from_sa_to_st)
{
    auto lts = corpus_system("loop-and-cycle.ccs");
    auto r = hierarchy_check(lts, assume(lts, "S:A"), assume(lts, "S:T"));
    auto want = canonical_lasso(lts, resolve_lasso(lts, "; a b c"));
    bool found = false;
    for (const auto& v : r.violations) {
        auto c = canonical_lasso(lts, v);
        found |= c.cycle == want.cycle && c.stem.steps == want.stem.steps;
    }
    EXPECT_TRUE(found);
}

TEST(hierarchy_check, skipped_when_side_condition_fails)
{
    auto lts = load_lts(R"({"states":[{"id":"p"}],"transitions":[
        {"id":"t1","source":"p","target":"p","label":"a","instr":["a"],"comp":["L"],"blocking":true},
        {"id":"t2","source":"p","target":"p","label":"b","instr":["a","b"],"comp":["R"],"blocking":true}],
        "initial":["p"],"origin":"handwritten","truncated":false})");
    auto r = hierarchy_check(lts, make_assumption(AssumptionKind::S, extract_tasks(lts, "I")),
                             make_assumption(AssumptionKind::S, extract_tasks(lts, "C")), {}, {"(3)"});
    EXPECT_TRUE(r.skipped);
    EXPECT_FALSE(r.skip_reason.empty());
}

TEST(enumerate_lassos, respects_bounds)
{
    auto lts = corpus_system("robustness-weak.ccs");
    LassoBounds b;
    b.stem = 1;
    b.cycle = 3;
    auto ls = enumerate_lassos(lts, b);
    EXPECT_FALSE(ls.empty());
    for (const auto& l : ls) {
        EXPECT_LE(l.stem.steps.size(), 1u);
        EXPECT_GE(l.cycle.size(), 1u);
        EXPECT_LE(l.cycle.size(), 3u);
        EXPECT_NO_THROW(check_lasso(lts, l));
        std::set<TransIdx> u(l.cycle.begin(), l.cycle.end());
        EXPECT_EQ(u.size(), l.cycle.size());
    }
}
