#include "fairlab/corpus.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

using namespace fairlab;
using namespace fairlab::testing;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    std::string cmd = std::string(FAIRLAB_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string corpus(const std::string& f)
{
    return (corpus_dir() / f).string();
}

fs::path scratch(const std::string& name)
{
    auto d = fs::temp_directory_path() / ("fairlab-test-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(corpus_runner, everything_passes)
{
    auto rep = run_corpus(corpus_dir());
    EXPECT_TRUE(rep.all_passed()) << rep.text;
    EXPECT_GE(rep.entries, 25u);
    EXPECT_EQ(rep.failures(), 0u);
}

TEST(corpus_runner, filter)
{
    auto rep = run_corpus(corpus_dir(), "robustness-*");
    EXPECT_EQ(rep.entries, 2u);
    for (const auto& c : rep.checks)
        EXPECT_EQ(c.entry.rfind("robustness-", 0), 0u);
}

TEST(corpus_runner, corrupted_expectation_fails)
{
    auto d = scratch("corrupt");
    for (const auto& e : fs::directory_iterator(corpus_dir()))
        fs::copy(e.path(), d / e.path().filename());
    auto j = nlohmann::json::parse(std::ifstream(d / "corpus.json"));
    for (auto& e : j["entries"])
        if (e["id"] == "mutex")
            for (auto& x : e["expect"])
                if (x["kind"] == "verdict" && x["assume"] == "W:tasks=LM")
                    x["holds"] = "yes";
    std::ofstream(d / "corpus.json") << j.dump(2);
    auto rep = run_corpus(d, "mutex");
    EXPECT_EQ(rep.failures(), 1u);
    EXPECT_NE(rep.text.find("FAIL mutex [verdict]"), std::string::npos);
    auto r = run("corpus --dir " + d.string() + " --filter mutex");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("expected yes, got no"), std::string::npos);
    fs::remove_all(d);
}

TEST(corpus_runner, deterministic)
{
    EXPECT_EQ(run_corpus(corpus_dir()).text, run_corpus(corpus_dir()).text);
}

TEST(step_tokens, resolve)
{
    auto lts = corpus_system("sync-pair.ccs");
    auto p = resolve_path(lts, 0, "a 'a tau{a@1,a~@1} t0");
    EXPECT_EQ(p.steps.size(), 4u);
    EXPECT_THROW(resolve_path(lts, 0, "b"), std::exception);
    auto chain = corpus_system("phone.ccs");
    EXPECT_NO_THROW(resolve_lasso(chain, "; a"));
    EXPECT_THROW(resolve_lasso(chain, "a"), std::exception);
}

TEST(canonical_lasso, same_path_same_form)
{
    auto lts = corpus_system("loop-and-cycle.ccs");
    auto a = canonical_lasso(lts, resolve_lasso(lts, "; a b c"));
    auto b = canonical_lasso(lts, resolve_lasso(lts, "a ; b c a b c a"));
    EXPECT_EQ(a.stem.steps, b.stem.steps);
    EXPECT_EQ(a.cycle, b.cycle);
}

TEST(cli, ccs2lts)
{
    auto r = run("ccs2lts " + corpus("lone-a.ccs"));
    ASSERT_EQ(r.code, 0);
    auto lts = load_lts(r.out);
    EXPECT_EQ(lts.states.size(), 2u);
    EXPECT_EQ(lts.transitions.size(), 3u);

    auto d = scratch("ccs2lts");
    std::ofstream(d / "bad.ccs") << "a.(b";
    EXPECT_EQ(run("ccs2lts " + (d / "bad.ccs").string()).code, 1);
    std::ofstream(d / "unguarded.ccs") << "X where X = X + a.0";
    EXPECT_EQ(run("ccs2lts " + (d / "unguarded.ccs").string()).code, 1);
    EXPECT_EQ(run("ccs2lts " + (d / "missing.ccs").string()).code, 2);
    EXPECT_EQ(run("ccs2lts").code, 2);

    auto t = run("ccs2lts --state-cap 64 " + corpus("relabel-chain.ccs") + " -o " + (d / "out.json").string());
    EXPECT_EQ(t.code, 0);
    auto chain = load_lts(std::string(std::istreambuf_iterator<char>(std::ifstream(d / "out.json").rdbuf()), {}));
    EXPECT_TRUE(chain.truncated);
    EXPECT_EQ(chain.states.size(), 64u);
    fs::remove_all(d);
}

TEST(cli, liveness)
{
    auto m = run("liveness " + corpus("mutex.json") + " --goal critical --assume S:custom=" + corpus("mutex-tasks.json"));
    EXPECT_EQ(m.code, 0);
    EXPECT_EQ(nlohmann::json::parse(m.out)["holds"], "yes");

    auto p = run("liveness " + corpus("phone.ccs") + " --goals " + corpus("phone-goals.json") +
                 " --goal connected --assume just");
    EXPECT_EQ(p.code, 1);
    auto j = nlohmann::json::parse(p.out);
    EXPECT_EQ(j["holds"], "no");
    EXPECT_EQ(j["witness"]["kind"], "lasso");

    auto g2 = run("liveness " + corpus("clerk.ccs") + " --goals " + corpus("clerk-goals.json") +
                  " --goal G2 --assume SWI");
    EXPECT_EQ(g2.code, 0);
    auto g = run("liveness " + corpus("clerk.ccs") + " --goals " + corpus("clerk-goals.json") +
                 " --goal G --assume SWI");
    EXPECT_EQ(g.code, 1);
    EXPECT_EQ(run("liveness " + corpus("mutex.json") + " --goal nope --assume P").code, 1);
}

TEST(cli, other_commands)
{
    EXPECT_EQ(run("tasks " + corpus("lone-a.ccs") + " --notion I").code, 0);
    EXPECT_EQ(run("classify " + corpus("mutex.json") + " --assume W:tasks=LM --lasso '; m1 m2 m3'").code, 0);
    EXPECT_EQ(run("classify " + corpus("mutex.json") + " --assume S:tasks=LM --lasso '; m1 m2 m3'").code, 1);
    EXPECT_EQ(run("classify " + corpus("progress-chain.json") + " --assume P --prefix 't u'").code, 0);
    auto e = run("extend " + corpus("mutex.json") + " --tasks tasks=LM --steps 6");
    EXPECT_EQ(e.code, 0);
    EXPECT_NE(e.out.find("l1"), std::string::npos);
    EXPECT_EQ(run("hierarchy " + corpus("clerk.ccs") + " --stronger S:I --weaker W:I").code, 0);
    EXPECT_EQ(run("hierarchy " + corpus("loop-and-cycle.ccs") + " --stronger S:A --weaker S:T").code, 1);
    EXPECT_EQ(run("ltl " + corpus("mutex.json") + " --formula weak:tasks=LM --lasso '; m1 m2 m3'").code, 0);
    EXPECT_EQ(run("validate " + corpus("clerk.ccs")).code, 0);
    EXPECT_EQ(run("agef " + corpus("pr-trap.json") + " --goal reached").code, 1);
    auto s1 = run("simulate " + corpus("phone.ccs") + " --goals " + corpus("phone-goals.json") +
                  " --goal connected --runs 200 --seed 5");
    auto s2 = run("simulate " + corpus("phone.ccs") + " --goals " + corpus("phone-goals.json") +
                  " --goal connected --runs 200 --seed 5");
    EXPECT_EQ(s1.code, 0);
    EXPECT_EQ(s1.out, s2.out);
    EXPECT_EQ(run("nonsense").code, 2);
}

TEST(cli, corpus_output_is_stable)
{
    auto a = run("corpus --dir " + corpus_dir().string());
    auto b = run("corpus --dir " + corpus_dir().string());
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}
