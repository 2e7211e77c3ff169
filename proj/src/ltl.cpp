#include "fairlab/ltl.hpp"

#include <algorithm>
#include <cctype>

namespace fairlab
{

ConvertedLTS ltl_convert(const AugmentedLTS& lts)
{
    ConvertedLTS c;
    for (StateIdx s : lts.initial) {
        c.initial.push_back(c.states.size());
        c.states.push_back({s, std::nullopt});
    }
    c.first_transition_state = c.states.size();
    for (TransIdx t = 0; t < lts.transitions.size(); ++t)
        c.states.push_back({lts.transitions[t].target, t});
    for (std::size_t i = 0; i < c.initial.size(); ++i)
        for (TransIdx t : lts.out[lts.initial[i]])
            c.transitions.push_back({c.initial[i], c.first_transition_state + t});
    for (TransIdx t = 0; t < lts.transitions.size(); ++t)
        for (TransIdx u : lts.out[lts.transitions[t].target])
            c.transitions.push_back({c.first_transition_state + t, c.first_transition_state + u});
    return c;
}

FormulaPtr ltl_prop(Formula::Op op, std::string name)
{
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->name = std::move(name);
    return f;
}

FormulaPtr ltl_unary(Formula::Op op, FormulaPtr x)
{
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->left = std::move(x);
    return f;
}

FormulaPtr ltl_binary(Formula::Op op, FormulaPtr l, FormulaPtr r)
{
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}

FormulaPtr ltl_true() { return ltl_prop(Formula::Op::truth, ""); }

namespace
{

class LtlParser
{
public:
    explicit LtlParser(const std::string& s) : s_(s) {}

    FormulaPtr parse()
    {
        FormulaPtr f = implication();
        skip();
        if (i_ != s_.size())
            fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return f;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw LtsError("formula, offset " + std::to_string(i_) + ": " + why);
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool accept(const std::string& tok)
    {
        skip();
        if (s_.compare(i_, tok.size(), tok) == 0) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    bool keyword(const std::string& w)
    {
        skip();
        if (s_.compare(i_, w.size(), w) != 0)
            return false;
        std::size_t end = i_ + w.size();
        if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
            return false;
        i_ = end;
        return true;
    }

    FormulaPtr implication()
    {
        FormulaPtr l = disjunction();
        if (accept("->"))
            return ltl_binary(Formula::Op::implies, l, implication());
        return l;
    }

    FormulaPtr disjunction()
    {
        FormulaPtr l = conjunction();
        while (accept("|"))
            l = ltl_binary(Formula::Op::disj, l, conjunction());
        return l;
    }

    FormulaPtr conjunction()
    {
        FormulaPtr l = unary();
        while (accept("&"))
            l = ltl_binary(Formula::Op::conj, l, unary());
        return l;
    }

    FormulaPtr unary()
    {
        if (accept("!"))
            return ltl_unary(Formula::Op::neg, unary());
        if (keyword("F"))
            return ltl_unary(Formula::Op::eventually, unary());
        if (keyword("G"))
            return ltl_unary(Formula::Op::always, unary());
        if (keyword("X"))
            return ltl_unary(Formula::Op::next, unary());
        if (accept("(")) {
            FormulaPtr f = implication();
            if (!accept(")"))
                fail("expected ')'");
            return f;
        }
        if (keyword("true"))
            return ltl_true();
        if (keyword("false"))
            return ltl_prop(Formula::Op::falsity, "");
        for (auto [word, op] : {std::pair{"enabled", Formula::Op::enabled}, std::pair{"occurs", Formula::Op::occurs},
                                std::pair{"goal", Formula::Op::goal}}) {
            if (keyword(word)) {
                if (!accept("("))
                    fail("expected '(' after " + std::string(word));
                std::size_t close = s_.find(')', i_);
                if (close == std::string::npos)
                    fail("unterminated proposition");
                std::string name = s_.substr(i_, close - i_);
                i_ = close + 1;
                return ltl_prop(op, name);
            }
        }
        fail("expected a formula");
    }
};

void str_rec(const FormulaPtr& f, std::string& out)
{
    using Op = Formula::Op;
    switch (f->op) {
    case Op::truth:
        out += "true";
        return;
    case Op::falsity:
        out += "false";
        return;
    case Op::enabled:
        out += "enabled(" + f->name + ")";
        return;
    case Op::occurs:
        out += "occurs(" + f->name + ")";
        return;
    case Op::goal:
        out += "goal(" + f->name + ")";
        return;
    case Op::neg:
        out += "!";
        str_rec(f->left, out);
        return;
    case Op::eventually:
    case Op::always:
    case Op::next:
        out += f->op == Op::eventually ? "F " : f->op == Op::always ? "G " : "X ";
        str_rec(f->left, out);
        return;
    default:
        out += "(";
        str_rec(f->left, out);
        out += f->op == Op::conj ? " & " : f->op == Op::disj ? " | " : " -> ";
        str_rec(f->right, out);
        out += ")";
    }
}

FormulaPtr conjunction_over(const TaskSet& ts, bool strong)
{
    using Op = Formula::Op;
    FormulaPtr all;
    for (const auto& t : ts.tasks) {
        FormulaPtr en = ltl_unary(Op::always, ltl_prop(Op::enabled, t.name));
        if (strong)
            en = ltl_unary(Op::always, ltl_unary(Op::eventually, ltl_prop(Op::enabled, t.name)));
        FormulaPtr one = ltl_unary(
            Op::always, ltl_binary(Op::implies, en, ltl_unary(Op::eventually, ltl_prop(Op::occurs, t.name))));
        all = all ? ltl_binary(Op::conj, all, one) : one;
    }
    return all ? all : ltl_true();
}

} // namespace

FormulaPtr parse_ltl(const std::string& text) { return LtlParser(text).parse(); }

std::string ltl_str(const FormulaPtr& f)
{
    std::string out;
    str_rec(f, out);
    return out;
}

FormulaPtr weak_fairness_formula(const TaskSet& ts) { return conjunction_over(ts, false); }
FormulaPtr strong_fairness_formula(const TaskSet& ts) { return conjunction_over(ts, true); }

ConvertedLasso convert_lasso(const AugmentedLTS& lts, const ConvertedLTS& c, const Lasso& l)
{
    check_lasso(lts, l);
    auto init = std::find(lts.initial.begin(), lts.initial.end(), l.stem.start);
    if (init == lts.initial.end())
        throw LtsError("lasso does not start in an initial state");
    ConvertedLasso out;
    out.stem.push_back(c.initial[static_cast<std::size_t>(init - lts.initial.begin())]);
    for (TransIdx t : l.stem.steps)
        out.stem.push_back(c.first_transition_state + t);
    for (TransIdx t : l.cycle)
        out.cycle.push_back(c.first_transition_state + t);
    return out;
}

namespace
{

class Evaluator
{
public:
    Evaluator(const LtlContext& ctx, const ConvertedLasso& l) : ctx_(ctx)
    {
        seq_ = l.stem;
        seq_.insert(seq_.end(), l.cycle.begin(), l.cycle.end());
        loop_ = l.stem.size();
    }

    std::vector<bool> eval(const FormulaPtr& f)
    {
        using Op = Formula::Op;
        const std::size_t n = seq_.size();
        std::vector<bool> v(n, false);
        switch (f->op) {
        case Op::truth:
            v.assign(n, true);
            break;
        case Op::falsity:
            break;
        case Op::enabled: {
            const Task& t = task(f->name);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = enabled(*ctx_.lts, t, state(i).original);
            break;
        }
        case Op::occurs: {
            const Task& t = task(f->name);
            for (std::size_t i = 0; i < n; ++i) {
                auto e = state(i).entered_by;
                v[i] = e && std::binary_search(t.members.begin(), t.members.end(), *e);
            }
            break;
        }
        case Op::goal: {
            auto g = goal_states(*ctx_.lts, f->name);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = g[state(i).original];
            break;
        }
        case Op::neg: {
            auto a = eval(f->left);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = !a[i];
            break;
        }
        case Op::conj:
        case Op::disj:
        case Op::implies: {
            auto a = eval(f->left), b = eval(f->right);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = f->op == Op::conj ? a[i] && b[i] : f->op == Op::disj ? a[i] || b[i] : !a[i] || b[i];
            break;
        }
        case Op::next: {
            auto a = eval(f->left);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = a[i + 1 < n ? i + 1 : loop_];
            break;
        }
        case Op::eventually:
        case Op::always: {
            auto a = eval(f->left);
            const bool ev = f->op == Op::eventually;
            // On the cycle every position sees every cycle position.
            bool cyc = !ev;
            for (std::size_t i = loop_; i < n; ++i)
                cyc = ev ? cyc || a[i] : cyc && a[i];
            for (std::size_t i = loop_; i < n; ++i)
                v[i] = cyc;
            bool later = cyc;
            for (std::size_t i = loop_; i-- > 0;) {
                later = ev ? a[i] || later : a[i] && later;
                v[i] = later;
            }
            break;
        }
        }
        return v;
    }

private:
    const LtlContext& ctx_;
    std::vector<std::size_t> seq_;
    std::size_t loop_ = 0;

    const ConvertedLTS::CState& state(std::size_t i) const { return ctx_.converted->states[seq_[i]]; }

    const Task& task(const std::string& name) const
    {
        for (const TaskSet* ts : ctx_.tasksets)
            for (const auto& t : ts->tasks)
                if (t.name == name)
                    return t;
        throw LtsError("unknown task '" + name + "' in formula");
    }
};

} // namespace

bool eval_ltl(const LtlContext& ctx, const ConvertedLasso& l, const FormulaPtr& f)
{
    if (!ctx.lts || !ctx.converted)
        throw LtsError("LTL evaluation needs the system and its conversion");
    if (l.cycle.empty())
        throw LtsError("lasso cycle is empty");
    return Evaluator(ctx, l).eval(f)[0];
}

} // namespace fairlab
