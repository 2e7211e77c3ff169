#include "fairlab/semantics.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace fairlab
{

namespace
{

std::vector<std::string> merged(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<std::string> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void derive_into(const Expr& e, std::vector<Derivation>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                out.push_back({n.action, {n.name}, n.body});
            } else if constexpr (std::is_same_v<T, Choice>) {
                derive_into(n.left, out);
                derive_into(n.right, out);
            } else if constexpr (std::is_same_v<T, Par>) {
                std::vector<Derivation> l, r;
                derive_into(n.left, l);
                derive_into(n.right, r);
                for (const auto& d : l)
                    out.push_back({d.label, d.instr, make_par(d.target, n.right, e->span)});
                for (const auto& d : r)
                    out.push_back({d.label, d.instr, make_par(n.left, d.target, e->span)});
                for (const auto& dl : l) {
                    if (dl.label.is_tau())
                        continue;
                    for (const auto& dr : r)
                        if (dr.label == dl.label.complement())
                            out.push_back({ActionLabel::tau(), merged(dl.instr, dr.instr),
                                           make_par(dl.target, dr.target, e->span)});
                }
            } else if constexpr (std::is_same_v<T, Restrict>) {
                std::vector<Derivation> inner;
                derive_into(n.body, inner);
                for (auto& d : inner)
                    if (d.label.is_tau() || d.label.channel() != n.channel)
                        out.push_back({d.label, std::move(d.instr), make_restrict(d.target, n.channel, e->span)});
            } else if constexpr (std::is_same_v<T, Relabel>) {
                std::vector<Derivation> inner;
                derive_into(n.body, inner);
                for (auto& d : inner)
                    out.push_back({n.fn->apply(d.label), std::move(d.instr), make_relabel(d.target, n.fn, e->span)});
            } else if constexpr (std::is_same_v<T, Fix>) {
                derive_into(unfold(n), out);
            }
            // Nil: stuck. Var: open term, no transitions.
        },
        e->v);
}

} // namespace

std::vector<Derivation> derive(const Expr& state)
{
    std::vector<Derivation> out;
    derive_into(state, out);
    return out;
}

std::vector<StepResult> step(const ProcessSpec& spec, const Expr& state)
{
    std::vector<StepResult> out;
    for (auto& d : derive(state)) {
        StepResult r;
        r.label = d.label;
        r.instr = std::move(d.instr);
        for (const auto& i : r.instr)
            r.comp.push_back(cmp_of(spec, i));
        std::sort(r.comp.begin(), r.comp.end());
        r.comp.erase(std::unique(r.comp.begin(), r.comp.end()), r.comp.end());
        r.blocking = !r.label.is_tau() && !spec.is_nonblocking(r.label);
        r.target = std::move(d.target);
        r.target_key = print_expr(r.target, PrintMode::named);
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const StepResult& a, const StepResult& b) {
        const std::string la = a.label.str(), lb = b.label.str();
        return std::tie(la, a.instr, a.target_key) < std::tie(lb, b.instr, b.target_key);
    });
    return out;
}

FragmentError::FragmentError(std::vector<Diagnostic> d)
    : std::runtime_error(d.empty() ? "program outside the fragment" : d.front().str()),
      diagnostics(std::move(d))
{
}

ExplorationReport explore(const ProcessSpecPtr& spec, ExploreCaps caps)
{
    if (auto diags = check_fragment(*spec); !diags.empty())
        throw FragmentError(std::move(diags));
    if (caps.state_cap < 1)
        caps.state_cap = 1;

    ExplorationReport report;
    report.caps = caps;
    AugmentedLTS& lts = report.lts;
    lts.origin = Origin::ccs;
    lts.spec = spec;

    std::unordered_map<std::string, StateIdx> index;
    std::vector<std::size_t> depth;
    auto add_state = [&](const Expr& e, const std::string& key, std::size_t d) {
        StateIdx s = lts.states.size();
        lts.states.push_back({"s" + std::to_string(s), key});
        lts.state_exprs.push_back(e);
        lts.expanded.push_back(false);
        depth.push_back(d);
        index.emplace(key, s);
        return s;
    };

    add_state(spec->root, print_expr(spec->root, PrintMode::named), 0);
    lts.initial.push_back(0);

    bool truncated = false;
    for (StateIdx s = 0; s < lts.states.size(); ++s) {
        if (depth[s] >= caps.depth_cap) {
            truncated = true;
            continue;
        }
        lts.expanded[s] = true;
        Expr state = lts.state_exprs[s];
        for (auto& r : step(*spec, state)) {
            auto it = index.find(r.target_key);
            StateIdx t;
            if (it != index.end()) {
                t = it->second;
            } else if (lts.states.size() < caps.state_cap) {
                t = add_state(r.target, r.target_key, depth[s] + 1);
            } else {
                truncated = true;
                continue;
            }
            AugTransition tr;
            tr.id = "t" + std::to_string(lts.transitions.size());
            tr.source = s;
            tr.target = t;
            tr.label = r.label;
            tr.instr = std::move(r.instr);
            tr.comp = std::move(r.comp);
            tr.blocking = r.blocking;
            lts.transitions.push_back(std::move(tr));
        }
    }
    lts.truncated = truncated;
    report.truncated = truncated;
    lts.reindex();
    return report;
}

bool unique_synchronisation_check(const AugmentedLTS& lts)
{
    if (!lts.has_instr())
        throw LtsError("unique synchronisation check needs instruction annotations");
    for (const auto& outs : lts.out) {
        std::set<std::vector<std::string>> seen;
        for (TransIdx t : outs)
            if (!seen.insert(*lts.transitions[t].instr).second)
                return false;
    }
    return true;
}

std::optional<bool> requested_opt(const AugmentedLTS& lts, const std::string& instruction, StateIdx state)
{
    if (!lts.spec || lts.state_exprs.size() != lts.states.size())
        throw LtsError("requested needs an LTS explored from a program");
    std::optional<Expr> part = project(lts.state_exprs[state], cmp_of(*lts.spec, instruction));
    if (!part)
        return std::nullopt;
    for (const auto& d : derive(*part))
        if (std::binary_search(d.instr.begin(), d.instr.end(), instruction))
            return true;
    return false;
}

bool requested(const AugmentedLTS& lts, const std::string& instruction, StateIdx state)
{
    auto r = requested_opt(lts, instruction, state);
    if (!r)
        throw LtsError("component of instruction " + instruction + " is not present in state " +
                       lts.states[state].id);
    return *r;
}

} // namespace fairlab
