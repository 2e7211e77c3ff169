#include "fairlab/ccs.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace fairlab
{

namespace
{

template <class T>
Expr make(T&& v, Span s)
{
    return std::make_shared<const Node>(Node{std::forward<T>(v), s});
}

} // namespace

Expr make_nil(Span s) { return make(Nil{}, s); }
Expr make_prefix(ActionLabel a, std::string name, Expr body, Span s)
{
    return make(Prefix{std::move(a), std::move(name), std::move(body)}, s);
}
Expr make_choice(Expr l, Expr r, Span s) { return make(Choice{std::move(l), std::move(r)}, s); }
Expr make_par(Expr l, Expr r, Span s) { return make(Par{std::move(l), std::move(r)}, s); }
Expr make_restrict(Expr body, ActionLabel channel, Span s)
{
    return make(Restrict{std::move(body), std::move(channel)}, s);
}
Expr make_relabel(Expr body, std::shared_ptr<const RelabelFn> fn, Span s)
{
    return make(Relabel{std::move(body), std::move(fn)}, s);
}
Expr make_var(std::string x, Span s) { return make(Var{std::move(x)}, s); }
Expr make_fix(const Instance* inst, std::string x, Span s) { return make(Fix{inst, std::move(x)}, s); }

const Expr* ProcessSpec::source_binding(const std::string& x) const
{
    for (const auto& [name, body] : source_bindings)
        if (name == x)
            return &body;
    return nullptr;
}

bool ProcessSpec::is_nonblocking(const ActionLabel& a) const
{
    const std::string s = a.str();
    return std::find(nonblocking.begin(), nonblocking.end(), s) != nonblocking.end();
}

Expr unfold(const Fix& f) { return f.instance->bindings.at(f.x); }

ComponentPath cmp_of(const ProcessSpec& spec, const std::string& instruction)
{
    auto it = spec.names.find(instruction);
    if (it == spec.names.end())
        throw std::out_of_range("unknown instruction name '" + instruction + "'");
    return it->second.cmp;
}

std::optional<Expr> project(const Expr& state, const ComponentPath& c)
{
    Expr cur = state;
    for (char step : c) {
        for (;;) {
            if (auto* r = std::get_if<Restrict>(&cur->v))
                cur = r->body;
            else if (auto* f = std::get_if<Relabel>(&cur->v))
                cur = f->body;
            else
                break;
        }
        auto* p = std::get_if<Par>(&cur->v);
        if (!p)
            return std::nullopt;
        cur = step == 'L' ? p->left : p->right;
    }
    return cur;
}

// ---------------------------------------------------------------- printing

namespace
{

// Precedence levels: 0 par, 1 choice, 2 prefix, 3 postfix, 4 atom.
void print_rec(const Expr& e, PrintMode mode, int ctx, std::string& out)
{
    auto open = [&](int level) {
        if (ctx > level)
            out += "(";
    };
    auto close = [&](int level) {
        if (ctx > level)
            out += ")";
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Nil>) {
                out += "0";
            } else if constexpr (std::is_same_v<T, Prefix>) {
                open(2);
                out += n.action.str();
                if (!n.name.empty() && mode != PrintMode::unnamed)
                    out += "{" + n.name + "}";
                out += ".";
                print_rec(n.body, mode, 2, out);
                close(2);
            } else if constexpr (std::is_same_v<T, Choice>) {
                open(1);
                print_rec(n.left, mode, 1, out);
                out += " + ";
                print_rec(n.right, mode, 2, out);
                close(1);
            } else if constexpr (std::is_same_v<T, Par>) {
                open(0);
                print_rec(n.left, mode, 0, out);
                out += " | ";
                print_rec(n.right, mode, 1, out);
                close(0);
            } else if constexpr (std::is_same_v<T, Restrict>) {
                open(3);
                print_rec(n.body, mode, 3, out);
                out += "\\" + n.channel.str();
                close(3);
            } else if constexpr (std::is_same_v<T, Relabel>) {
                open(3);
                print_rec(n.body, mode, 3, out);
                out += n.fn->str();
                close(3);
            } else if constexpr (std::is_same_v<T, Var>) {
                out += n.x;
            } else if constexpr (std::is_same_v<T, Fix>) {
                if (mode == PrintMode::named)
                    out += n.instance->display.at(n.x);
                else
                    out += n.x;
            }
        },
        e->v);
}

} // namespace

std::string print_expr(const Expr& e, PrintMode mode)
{
    std::string out;
    print_rec(e, mode, 0, out);
    return out;
}

std::string print_program(const ProcessSpec& spec)
{
    std::string out;
    if (!spec.nonblocking.empty()) {
        out += "nonblocking ";
        for (std::size_t i = 0; i < spec.nonblocking.size(); ++i)
            out += (i ? ", " : "") + spec.nonblocking[i];
        out += ";\n";
    }
    out += print_expr(spec.source_main, PrintMode::source);
    if (!spec.source_bindings.empty()) {
        out += "\nwhere ";
        for (std::size_t i = 0; i < spec.source_bindings.size(); ++i) {
            if (i)
                out += ",\n      ";
            out += spec.source_bindings[i].first + " = " +
                   print_expr(spec.source_bindings[i].second, PrintMode::source);
        }
    }
    return out + "\n";
}

// ------------------------------------------------------------ well-named

namespace
{

using NameBag = std::vector<std::string>;

void unguarded_names(const Expr& e, NameBag& out, std::set<std::pair<const Instance*, std::string>>& seen)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                out.push_back(n.name);
            } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
                unguarded_names(n.left, out, seen);
                unguarded_names(n.right, out, seen);
            } else if constexpr (std::is_same_v<T, Restrict> || std::is_same_v<T, Relabel>) {
                unguarded_names(n.body, out, seen);
            } else if constexpr (std::is_same_v<T, Fix>) {
                if (seen.insert({n.instance, n.x}).second)
                    unguarded_names(unfold(n), out, seen);
            }
        },
        e->v);
}

void all_names(const Expr& e, std::set<std::string>& out, std::unordered_set<const Instance*>& seen)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                out.insert(n.name);
                all_names(n.body, out, seen);
            } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
                all_names(n.left, out, seen);
                all_names(n.right, out, seen);
            } else if constexpr (std::is_same_v<T, Restrict> || std::is_same_v<T, Relabel>) {
                all_names(n.body, out, seen);
            } else if constexpr (std::is_same_v<T, Fix>) {
                if (seen.insert(n.instance).second)
                    for (const auto& [x, body] : n.instance->bindings)
                        all_names(body, out, seen);
            }
        },
        e->v);
}

void children(const Expr& e, std::vector<Expr>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix> || std::is_same_v<T, Restrict> ||
                          std::is_same_v<T, Relabel>) {
                out.push_back(n.body);
            } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
                out.push_back(n.left);
                out.push_back(n.right);
            } else if constexpr (std::is_same_v<T, Fix>) {
                for (const auto& [x, body] : n.instance->bindings)
                    out.push_back(body);
            }
        },
        e->v);
}

} // namespace

bool well_named(const Expr& e)
{
    // Extended subexpressions: ordinary subterms plus the bodies of every
    // binding reachable through a Fix node.
    std::vector<Expr> stack{e};
    std::unordered_set<const Node*> visited;
    while (!stack.empty()) {
        Expr f = stack.back();
        stack.pop_back();
        if (!visited.insert(f.get()).second)
            continue;

        NameBag bag;
        std::set<std::pair<const Instance*, std::string>> seen;
        unguarded_names(f, bag, seen);
        std::sort(bag.begin(), bag.end());
        if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
            return false;

        if (auto* p = std::get_if<Par>(&f->v)) {
            std::set<std::string> l, r;
            std::unordered_set<const Instance*> sl, sr;
            all_names(p->left, l, sl);
            all_names(p->right, r, sr);
            for (const auto& n : l)
                if (r.count(n))
                    return false;
        }
        children(f, stack);
    }
    return true;
}

// ------------------------------------------------------- fragment checks

namespace
{

struct FragmentWalker
{
    std::vector<Diagnostic>& diags;
    bool in_binding = false;
    // variables occurring unguarded outside choice arms, per binding
    std::set<std::string>* unguarded_refs = nullptr;

    void walk(const Expr& e, bool guarded, bool in_choice)
    {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Prefix>) {
                    walk(n.body, true, false);
                } else if constexpr (std::is_same_v<T, Choice>) {
                    walk(n.left, guarded, true);
                    walk(n.right, guarded, true);
                } else if constexpr (std::is_same_v<T, Par>) {
                    if (in_binding)
                        diags.push_back({Diagnostic::Kind::parallel_in_binding, e->span,
                                         "parallel composition inside a recursive binding"});
                    if (in_choice && !guarded)
                        diags.push_back({Diagnostic::Kind::unguarded_parallel, e->span,
                                         "unguarded parallel composition inside a choice"});
                    walk(n.left, guarded, false);
                    walk(n.right, guarded, false);
                } else if constexpr (std::is_same_v<T, Restrict> || std::is_same_v<T, Relabel>) {
                    walk(n.body, guarded, in_choice);
                } else if constexpr (std::is_same_v<T, Var>) {
                    if (in_choice && !guarded)
                        diags.push_back({Diagnostic::Kind::unguarded_variable, e->span,
                                         "unguarded occurrence of variable " + n.x + " inside a choice"});
                    else if (!guarded && unguarded_refs)
                        unguarded_refs->insert(n.x);
                }
            },
            e->v);
    }
};

} // namespace

std::vector<Diagnostic> check_fragment(const ProcessSpec& spec)
{
    std::vector<Diagnostic> diags;
    FragmentWalker main{diags};
    main.walk(spec.source_main, false, false);

    std::map<std::string, std::set<std::string>> refs;
    for (const auto& [x, body] : spec.source_bindings) {
        FragmentWalker w{diags, true, &refs[x]};
        w.walk(body, false, false);
    }

    // A cycle of unguarded references (X = Y, Y = X) never reaches a prefix.
    std::set<std::string> reported;
    for (const auto& [x, body] : spec.source_bindings) {
        std::set<std::string> seen;
        std::vector<std::string> todo(refs[x].begin(), refs[x].end());
        bool cyclic = false;
        while (!todo.empty() && !cyclic) {
            std::string y = todo.back();
            todo.pop_back();
            if (y == x)
                cyclic = true;
            else if (seen.insert(y).second)
                todo.insert(todo.end(), refs[y].begin(), refs[y].end());
        }
        if (cyclic && reported.insert(x).second)
            diags.push_back({Diagnostic::Kind::unguarded_recursion, body->span,
                             "binding of " + x + " unfolds to itself without a prefix"});
    }
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
    });
    return diags;
}

} // namespace fairlab
