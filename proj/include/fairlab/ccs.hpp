#pragma once

#include "fairlab/action.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fairlab
{

struct Span
{
    int line = 0;
    int column = 0;
    [[nodiscard]] std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

// Thrown for syntax errors, unbound variables, inconsistent relabellings
// and specifications that are not well-named.
class ParseError : public std::runtime_error
{
public:
    ParseError(Span where, const std::string& what)
        : std::runtime_error(where.str() + ": " + what), span(where)
    {
    }
    Span span;
};

// A string over {L, R}; the empty string denotes the whole system.
using ComponentPath = std::string;

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Instance;

struct Nil
{
};
struct Prefix
{
    ActionLabel action;
    std::string name; // instruction name; empty in source form unless given explicitly
    Expr body;
};
struct Choice
{
    Expr left, right;
};
struct Par
{
    Expr left, right;
};
struct Restrict
{
    Expr body;
    ActionLabel channel; // Kind::name
};
struct Relabel
{
    Expr body;
    std::shared_ptr<const RelabelFn> fn;
};
// Only present in source form (bodies of the where-clause, main expression
// before elaboration).
struct Var
{
    std::string x;
};
// fix_X S for one instance of the recursive specification.
struct Fix
{
    const Instance* instance;
    std::string x;
};

struct Node
{
    std::variant<Nil, Prefix, Choice, Par, Restrict, Relabel, Var, Fix> v;
    Span span;
};

Expr make_nil(Span s = {});
Expr make_prefix(ActionLabel a, std::string name, Expr body, Span s = {});
Expr make_choice(Expr l, Expr r, Span s = {});
Expr make_par(Expr l, Expr r, Span s = {});
Expr make_restrict(Expr body, ActionLabel channel, Span s = {});
Expr make_relabel(Expr body, std::shared_ptr<const RelabelFn> fn, Span s = {});
Expr make_var(std::string x, Span s = {});
Expr make_fix(const Instance* inst, std::string x, Span s = {});

// One copy of the recursive specification, created for one variable
// occurrence of the main expression. Holds the bindings reachable from it,
// with instruction names filled in and variables turned into Fix nodes.
struct Instance
{
    std::size_t id = 0;
    std::map<std::string, Expr> bindings;
    std::vector<std::string> order;            // binding order of elaboration
    std::map<std::string, std::string> display; // printed form of each variable
};

struct NameInfo
{
    Span span;
    ActionLabel label;
    ComponentPath cmp;
    bool explicit_name = false;
};

struct Diagnostic
{
    enum class Kind
    {
        unguarded_variable,
        unguarded_parallel,
        parallel_in_binding,
        unguarded_recursion
    };
    Kind kind;
    Span span;
    std::string message;
    [[nodiscard]] std::string str() const { return span.str() + ": " + message; }
};

// A parsed and elaborated program: the named root expression, the source
// form it came from, the name table and component map.
class ProcessSpec
{
public:
    Expr root;

    // source form
    Expr source_main;
    std::vector<std::pair<std::string, Expr>> source_bindings;
    std::vector<std::string> nonblocking; // labels declared non-blocking, in label syntax

    std::vector<std::unique_ptr<Instance>> instances;
    std::map<std::string, NameInfo> names;

    [[nodiscard]] const Expr* source_binding(const std::string& x) const;
    [[nodiscard]] bool is_nonblocking(const ActionLabel& a) const;
};

using ProcessSpecPtr = std::shared_ptr<const ProcessSpec>;

ProcessSpecPtr parse_ccs(const std::string& text);

// Parses an expression in the context of an existing program, without
// elaboration: variables stay Var nodes and must be bound by the program.
Expr parse_ccs_expr(const ProcessSpec& spec, const std::string& text);
// Same, without any program: variables are left unchecked.
Expr parse_ccs_term(const std::string& text);

std::vector<Diagnostic> check_fragment(const ProcessSpec& spec);

bool well_named(const Expr& e);

ComponentPath cmp_of(const ProcessSpec& spec, const std::string& instruction);

std::optional<Expr> project(const Expr& state, const ComponentPath& c);

// Fix unfolding: the bound body of the instance, with Fix nodes in place of
// the variables.
Expr unfold(const Fix& f);

enum class PrintMode
{
    named,   // canonical state key: every prefix shows its instruction name
    unnamed, // names dropped; used for matching goals modulo names
    source   // re-parsable: only explicitly given names are shown
};

std::string print_expr(const Expr& e, PrintMode mode);
// Re-parsable source text of a whole program (pragmas, root, where-clause).
std::string print_program(const ProcessSpec& spec);

} // namespace fairlab
