#include "fairlab/ccs.hpp"

#include <cctype>
#include <deque>

namespace fairlab
{

namespace
{

class Parser
{
public:
    explicit Parser(const std::string& text) : src_(text) {}

    std::shared_ptr<ProcessSpec> program()
    {
        auto spec = std::make_shared<ProcessSpec>();
        skip();
        while (peek_word("nonblocking")) {
            take_word("nonblocking");
            do {
                skip();
                Span at = here();
                ActionLabel a = label();
                if (a.is_tau())
                    throw ParseError(at, "tau is always non-blocking");
                spec->nonblocking.push_back(a.str());
                skip();
            } while (accept(','));
            expect(';');
            skip();
        }
        spec->source_main = expr();
        skip();
        if (peek_word("where")) {
            take_word("where");
            do {
                skip();
                Span at = here();
                std::string x = ident();
                if (!std::isupper(static_cast<unsigned char>(x[0])))
                    throw ParseError(at, "variable names start with an uppercase letter");
                if (spec->source_binding(x))
                    throw ParseError(at, "variable " + x + " bound twice");
                skip();
                expect('=');
                spec->source_bindings.emplace_back(x, expr());
                skip();
            } while (accept(','));
        }
        skip();
        if (pos_ < src_.size())
            throw ParseError(here(), std::string("unexpected '") + src_[pos_] + "'");
        return spec;
    }

    Expr single_expr()
    {
        skip();
        Expr e = expr();
        skip();
        if (pos_ < src_.size())
            throw ParseError(here(), std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    Span here() const { return {line_, col_}; }

    char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char next() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

    void advance()
    {
        if (cur() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(cur())))
                advance();
            if (cur() == '-' && next() == '-') {
                while (pos_ < src_.size() && cur() != '\n')
                    advance();
                continue;
            }
            return;
        }
    }

    bool accept(char c)
    {
        skip();
        if (cur() == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        skip();
        if (cur() != c) {
            std::string got = pos_ < src_.size() ? std::string("'") + cur() + "'" : "end of input";
            throw ParseError(here(), std::string("expected '") + c + "', got " + got);
        }
        advance();
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    bool peek_word(const char* w) const
    {
        std::size_t n = std::char_traits<char>::length(w);
        return src_.compare(pos_, n, w) == 0 && !ident_char(pos_ + n < src_.size() ? src_[pos_ + n] : ' ');
    }

    void take_word(const char* w)
    {
        for (std::size_t i = 0; w[i]; ++i)
            advance();
    }

    std::string ident()
    {
        skip();
        if (!std::isalpha(static_cast<unsigned char>(cur())))
            throw ParseError(here(), "expected an identifier");
        std::string s;
        while (ident_char(cur())) {
            s += cur();
            advance();
        }
        return s;
    }

    std::uint64_t natural()
    {
        skip();
        if (!std::isdigit(static_cast<unsigned char>(cur())))
            throw ParseError(here(), "expected a natural number");
        std::uint64_t n = 0;
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            n = n * 10 + static_cast<std::uint64_t>(cur() - '0');
            advance();
        }
        return n;
    }

    bool at_label()
    {
        skip();
        return cur() == '\'' || std::islower(static_cast<unsigned char>(cur()));
    }

    ActionLabel label()
    {
        skip();
        Span at = here();
        bool co = accept('\'');
        std::string base = ident();
        if (base == "tau") {
            if (co)
                throw ParseError(at, "tau has no complement");
            return ActionLabel::tau();
        }
        if (!std::islower(static_cast<unsigned char>(base[0])))
            throw ParseError(at, "action names start with a lowercase letter");
        ActionLabel a = ActionLabel::name(base);
        if (cur() == '#') {
            advance();
            a.index = natural();
        }
        return co ? a.complement() : a;
    }

    // expr := sum { '|' sum }   (left-associative)
    Expr expr()
    {
        skip();
        Span at = here();
        Expr e = sum();
        while (accept('|'))
            e = make_par(e, sum(), at);
        return e;
    }

    Expr sum()
    {
        skip();
        Span at = here();
        Expr e = prefixed();
        while (accept('+'))
            e = make_choice(e, prefixed(), at);
        return e;
    }

    Expr prefixed()
    {
        skip();
        Span at = here();
        if (at_label()) {
            ActionLabel a = label();
            std::string name;
            if (accept('{')) {
                skip();
                while (pos_ < src_.size() && cur() != '}' && !std::isspace(static_cast<unsigned char>(cur()))) {
                    name += cur();
                    advance();
                }
                if (name.empty())
                    throw ParseError(here(), "empty instruction name");
                expect('}');
            }
            if (accept('.'))
                return make_prefix(a, name, prefixed(), at);
            // a bare action abbreviates a.0
            return postfix_ops(make_prefix(a, name, make_nil(at), at), at);
        }
        return postfix_ops(atom(), at);
    }

    Expr postfix_ops(Expr e, Span at)
    {
        for (;;) {
            skip();
            if (cur() == '\\') {
                advance();
                ActionLabel c = label();
                if (c.is_tau())
                    throw ParseError(here(), "tau cannot be restricted");
                e = make_restrict(e, c.channel(), at);
            } else if (cur() == '[') {
                advance();
                e = make_relabel(e, relabelling(), at);
            } else {
                return e;
            }
        }
    }

    std::shared_ptr<const RelabelFn> relabelling()
    {
        auto fn = std::make_shared<RelabelFn>();
        skip();
        if (accept(']'))
            return fn;
        do {
            skip();
            Span at = here();
            bool from_co = accept('\'');
            std::string from = ident();
            bool family = false;
            std::optional<std::uint64_t> from_index;
            if (cur() == '#') {
                advance();
                if (cur() == 'i' && !ident_char(next())) {
                    advance();
                    family = true;
                } else {
                    from_index = natural();
                }
            }
            skip();
            if (!(cur() == '-' && next() == '>'))
                throw ParseError(here(), "expected '->'");
            advance();
            advance();
            skip();
            bool to_co = accept('\'');
            std::string to = ident();
            std::optional<std::uint64_t> to_index;
            std::uint64_t offset = 0;
            bool to_family = false;
            if (cur() == '#') {
                advance();
                if (cur() == 'i' && !ident_char(next())) {
                    advance();
                    to_family = true;
                } else if (cur() == '(') {
                    advance();
                    skip();
                    if (cur() != 'i')
                        throw ParseError(here(), "expected 'i' in index expression");
                    advance();
                    expect('+');
                    offset = natural();
                    expect(')');
                    to_family = true;
                } else {
                    to_index = natural();
                }
            }
            try {
                if (family != to_family)
                    throw std::invalid_argument("family entries need b#i on both sides");
                if (family) {
                    if (from_co || to_co)
                        throw std::invalid_argument("family entries map names to names");
                    fn->add_family(from, to, offset);
                } else {
                    if (from == "tau" || to == "tau")
                        throw std::invalid_argument("relabelling cannot mention tau");
                    ActionLabel f = ActionLabel::name(from, from_index);
                    ActionLabel t = ActionLabel::name(to, to_index);
                    fn->add_entry(from_co ? f.complement() : f, to_co ? t.complement() : t);
                }
            } catch (const std::invalid_argument& e) {
                throw ParseError(at, e.what());
            }
            skip();
        } while (accept(','));
        expect(']');
        return fn;
    }

    Expr atom()
    {
        skip();
        Span at = here();
        if (cur() == '0' && !ident_char(next())) {
            advance();
            return make_nil(at);
        }
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isupper(static_cast<unsigned char>(cur())))
            return make_var(ident(), at);
        if (pos_ >= src_.size())
            throw ParseError(at, "unexpected end of input");
        throw ParseError(at, std::string("unexpected '") + cur() + "'");
    }
};

// Turns the source form into the named program: fresh instruction names,
// one instance of the bindings per variable occurrence of the main
// expression, component paths for every name.
class Elaborator
{
public:
    explicit Elaborator(ProcessSpec& spec) : spec_(spec) {}

    void run()
    {
        check_bound(spec_.source_main);
        for (const auto& [x, body] : spec_.source_bindings)
            check_bound(body);
        spec_.root = main(spec_.source_main, "");

        std::map<std::string, int> uses;
        for (const auto& inst : spec_.instances)
            for (const auto& x : inst->order)
                ++uses[x];
        for (auto& inst : spec_.instances)
            for (const auto& x : inst->order)
                inst->display[x] = uses[x] > 1 ? x + "/" + std::to_string(inst->id) : x;
    }

private:
    ProcessSpec& spec_;
    std::map<std::string, int> auto_count_;
    std::map<std::string, int> explicit_count_;

    void check_bound(const Expr& e)
    {
        if (auto* v = std::get_if<Var>(&e->v)) {
            if (!spec_.source_binding(v->x))
                throw ParseError(e->span, "unbound variable " + v->x);
            return;
        }
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Prefix> || std::is_same_v<T, Restrict> ||
                              std::is_same_v<T, Relabel>) {
                    check_bound(n.body);
                } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
                    check_bound(n.left);
                    check_bound(n.right);
                }
            },
            e->v);
    }

    std::string name_for(const Prefix& p, Span at, const ComponentPath& path,
                         std::map<std::string, std::string>* local)
    {
        std::string name;
        bool is_explicit = !p.name.empty();
        if (is_explicit) {
            if (local) {
                auto it = local->find(p.name);
                if (it != local->end())
                    return it->second;
            }
            int k = ++explicit_count_[p.name];
            name = k == 1 ? p.name : p.name + "/" + std::to_string(k);
            if (local)
                (*local)[p.name] = name;
        } else {
            std::string key = p.action.name_key();
            name = key + "@" + std::to_string(++auto_count_[key]);
        }
        auto [it, fresh] = spec_.names.emplace(name, NameInfo{at, p.action, path, is_explicit});
        if (!fresh && it->second.cmp != path)
            throw ParseError(at, "instruction name " + name + " used in two components");
        return name;
    }

    Expr main(const Expr& e, const ComponentPath& path)
    {
        return std::visit(
            [&](const auto& n) -> Expr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Nil>) {
                    return e;
                } else if constexpr (std::is_same_v<T, Prefix>) {
                    std::string name = name_for(n, e->span, path, nullptr);
                    return make_prefix(n.action, name, main(n.body, path), e->span);
                } else if constexpr (std::is_same_v<T, Choice>) {
                    Expr l = main(n.left, path);
                    return make_choice(l, main(n.right, path), e->span);
                } else if constexpr (std::is_same_v<T, Par>) {
                    Expr l = main(n.left, path + "L");
                    return make_par(l, main(n.right, path + "R"), e->span);
                } else if constexpr (std::is_same_v<T, Restrict>) {
                    return make_restrict(main(n.body, path), n.channel, e->span);
                } else if constexpr (std::is_same_v<T, Relabel>) {
                    return make_relabel(main(n.body, path), n.fn, e->span);
                } else if constexpr (std::is_same_v<T, Var>) {
                    return make_fix(instantiate(n.x, path), n.x, e->span);
                } else {
                    throw ParseError(e->span, "unexpected node in source");
                }
            },
            e->v);
    }

    const Instance* instantiate(const std::string& root, const ComponentPath& path)
    {
        auto inst = std::make_unique<Instance>();
        inst->id = spec_.instances.size() + 1;
        Instance* raw = inst.get();
        spec_.instances.push_back(std::move(inst));

        std::map<std::string, std::string> local;
        std::deque<std::string> todo{root};
        std::set<std::string> queued{root};
        while (!todo.empty()) {
            std::string x = todo.front();
            todo.pop_front();
            raw->order.push_back(x);
            raw->bindings[x] = body(*spec_.source_binding(x), raw, path, local, todo, queued);
        }
        return raw;
    }

    Expr body(const Expr& e, Instance* inst, const ComponentPath& path, std::map<std::string, std::string>& local,
              std::deque<std::string>& todo, std::set<std::string>& queued)
    {
        return std::visit(
            [&](const auto& n) -> Expr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Nil>) {
                    return e;
                } else if constexpr (std::is_same_v<T, Prefix>) {
                    std::string name = name_for(n, e->span, path, &local);
                    return make_prefix(n.action, name, body(n.body, inst, path, local, todo, queued), e->span);
                } else if constexpr (std::is_same_v<T, Choice>) {
                    Expr l = body(n.left, inst, path, local, todo, queued);
                    return make_choice(l, body(n.right, inst, path, local, todo, queued), e->span);
                } else if constexpr (std::is_same_v<T, Par>) {
                    // Not in the fragment; check_fragment reports it. Keep
                    // the arms so the program can still be printed.
                    Expr l = body(n.left, inst, path + "L", local, todo, queued);
                    return make_par(l, body(n.right, inst, path + "R", local, todo, queued), e->span);
                } else if constexpr (std::is_same_v<T, Restrict>) {
                    return make_restrict(body(n.body, inst, path, local, todo, queued), n.channel, e->span);
                } else if constexpr (std::is_same_v<T, Relabel>) {
                    return make_relabel(body(n.body, inst, path, local, todo, queued), n.fn, e->span);
                } else if constexpr (std::is_same_v<T, Var>) {
                    if (queued.insert(n.x).second)
                        todo.push_back(n.x);
                    return make_fix(inst, n.x, e->span);
                } else {
                    throw ParseError(e->span, "unexpected node in source");
                }
            },
            e->v);
    }
};

} // namespace

ProcessSpecPtr parse_ccs(const std::string& text)
{
    Parser p(text);
    std::shared_ptr<ProcessSpec> spec = p.program();
    Elaborator(*spec).run();
    if (check_fragment(*spec).empty() && !well_named(spec->root))
        throw ParseError({1, 1}, "specification is not well-named");
    return spec;
}

Expr parse_ccs_expr(const ProcessSpec& spec, const std::string& text)
{
    Parser p(text);
    Expr e = p.single_expr();
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr f = stack.back();
        stack.pop_back();
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Var>) {
                    if (!spec.source_binding(n.x))
                        throw ParseError(f->span, "unbound variable " + n.x);
                } else if constexpr (std::is_same_v<T, Prefix> || std::is_same_v<T, Restrict> ||
                                     std::is_same_v<T, Relabel>) {
                    stack.push_back(n.body);
                } else if constexpr (std::is_same_v<T, Choice> || std::is_same_v<T, Par>) {
                    stack.push_back(n.left);
                    stack.push_back(n.right);
                }
            },
            f->v);
    }
    return e;
}

Expr parse_ccs_term(const std::string& text)
{
    Parser p(text);
    return p.single_expr();
}

} // namespace fairlab
