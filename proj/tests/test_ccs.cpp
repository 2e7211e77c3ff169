#include "fairlab/ccs.hpp"
#include "fairlab/semantics.hpp"

#include <gtest/gtest.h>

using namespace fairlab;

TEST(action_label, complement_is_an_involution)
{
    auto a = ActionLabel::parse("a");
    EXPECT_EQ(a.complement().str(), "'a");
    EXPECT_EQ(a.complement().complement(), a);
    auto b = ActionLabel::parse("'b#3");
    EXPECT_EQ(b.index, 3u);
    EXPECT_EQ(b.complement().str(), "b#3");
    EXPECT_TRUE(ActionLabel::parse("tau").is_tau());
}

TEST(action_label, relabelling_closes_under_complement)
{
    RelabelFn f;
    f.add_entry(ActionLabel::parse("a"), ActionLabel::parse("c"));
    EXPECT_EQ(f.apply(ActionLabel::parse("'a")).str(), "'c");
    EXPECT_EQ(f.apply(ActionLabel::parse("b")).str(), "b");
    EXPECT_TRUE(f.apply(ActionLabel::tau()).is_tau());
    f.add_family("b", "b", 1);
    EXPECT_EQ(f.apply(ActionLabel::parse("'b#4")).str(), "'b#5");
    EXPECT_THROW(f.add_entry(ActionLabel::parse("a"), ActionLabel::parse("d")), std::invalid_argument);
}

TEST(parse_ccs, loop_with_exit_has_two_names)
{
    auto spec = parse_ccs("X where X = a.X + b.0");
    EXPECT_EQ(spec->names.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<Fix>(spec->root->v));
    auto body = unfold(std::get<Fix>(spec->root->v));
    EXPECT_TRUE(std::holds_alternative<Choice>(body->v));
}

TEST(parse_ccs, nil_has_no_names)
{
    auto spec = parse_ccs("0");
    EXPECT_TRUE(spec->names.empty());
    EXPECT_TRUE(std::holds_alternative<Nil>(spec->root->v));
}

TEST(parse_ccs, restricted_handshake_components)
{
    auto spec = parse_ccs("(X|Y)\\b where X = a.X + b.0, Y = c.Y + 'b.0");
    ASSERT_EQ(spec->names.size(), 4u);
    EXPECT_EQ(cmp_of(*spec, "a@1"), "L");
    EXPECT_EQ(cmp_of(*spec, "b@1"), "L");
    EXPECT_EQ(cmp_of(*spec, "c@1"), "R");
    EXPECT_EQ(cmp_of(*spec, "b~@1"), "R");
}

TEST(parse_ccs, errors)
{
    EXPECT_THROW(parse_ccs("a.("), ParseError);
    EXPECT_THROW(parse_ccs("X where Y = a.Y"), ParseError);
    EXPECT_THROW(parse_ccs("a.X[a->b, 'a->c]"), ParseError);
    try {
        parse_ccs("a.0 +\n  + b.0");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.span.line, 2);
    }
}

TEST(parse_ccs, explicit_names_and_comments)
{
    auto spec = parse_ccs("-- comment\na{first}.b.0 -- trailing\n");
    EXPECT_TRUE(spec->names.count("first"));
    EXPECT_TRUE(spec->names.count("b@1"));
    EXPECT_TRUE(spec->names.at("first").explicit_name);
}

TEST(parse_ccs, nonblocking_pragma)
{
    auto spec = parse_ccs("nonblocking a;\na.b.0");
    EXPECT_TRUE(spec->is_nonblocking(ActionLabel::parse("a")));
    EXPECT_FALSE(spec->is_nonblocking(ActionLabel::parse("b")));
}

TEST(parse_ccs, print_round_trip)
{
    const char* programs[] = {
        "X where X = a.X + b.0",
        "(X | Y)\\b where X = a.X + b.0, Y = c.Y + 'b.0",
        "a | X where X = b#0.(X[b#i -> b#(i+1)])",
        "(X | c.X) where X = a.b.c.X",
        "a{n1}.0 + tau.0",
    };
    for (const char* p : programs) {
        auto spec = parse_ccs(p);
        std::string once = print_program(*spec);
        auto again = parse_ccs(once);
        EXPECT_EQ(print_program(*again), once) << p;
        EXPECT_EQ(print_expr(again->root, PrintMode::named), print_expr(spec->root, PrintMode::named)) << p;
        EXPECT_EQ(again->names.size(), spec->names.size()) << p;
    }
}

TEST(check_fragment, guarded_recursion_is_fine)
{
    EXPECT_TRUE(check_fragment(*parse_ccs("X where X = a.X")).empty());
}

TEST(check_fragment, unguarded_variable)
{
    auto d = check_fragment(*parse_ccs("X where X = X + a.0"));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].kind, Diagnostic::Kind::unguarded_variable);
}

TEST(check_fragment, unguarded_parallel_in_choice)
{
    auto d = check_fragment(*parse_ccs("a.(b.0 | c.0) + (d.0 | e.0)"));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].kind, Diagnostic::Kind::unguarded_parallel);
}

TEST(check_fragment, parallel_in_binding)
{
    auto d = check_fragment(*parse_ccs("X where X = a.(X | X)"));
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d[0].kind, Diagnostic::Kind::parallel_in_binding);
    EXPECT_THROW(explore(parse_ccs("X where X = a.(X | X)")), FragmentError);
}

TEST(well_named, fresh_roots_are_well_named)
{
    EXPECT_TRUE(well_named(parse_ccs("(X | Y)\\b where X = a.X + b.0, Y = c.Y + 'b.0")->root));
    EXPECT_TRUE(well_named(parse_ccs("a | X where X = a.X")->root));
}

TEST(well_named, shared_name_in_choice_is_rejected)
{
    EXPECT_FALSE(well_named(parse_ccs_term("a{n}.0 + b{n}.0")));
    EXPECT_FALSE(well_named(parse_ccs_term("a{n}.0 | b{n}.0")));
    EXPECT_TRUE(well_named(parse_ccs_term("a{n}.b{m}.0")));
}

TEST(well_named, preserved_by_a_step)
{
    auto spec = parse_ccs("(X | Y)\\b where X = a.X + b.0, Y = c.Y + 'b.0");
    for (const auto& r : step(*spec, spec->root))
        EXPECT_TRUE(well_named(r.target));
}

TEST(cmp_of, nested_parallel)
{
    auto spec = parse_ccs("a.(P | b.Q) | U where P = p.P, Q = q.Q, U = u.U");
    EXPECT_EQ(cmp_of(*spec, "a@1"), "L");
    EXPECT_EQ(cmp_of(*spec, "b@1"), "LR");
    EXPECT_EQ(cmp_of(*spec, "u@1"), "R");
    EXPECT_THROW(cmp_of(*spec, "nope"), std::exception);
}

TEST(cmp_of, single_component_and_lone_a)
{
    auto one = parse_ccs("X where X = a.X + b.0");
    EXPECT_EQ(cmp_of(*one, "a@1"), "");
    EXPECT_EQ(cmp_of(*one, "b@1"), "");
    auto two = parse_ccs("a | X where X = a.X");
    EXPECT_EQ(cmp_of(*two, "a@1"), "L");
    EXPECT_EQ(cmp_of(*two, "a@2"), "R");
}

TEST(project, descends_through_restriction)
{
    auto spec = parse_ccs("(X | Y)\\b where X = a.X + b.0, Y = c.Y + 'b.0");
    auto l = project(spec->root, "L");
    ASSERT_TRUE(l.has_value());
    EXPECT_EQ(print_expr(*l, PrintMode::unnamed), "X");
    EXPECT_EQ(print_expr(*project(spec->root, ""), PrintMode::named), print_expr(spec->root, PrintMode::named));
    EXPECT_FALSE(project(parse_ccs("a.0")->root, "L").has_value());
}

TEST(instances, each_occurrence_gets_its_own_names)
{
    auto spec = parse_ccs("X | X where X = a.X");
    EXPECT_TRUE(spec->names.count("a@1"));
    EXPECT_TRUE(spec->names.count("a@2"));
    EXPECT_EQ(cmp_of(*spec, "a@1"), "L");
    EXPECT_EQ(cmp_of(*spec, "a@2"), "R");
}
