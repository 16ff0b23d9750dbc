#include "doctest.h"

#include "archprog/dsl.hpp"
#include "archprog/error.hpp"

using namespace archprog;

namespace {

const char* kSquare =
    "ground = 0.0\n"
    "L1 = layer(parent=\xCE\xA6, h=0.5, c=[(-0.5,-0.5),(0.5,-0.5),(0.5,0.5),(-0.5,0.5)])";

std::string three_layers() {
    return "ground = -0.25\n"
           "L1 = layer(parent=Phi, h=0.50, c=[(-0.50,-0.50),(0.50,-0.50),(0.50,0.50),(-0.50,0.50)])\n"
           "L2 = layer(parent=L1, h=0.30, c=[(-0.40,-0.40),(0.00,-0.40),(0.00,0.40),(-0.40,0.40)])\n"
           "L3 = layer(parent=L1, h=0.20, c=[(0.10,-0.40),(0.40,-0.40),(0.40,0.40),(0.10,0.40)])\n";
}

template <typename F>
ParseError parse_error(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected ParseError");
    return ParseError(0, 0, "");
}

} // namespace

TEST_CASE("parse minimal program") {
    const Program p = parse_program(kSquare);
    CHECK(p.ground == 0.0);
    REQUIRE(p.layers.size() == 1);
    CHECK(p.layers[0].label == 1);
    CHECK(p.layers[0].parent == kGround);
    CHECK(p.layers[0].height == 0.5);
    CHECK(p.layers[0].contour.size() == 4);
    CHECK(signed_area(p.layers[0].contour) == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry locations") {
    std::string bad = kSquare;
    bad.replace(bad.find("\xCE\xA6"), 2, "L2");
    const ParseError fwd = parse_error([&] { parse_program(bad); });
    CHECK(fwd.line() == 2);
    CHECK(fwd.column() == 19);
    CHECK(fwd.message().find("undeclared parent") != std::string::npos);

    const ParseError two = parse_error([] { parse_program("ground = 0\nL1 = layer(parent=Phi, h=0.5, c=[(0,0),(1,0)])"); });
    CHECK(two.message().find("fewer than 3") != std::string::npos);

    const ParseError bowtie =
        parse_error([] { parse_program("ground = 0\nL1 = layer(parent=Phi, h=0.5, c=[(0,0),(1,1),(1,0),(0,1)])"); });
    CHECK(bowtie.message().find("non-simple") != std::string::npos);

    const ParseError zero =
        parse_error([] { parse_program("ground = 0\nL1 = layer(parent=Phi, h=0, c=[(0,0),(1,0),(0,1)])"); });
    CHECK(zero.message().find("non-positive height") != std::string::npos);
    CHECK(zero.line() == 2);

    const ParseError lex = parse_error([] { parse_program("ground = 0 $"); });
    CHECK(lex.column() == 12);

    const ParseError syn = parse_error([] { parse_program("ground 0"); });
    CHECK(syn.message().find("expected '='") != std::string::npos);

    const ParseError label =
        parse_error([] { parse_program("ground = 0\nL2 = layer(parent=Phi, h=0.5, c=[(0,0),(1,0),(0,1)])"); });
    CHECK(label.message().find("consecutive") != std::string::npos);

    const std::string not_bfs = "ground = 0\n"
                                "L1 = layer(parent=Phi, h=0.5, c=[(0,0),(1,0),(0,1)])\n"
                                "L2 = layer(parent=L1, h=0.5, c=[(0,0),(1,0),(0,1)])\n"
                                "L3 = layer(parent=Phi, h=0.5, c=[(2,0),(3,0),(2,1)])\n";
    const ParseError order = parse_error([&] { parse_program(not_bfs); });
    CHECK(order.message().find("breadth-first") != std::string::npos);
    CHECK(order.line() == 4);
}

TEST_CASE("parser normalizes orientation and accepts comments") {
    const Program p = parse_program("# a comment\nground = 0  # trailing\n\n"
                                    "L1 = layer(parent=Phi, h=1, c=[(0,0),\n (0,1), (1,1), (1,0)])\n");
    const Polygon2D& c = p.layers[0].contour;
    CHECK(signed_area(c) > 0.0);
    CHECK(c[0] == Vec2{0, 0});
    CHECK(c[1] == Vec2{1, 0});
}

TEST_CASE("print and round-trip") {
    CHECK(format_scalar(0.5) == "0.50");
    CHECK(format_scalar(-0.0) == "0.00");
    CHECK(format_scalar(-0.49) == "-0.49");

    const Program p = parse_program(kSquare);
    const std::string text = print_program(p);
    CHECK(text == "ground = 0.00\nL1 = layer(parent=\xCE\xA6, h=0.50, c=[(-0.50,-0.50),(0.50,-0.50),(0.50,0.50),(-0.50,0.50)])\n");
    CHECK(parse_program(text) == p);

    const Program q = parse_program(three_layers());
    const std::string printed = print_program(q);
    CHECK(printed.find("L1 =") < printed.find("L2 ="));
    CHECK(printed.find("L2 =") < printed.find("L3 ="));
    CHECK(parse_program(printed) == q);
    CHECK(print_program(parse_program(printed)) == printed);
}

TEST_CASE("exact printing keeps every digit it needs") {
    CHECK(format_scalar(0.5, true) == "0.50");
    CHECK(format_scalar(-0.0, true) == "0.00");
    CHECK(format_scalar(0.125, true) == "0.125");
    CHECK(format_scalar(0.1 + 0.2, true) == "0.30000000000000004");
    CHECK(format_scalar(1.0 / 3.0, false) == "0.33");

    Program p = parse_program(kSquare);
    p.layers[0].contour.vertices[0].x = -0.4812345678901234;
    p.layers[0].height = 0.1 + 0.2;
    const Program back = parse_program(print_program(p, true));
    CHECK(back == p);
    CHECK(!(parse_program(print_program(p)) == p));
}

TEST_CASE("program <-> tree") {
    const Program p = parse_program(three_layers());
    const TreeForm tf = program_to_tree(p);
    CHECK(tf.ground == -0.25);
    REQUIRE(tf.tree.roots.size() == 1);
    CHECK(tf.tree.nodes[0].children == std::vector<std::size_t>{1, 2});
    CHECK(tf.tree.depths() == std::vector<int>{1, 2, 2});
    CHECK(tree_to_program(tf.ground, tf.tree) == p);

    const TreeForm single = program_to_tree(parse_program(kSquare));
    CHECK(single.tree.roots == std::vector<std::size_t>{0});
    CHECK(single.tree.nodes[0].children.empty());
}

TEST_CASE("tree_to_program emits breadth-first") {
    const Polygon2D tri{{{0, 0}, {1, 0}, {0, 1}}};
    // Stored order: C, A, root, B with root -> {A, B}, A -> {C}.
    ArchTree t;
    t.nodes = {{0.3, tri, {}}, {0.1, tri, {0}}, {0.5, tri, {1, 3}}, {0.2, tri, {}}};
    t.roots = {2};
    const Program p = tree_to_program(0.0, t);
    REQUIRE(p.layers.size() == 4);
    CHECK(p.layers[0].height == 0.5);
    CHECK(p.layers[1].height == 0.1);
    CHECK(p.layers[2].height == 0.2);
    CHECK(p.layers[3].height == 0.3);
    CHECK(p.layers[3].parent == 2);
    for (std::size_t i = 0; i < p.layers.size(); ++i) CHECK(p.layers[i].label == static_cast<int>(i) + 1);

    ArchTree chain;
    chain.nodes = {{0.1, tri, {1}}, {0.2, tri, {2}}, {0.3, tri, {}}};
    chain.roots = {0};
    const Program c = tree_to_program(0.0, chain);
    CHECK(c.layers[2].parent == 2);
    CHECK(c.layers[1].parent == 1);

    ArchTree cyclic;
    cyclic.nodes = {{0.1, tri, {1}}, {0.2, tri, {0}}};
    CHECK_THROWS_AS(tree_to_program(0.0, cyclic), StructureError);

    ArchTree multi;
    multi.nodes = {{0.1, tri, {2}}, {0.2, tri, {2}}, {0.3, tri, {}}};
    multi.roots = {0, 1};
    CHECK_THROWS_AS(tree_to_program(0.0, multi), StructureError);
}

TEST_CASE("validate_program diagnostics") {
    CHECK(validate_program(parse_program(three_layers())).empty());

    Program p = parse_program(kSquare);
    p.layers[0].contour = {{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
    auto d = validate_program(p);
    REQUIRE(d.size() == 1);
    CHECK(d[0].to_string() == "non-simple polygon @ L1");

    p = parse_program(kSquare);
    p.layers[0].height = 0.0;
    d = validate_program(p);
    REQUIRE(d.size() == 1);
    CHECK(d[0].to_string() == "non-positive height @ L1");

    p = parse_program(kSquare);
    p.layers[0].contour = reversed(p.layers[0].contour);
    p.layers[0].parent = 1;
    d = validate_program(p);
    CHECK(d.size() == 2);
}
