#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "archprog/dsl.hpp"
#include "archprog/error.hpp"
#include "archprog/tokens.hpp"

using namespace archprog;

namespace {

// Bin for a value given in integer hundredths: nearest centre (2i - 99)/100,
// ties to the larger index, clamped by construction.
Token oracle_bin(int hundredths) {
    Token best = 0;
    int best_d = 1 << 30;
    for (Token i = 0; i < 100; ++i) {
        const int d = std::abs(2 * i - 99 - hundredths);
        if (d <= best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

const char* kSquare = "ground = 0.0\n"
                      "L1 = layer(parent=Phi, h=0.5, c=[(-0.5,-0.5),(0.5,-0.5),(0.5,0.5),(-0.5,0.5)])";

const char* kNested = "ground = -0.25\n"
                      "L1 = layer(parent=Phi, h=0.51, c=[(-0.51,-0.51),(0.51,-0.51),(0.51,0.51),(-0.51,0.51)])\n"
                      "L2 = layer(parent=L1, h=0.31, c=[(-0.41,-0.41),(-0.01,-0.41),(-0.01,0.41),(-0.41,0.41)])\n"
                      "L3 = layer(parent=L1, h=0.21, c=[(0.09,-0.41),(0.39,-0.41),(0.39,0.41),(0.09,0.41)])\n"
                      "L4 = layer(parent=L3, h=0.11, c=[(0.11,-0.11),(0.31,-0.11),(0.31,0.11)])\n";

TokenError token_error(std::span<const Token> s) {
    try {
        detokenize(s);
    } catch (const TokenError& e) {
        return e;
    }
    FAIL("expected TokenError");
    return TokenError(0, {}, "");
}

} // namespace

TEST_CASE("quantize matches the integer oracle") {
    CHECK(Quantizer::quantize(-1.0) == 0);
    CHECK(Quantizer::quantize(0.99) == 99);
    CHECK(Quantizer::quantize(0.0) == 50);
    CHECK(Quantizer::quantize(5.0) == 99);
    CHECK(Quantizer::quantize(-5.0) == 0);
    CHECK_THROWS(Quantizer::quantize(std::nan("")));
    for (int k = -100; k <= 100; ++k) {
        CAPTURE(k);
        CHECK(Quantizer::quantize(k / 100.0) == oracle_bin(k));
    }
    // Every centre maps to itself.
    for (Token i = 0; i < 100; ++i) CHECK(Quantizer::quantize(Quantizer::dequantize(i)) == i);
}

TEST_CASE("dequantize") {
    CHECK(Quantizer::dequantize(0) == -0.99);
    CHECK(Quantizer::dequantize(99) == 0.99);
    CHECK(Quantizer::dequantize(50) == 0.01);
    CHECK_THROWS(Quantizer::dequantize(100));
    CHECK_THROWS(Quantizer::dequantize(-1));
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(-0.99, 0.99);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(gen);
        CHECK(std::abs(Quantizer::snap(v) - v) <= 0.01 + 1e-12);
    }
}

TEST_CASE("tokenize the unit square") {
    const TokenSequence s = tokenize(parse_program(kSquare));
    const Token lo = oracle_bin(-50);
    const Token hi = oracle_bin(50);
    const TokenSequence expected{107, 100, 101, oracle_bin(0), 102, 108, 103, 100, hi, 104,
                                 lo,  lo,  105, hi,            lo,  105, hi,  hi,  105, lo,
                                 hi,  105, 106};
    CHECK(s == expected);

    Program ground_only;
    ground_only.ground = 0.0;
    CHECK(tokenize(ground_only) == TokenSequence{107, 100, 101, 50, 102, 106});
}

TEST_CASE("round trip through tokens") {
    for (const char* text : {kSquare, kNested}) {
        const Program p = parse_program(text);
        const TokenSequence s = tokenize(p);
        const Program back = detokenize(s);
        CHECK(back == quantize_program(p));
        CHECK(tokenize(back) == s);
    }
}

TEST_CASE("tokenize limits") {
    Program p = parse_program(kNested);
    CHECK_THROWS(tokenize(p, GrammarLimits{3, 32}));
    CHECK_THROWS(tokenize(p, GrammarLimits{16, 3}));
    p.ground = -1.5;
    CHECK_THROWS(tokenize(p));
    // Two vertices 0.004 apart collapse into one bin.
    Program q = parse_program("ground = 0\nL1 = layer(parent=Phi, h=0.5, c=[(0,0),(0.004,0),(0.5,0),(0,0.5)])");
    CHECK_THROWS_AS(tokenize(q), TokenError);
}

TEST_CASE("detokenize errors") {
    const TokenSequence missing_z{107, 100, 101, 102, 106};
    const TokenError e = token_error(missing_z);
    CHECK(e.position() == 3);
    CHECK(e.expected().size() == 100);
    CHECK(e.expected().front() == 0);
    CHECK(e.expected().back() == 99);

    const TokenSequence two_points{107, 100, 101, 50, 102, 108, 103, 100, 60, 104, 10, 10, 105, 20, 10, 105, 106};
    const TokenError t = token_error(two_points);
    CHECK(t.position() == 16);
    CHECK(std::string(t.what()).find("at least 3 points") != std::string::npos);

    const TokenSequence truncated{107, 100, 101, 50};
    CHECK(token_error(truncated).position() == 4);

    const TokenSequence no_bos{100, 101, 50, 102, 106};
    CHECK(token_error(no_bos).position() == 0);

    const TokenSequence trailing{107, 100, 101, 50, 102, 106, 106};
    CHECK(token_error(trailing).position() == 6);

    const TokenSequence bad_label{107, 100, 101, 50, 102, 109};
    CHECK(token_error(bad_label).position() == 5);

    const TokenSequence zero_height{107, 100, 101, 50, 102, 108, 103, 100, 49, 104};
    CHECK(token_error(zero_height).position() == 8);
}

TEST_CASE("fsm masks") {
    const Fsm fsm;
    CHECK(fsm.vocab().size() == 124);
    FsmState st = fsm.init();
    CHECK(fsm.allowed(st) == std::vector<Token>{Vocab::kPhi});
    st = fsm.step(st, Vocab::kPhi);
    CHECK(fsm.allowed(st) == std::vector<Token>{Vocab::kSetGround});
    st = fsm.step(st, Vocab::kSetGround);
    std::vector<Token> numerics(100);
    for (Token i = 0; i < 100; ++i) numerics[static_cast<std::size_t>(i)] = i;
    CHECK(fsm.allowed(st) == numerics);
    st = fsm.step(fsm.step(st, 50), Vocab::kZEnd);
    CHECK(fsm.allowed(st) == std::vector<Token>{Vocab::kEos, 108});
    st = fsm.step(fsm.step(st, 108), Vocab::kCreateLayer);
    CHECK(fsm.allowed(st) == std::vector<Token>{Vocab::kPhi});
    CHECK_THROWS_AS(fsm.step(st, 108), TokenError);
    st = fsm.step(st, Vocab::kPhi);
    const auto heights = fsm.allowed(st);
    CHECK(heights.size() == 50);
    CHECK(heights.front() == 50);

    // A repeated point is masked.
    st = fsm.step(fsm.step(st, 60), Vocab::kHEnd);
    st = fsm.step(fsm.step(fsm.step(st, 10), 10), Vocab::kPEnd);
    st = fsm.step(st, 10);
    const auto ys = fsm.allowed(st);
    CHECK(ys.size() == 99);
    CHECK(std::find(ys.begin(), ys.end(), 10) == ys.end());
}

TEST_CASE("fsm breadth-first parents") {
    Program p = parse_program(kNested);
    p.layers.pop_back();
    const TokenSequence s = tokenize(p);
    const Fsm fsm;
    const PrefixState run = run_prefix(fsm, std::span(s).first(s.size() - 1));
    // After L3 the parent sequence is Phi, L1, L1; L4 may hang from L1..L3 only.
    FsmState st = fsm.step(fsm.step(run.state, 111), Vocab::kCreateLayer);
    CHECK(fsm.allowed(st) == std::vector<Token>{108, 109, 110});
}

TEST_CASE("fsm completeness over tokenized programs") {
    const Fsm fsm;
    for (const char* text : {kSquare, kNested}) {
        const TokenSequence s = tokenize(parse_program(text));
        FsmState st = fsm.init();
        for (std::size_t i = 1; i < s.size(); ++i) {
            const auto m = fsm.mask(st);
            CHECK(m[static_cast<std::size_t>(s[i])]);
            st = fsm.step(st, s[i]);
        }
        CHECK(st.phase == Phase::Accept);
    }
}

TEST_CASE("constrained sampling") {
    const Fsm fsm;
    const auto vsize = static_cast<std::size_t>(fsm.vocab().size());
    const Scorer uniform = [&](std::span<const Token>) { return std::vector<double>(vsize, 0.0); };

    SampleConfig cfg;
    cfg.seed = 3;
    const TokenSequence a = constrained_sample(uniform, cfg, fsm);
    CHECK(a == constrained_sample(uniform, cfg, fsm));
    CHECK(a.back() == Vocab::kEos);
    CHECK_NOTHROW(detokenize(a));

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        cfg.seed = seed;
        cfg.top_k = static_cast<int>(seed % 7);
        cfg.top_p = seed % 3 == 0 ? 0.9 : 1.0;
        CHECK_NOTHROW(detokenize(constrained_sample(uniform, cfg, fsm)));
    }

    const Scorer eos = [&](std::span<const Token>) {
        std::vector<double> s(vsize, 0.0);
        s[Vocab::kEos] = 100.0;
        return s;
    };
    cfg = {};
    const TokenSequence shortest = constrained_sample(eos, cfg, fsm);
    CHECK(shortest.size() == 6);
    CHECK(shortest.back() == Vocab::kEos);

    cfg.temperature = 0.0;
    CHECK(constrained_sample(eos, cfg, fsm) == TokenSequence{107, 100, 101, 0, 102, 106});

    cfg = {};
    cfg.max_len = 5;
    CHECK_THROWS_AS(constrained_sample(uniform, cfg, fsm), SampleError);

    const Scorer broken = [](std::span<const Token>) { return std::vector<double>(3, 0.0); };
    CHECK_THROWS_AS(constrained_sample(broken, {}, fsm), SampleError);
}
