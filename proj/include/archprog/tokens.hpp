#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "archprog/dsl.hpp"
#include "archprog/error.hpp"

namespace archprog {

using Token = int;

/// Token id layout. Numeric ids 0..99 are quantization bins; structural
/// tokens follow; layer labels L_1..L_lmax start at 108.
struct Vocab {
    static constexpr Token kNumericCount = 100;
    static constexpr Token kPhi = 100;
    static constexpr Token kSetGround = 101;
    static constexpr Token kZEnd = 102;
    static constexpr Token kCreateLayer = 103;
    static constexpr Token kHEnd = 104;
    static constexpr Token kPEnd = 105;
    static constexpr Token kEos = 106;
    static constexpr Token kBos = 107;
    static constexpr Token kFirstLabel = 108;

    int lmax = 16;

    int size() const { return kFirstLabel + lmax; }
    Token label(LayerLabel k) const { return kFirstLabel + k - 1; }
    bool is_numeric(Token t) const { return t >= 0 && t < kNumericCount; }
    bool is_label(Token t) const { return t >= kFirstLabel && t < size(); }
    LayerLabel label_of(Token t) const { return t - kFirstLabel + 1; }
    std::string name(Token t) const;
};

/// Scalar quantization over [-1, 1] with 100 bins of width 0.02.
struct Quantizer {
    static constexpr double kLo = -1.0;
    static constexpr double kHi = 1.0;
    static constexpr double kStep = 0.02;
    static constexpr int kBins = 100;

    /// Nearest bin centre, ties toward +inf, clamped to [0, 99]; throws on NaN.
    static Token quantize(double v);
    /// Bin centre -0.99 + 0.02 * id; throws for ids outside [0, 99].
    static double dequantize(Token id);
    /// dequantize(quantize(v)).
    static double snap(double v) { return dequantize(quantize(v)); }
};

/// Smallest numeric id whose bin centre is strictly positive (heights).
inline constexpr Token kFirstPositiveBin = 50;

struct GrammarLimits {
    int lmax = 16;
    int max_points = 32;

    Vocab vocab() const { return Vocab{lmax}; }
};

enum class Phase : std::uint8_t {
    Start,
    ExpectSetGround,
    ExpectZ,
    ExpectZEnd,
    StmtBoundary,
    ExpectCreate,
    ExpectParent,
    ExpectH,
    ExpectHEnd,
    ExpectX,
    ExpectY,
    ExpectPEnd,
    Accept,
};

const char* phase_name(Phase p);

/// Grammar automaton state. Besides the phase it tracks the number of
/// declared layers, the last parent (statements must stay breadth-first,
/// so parent labels never decrease) and enough of the current contour to
/// forbid repeated consecutive points.
struct FsmState {
    Phase phase = Phase::Start;
    int declared_count = 0;
    int points_in_contour = 0;
    LayerLabel last_parent = kGround;
    Token first_x = -1;
    Token first_y = -1;
    Token prev_x = -1;
    Token prev_y = -1;
    Token pending_x = -1;

    friend bool operator==(const FsmState&, const FsmState&) = default;
};

/// Syntax automaton over the token vocabulary. The stream it recognises
/// starts after ⟨BOS⟩:
///   ⟨Φ⟩⟨SetGround⟩[z]⟨/z⟩ ( ⟨L_k⟩⟨CreateLayer⟩⟨parent⟩[h]⟨/h⟩ ([x][y]⟨/p⟩){3..max} )* ⟨EOS⟩
class Fsm {
public:
    explicit Fsm(GrammarLimits limits = {}) : limits_(limits), vocab_(limits.vocab()) {}

    const GrammarLimits& limits() const { return limits_; }
    const Vocab& vocab() const { return vocab_; }

    FsmState init() const { return {}; }
    bool allows(const FsmState& st, Token tok) const;
    /// Throws TokenError when `tok` is masked out in `st`.
    FsmState step(const FsmState& st, Token tok) const;
    std::vector<bool> mask(const FsmState& st) const;
    /// Ids permitted in `st`, ascending.
    std::vector<Token> allowed(const FsmState& st) const;
    /// Human-readable explanation of why `tok` is masked out in `st`.
    std::string reject_reason(const FsmState& st, Token tok) const;

private:
    GrammarLimits limits_;
    Vocab vocab_;
};

using TokenSequence = std::vector<Token>;

/// Replaces every scalar of `p` with its bin centre.
Program quantize_program(const Program& p);

TokenSequence tokenize(const Program& p, const GrammarLimits& limits = {});
/// Inverse of tokenize; throws TokenError (position + expected ids) exactly
/// where the automaton rejects.
Program detokenize(std::span<const Token> tokens, const GrammarLimits& limits = {});

/// Result of running the automaton over a prefix that starts with ⟨BOS⟩.
struct PrefixState {
    FsmState state;
    bool at_start = false; ///< empty prefix: only ⟨BOS⟩ is legal
};

/// Runs a ⟨BOS⟩-led prefix through the automaton; throws TokenError on rejection.
PrefixState run_prefix(const Fsm& fsm, std::span<const Token> prefix);

struct SampleConfig {
    int top_k = 0;          ///< 0 disables
    double top_p = 1.0;     ///< 1 disables
    double temperature = 1.0; ///< 0 selects greedily
    std::size_t max_len = 2048;
    std::uint64_t seed = 0;
};

/// Next-token scorer: logits over the full vocabulary given the prefix.
using Scorer = std::function<std::vector<double>(std::span<const Token>)>;

class SampleError : public Error {
public:
    using Error::Error;
};

/// Autoregressive sampling with the automaton's mask applied before
/// temperature, top-k and top-p. Returns a ⟨BOS⟩...⟨EOS⟩ sequence.
TokenSequence constrained_sample(const Scorer& scorer, const SampleConfig& cfg, const Fsm& fsm);

} // namespace archprog
