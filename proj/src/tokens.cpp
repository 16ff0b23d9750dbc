#include "archprog/tokens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "archprog/error.hpp"
#include "archprog/rng.hpp"

namespace archprog {

std::string Vocab::name(Token t) const {
    if (is_numeric(t)) return std::to_string(t);
    switch (t) {
    case kPhi: return "<\xCE\xA6>";
    case kSetGround: return "<SetGround>";
    case kZEnd: return "</z>";
    case kCreateLayer: return "<CreateLayer>";
    case kHEnd: return "</h>";
    case kPEnd: return "</p>";
    case kEos: return "<EOS>";
    case kBos: return "<BOS>";
    default: break;
    }
    if (is_label(t)) return "<L_" + std::to_string(label_of(t)) + ">";
    return "<?" + std::to_string(t) + ">";
}

Token Quantizer::quantize(double v) {
    if (std::isnan(v)) throw Error("cannot quantize NaN");
    // Bin i covers [-1 + 0.02 i, -1 + 0.02 (i + 1)); its centre is the nearest
    // one, and a value on a bin edge belongs to the upper bin. The 1e-9 slack
    // keeps decimal inputs such as 0.5 on the edge they denote.
    const double scaled = std::floor((v - kLo) / kStep + 1e-9);
    if (!(scaled >= 0.0)) return 0;
    if (scaled >= kBins - 1) return kBins - 1;
    return static_cast<Token>(scaled);
}

double Quantizer::dequantize(Token id) {
    if (id < 0 || id >= kBins) throw Error("numeric token out of range: " + std::to_string(id));
    return (2 * id - 99) / 100.0;
}

const char* phase_name(Phase p) {
    switch (p) {
    case Phase::Start: return "Start";
    case Phase::ExpectSetGround: return "ExpectSetGround";
    case Phase::ExpectZ: return "ExpectZ";
    case Phase::ExpectZEnd: return "ExpectZEnd";
    case Phase::StmtBoundary: return "StmtBoundary";
    case Phase::ExpectCreate: return "ExpectCreate";
    case Phase::ExpectParent: return "ExpectParent";
    case Phase::ExpectH: return "ExpectH";
    case Phase::ExpectHEnd: return "ExpectHEnd";
    case Phase::ExpectX: return "ExpectX";
    case Phase::ExpectY: return "ExpectY";
    case Phase::ExpectPEnd: return "ExpectPEnd";
    case Phase::Accept: return "Accept";
    }
    return "?";
}

namespace {

bool contour_closable(const FsmState& st) {
    return st.points_in_contour >= 3 && !(st.prev_x == st.first_x && st.prev_y == st.first_y);
}

} // namespace

bool Fsm::allows(const FsmState& st, Token tok) const {
    const bool numeric = vocab_.is_numeric(tok);
    const Token next_label = st.declared_count < limits_.lmax ? vocab_.label(st.declared_count + 1) : -1;
    switch (st.phase) {
    case Phase::Start: return tok == Vocab::kPhi;
    case Phase::ExpectSetGround: return tok == Vocab::kSetGround;
    case Phase::ExpectZ: return numeric;
    case Phase::ExpectZEnd: return tok == Vocab::kZEnd;
    case Phase::StmtBoundary: return tok == Vocab::kEos || (tok == next_label && next_label >= 0);
    case Phase::ExpectCreate: return tok == Vocab::kCreateLayer;
    case Phase::ExpectParent: {
        LayerLabel ref = -1;
        if (tok == Vocab::kPhi) ref = kGround;
        else if (vocab_.is_label(tok)) ref = vocab_.label_of(tok);
        return ref >= st.last_parent && ref < st.declared_count;
    }
    case Phase::ExpectH: return numeric && tok >= kFirstPositiveBin;
    case Phase::ExpectHEnd: return tok == Vocab::kHEnd;
    case Phase::ExpectX:
        if (numeric) return st.points_in_contour < limits_.max_points;
        if (!contour_closable(st)) return false;
        return tok == Vocab::kEos || (tok == next_label && next_label >= 0);
    case Phase::ExpectY: {
        if (!numeric) return false;
        if (st.pending_x == st.prev_x && tok == st.prev_y) return false;
        // The final admissible point may not coincide with the first one, or
        // the contour could never be closed.
        if (st.points_in_contour + 1 == limits_.max_points && st.pending_x == st.first_x && tok == st.first_y)
            return false;
        return true;
    }
    case Phase::ExpectPEnd: return tok == Vocab::kPEnd;
    case Phase::Accept: return false;
    }
    return false;
}

std::string Fsm::reject_reason(const FsmState& st, Token tok) const {
    if (st.phase == Phase::ExpectX && (tok == Vocab::kEos || vocab_.is_label(tok)) && st.points_in_contour < 3)
        return "contour needs at least 3 points";
    if (st.phase == Phase::ExpectX && (tok == Vocab::kEos || vocab_.is_label(tok)) && !contour_closable(st))
        return "contour ends on its first point";
    if (st.phase == Phase::ExpectY && vocab_.is_numeric(tok)) return "repeated contour point";
    return "unexpected " + vocab_.name(tok) + " in state " + phase_name(st.phase);
}

FsmState Fsm::step(const FsmState& st, Token tok) const {
    if (!allows(st, tok)) throw TokenError(0, allowed(st), reject_reason(st, tok));
    FsmState next = st;
    switch (st.phase) {
    case Phase::Start: next.phase = Phase::ExpectSetGround; break;
    case Phase::ExpectSetGround: next.phase = Phase::ExpectZ; break;
    case Phase::ExpectZ: next.phase = Phase::ExpectZEnd; break;
    case Phase::ExpectZEnd: next.phase = Phase::StmtBoundary; break;
    case Phase::StmtBoundary:
    case Phase::ExpectX:
        if (tok == Vocab::kEos) {
            next.phase = Phase::Accept;
        } else if (vocab_.is_label(tok)) {
            next.declared_count = st.declared_count + 1;
            next.phase = Phase::ExpectCreate;
        } else {
            next.pending_x = tok;
            next.phase = Phase::ExpectY;
        }
        break;
    case Phase::ExpectCreate: next.phase = Phase::ExpectParent; break;
    case Phase::ExpectParent:
        next.last_parent = tok == Vocab::kPhi ? kGround : vocab_.label_of(tok);
        next.phase = Phase::ExpectH;
        break;
    case Phase::ExpectH: next.phase = Phase::ExpectHEnd; break;
    case Phase::ExpectHEnd:
        next.phase = Phase::ExpectX;
        next.points_in_contour = 0;
        next.first_x = next.first_y = next.prev_x = next.prev_y = next.pending_x = -1;
        break;
    case Phase::ExpectY:
        if (st.points_in_contour == 0) {
            next.first_x = st.pending_x;
            next.first_y = tok;
        }
        next.prev_x = st.pending_x;
        next.prev_y = tok;
        next.pending_x = -1;
        next.points_in_contour = st.points_in_contour + 1;
        next.phase = Phase::ExpectPEnd;
        break;
    case Phase::ExpectPEnd: next.phase = Phase::ExpectX; break;
    case Phase::Accept: break;
    }
    return next;
}

std::vector<bool> Fsm::mask(const FsmState& st) const {
    std::vector<bool> m(static_cast<std::size_t>(vocab_.size()), false);
    for (Token t = 0; t < vocab_.size(); ++t) m[static_cast<std::size_t>(t)] = allows(st, t);
    return m;
}

std::vector<Token> Fsm::allowed(const FsmState& st) const {
    std::vector<Token> out;
    for (Token t = 0; t < vocab_.size(); ++t)
        if (allows(st, t)) out.push_back(t);
    return out;
}

Program quantize_program(const Program& p) {
    Program q = p;
    q.ground = Quantizer::snap(q.ground);
    for (LayerStatement& st : q.layers) {
        st.height = Quantizer::snap(st.height);
        for (Vec2& v : st.contour.vertices) v = {Quantizer::snap(v.x), Quantizer::snap(v.y)};
    }
    return q;
}

namespace {

Token checked_quantize(double v, const std::string& what) {
    if (!(v >= Quantizer::kLo && v <= Quantizer::kHi))
        throw Error(what + " = " + std::to_string(v) + " outside [-1, 1]");
    return Quantizer::quantize(v);
}

} // namespace

TokenSequence tokenize(const Program& p, const GrammarLimits& limits) {
    const Vocab vocab = limits.vocab();
    if (static_cast<int>(p.layers.size()) > limits.lmax)
        throw Error("program has " + std::to_string(p.layers.size()) + " layers; the vocabulary holds " +
                    std::to_string(limits.lmax));
    TokenSequence out;
    out.push_back(Vocab::kBos);
    out.insert(out.end(), {Vocab::kPhi, Vocab::kSetGround, checked_quantize(p.ground, "ground z"), Vocab::kZEnd});
    for (const LayerStatement& st : p.layers) {
        const std::string where = "L" + std::to_string(st.label);
        if (static_cast<int>(st.contour.size()) > limits.max_points)
            throw Error(where + " has " + std::to_string(st.contour.size()) + " vertices; at most " +
                        std::to_string(limits.max_points) + " are encodable");
        out.push_back(vocab.label(st.label));
        out.push_back(Vocab::kCreateLayer);
        out.push_back(st.parent == kGround ? Vocab::kPhi : vocab.label(st.parent));
        out.push_back(checked_quantize(st.height, where + " height"));
        out.push_back(Vocab::kHEnd);
        for (const Vec2& v : st.contour.vertices) {
            out.push_back(checked_quantize(v.x, where + " x"));
            out.push_back(checked_quantize(v.y, where + " y"));
            out.push_back(Vocab::kPEnd);
        }
    }
    out.push_back(Vocab::kEos);

    // The quantized program must itself be grammatical (e.g. quantization may
    // merge two neighbouring vertices); report the offending position.
    const Fsm fsm(limits);
    FsmState st = fsm.init();
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!fsm.allows(st, out[i]))
            throw TokenError(i, fsm.allowed(st),
                             "program is not encodable: " + vocab.name(out[i]) + " rejected in state " +
                                 phase_name(st.phase) + " (check labels, breadth-first order and repeated vertices)");
        st = fsm.step(st, out[i]);
    }
    return out;
}

PrefixState run_prefix(const Fsm& fsm, std::span<const Token> prefix) {
    PrefixState out;
    if (prefix.empty()) {
        out.at_start = true;
        return out;
    }
    if (prefix[0] != Vocab::kBos) throw TokenError(0, {Vocab::kBos}, "sequence must start with <BOS>");
    out.state = fsm.init();
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        if (out.state.phase == Phase::Accept) throw TokenError(i, {}, "tokens after <EOS>");
        if (!fsm.allows(out.state, prefix[i]))
            throw TokenError(i, fsm.allowed(out.state), fsm.reject_reason(out.state, prefix[i]));
        out.state = fsm.step(out.state, prefix[i]);
    }
    return out;
}

Program detokenize(std::span<const Token> tokens, const GrammarLimits& limits) {
    const Fsm fsm(limits);
    const Vocab& vocab = fsm.vocab();
    const PrefixState run = run_prefix(fsm, tokens);
    if (run.at_start) throw TokenError(0, {Vocab::kBos}, "empty sequence");
    if (run.state.phase != Phase::Accept)
        throw TokenError(tokens.size(), fsm.allowed(run.state), "unexpected end of sequence");

    // The automaton accepted, so the structure below is guaranteed.
    Program p;
    p.ground = Quantizer::dequantize(tokens[3]);
    std::size_t i = 5;
    while (tokens[i] != Vocab::kEos) {
        LayerStatement st;
        st.label = vocab.label_of(tokens[i]);
        st.parent = tokens[i + 2] == Vocab::kPhi ? kGround : vocab.label_of(tokens[i + 2]);
        st.height = Quantizer::dequantize(tokens[i + 3]);
        i += 5;
        while (vocab.is_numeric(tokens[i])) {
            st.contour.vertices.push_back({Quantizer::dequantize(tokens[i]), Quantizer::dequantize(tokens[i + 1])});
            i += 3;
        }
        p.layers.push_back(std::move(st));
    }
    return p;
}

TokenSequence constrained_sample(const Scorer& scorer, const SampleConfig& cfg, const Fsm& fsm) {
    const auto vsize = static_cast<std::size_t>(fsm.vocab().size());
    Rng rng(cfg.seed);
    TokenSequence seq{Vocab::kBos};
    FsmState st = fsm.init();
    std::vector<std::pair<double, Token>> cand;
    cand.reserve(vsize);
    while (st.phase != Phase::Accept) {
        if (seq.size() >= cfg.max_len)
            throw SampleError("reached max_len " + std::to_string(cfg.max_len) + " before <EOS>");
        const std::vector<double> scores = scorer(seq);
        if (scores.size() != vsize)
            throw SampleError("scorer returned " + std::to_string(scores.size()) + " scores for a vocabulary of " +
                              std::to_string(vsize));
        cand.clear();
        for (Token t = 0; t < static_cast<Token>(vsize); ++t) {
            const double s = scores[static_cast<std::size_t>(t)];
            if (!std::isfinite(s)) throw SampleError("scorer returned a non-finite score for token " + std::to_string(t));
            if (fsm.allows(st, t)) cand.emplace_back(s, t);
        }
        // Highest score first; equal scores keep ascending id order.
        std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

        Token pick = cand.front().second;
        if (cfg.temperature > 0.0) {
            if (cfg.top_k > 0 && cand.size() > static_cast<std::size_t>(cfg.top_k))
                cand.resize(static_cast<std::size_t>(cfg.top_k));
            const double top = cand.front().first / cfg.temperature;
            std::vector<double> prob(cand.size());
            double total = 0.0;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                prob[i] = std::exp(cand[i].first / cfg.temperature - top);
                total += prob[i];
            }
            std::size_t keep = cand.size();
            if (cfg.top_p < 1.0) {
                double cum = 0.0;
                for (std::size_t i = 0; i < cand.size(); ++i) {
                    cum += prob[i] / total;
                    if (cum >= cfg.top_p) {
                        keep = i + 1;
                        break;
                    }
                }
            }
            double kept_total = 0.0;
            for (std::size_t i = 0; i < keep; ++i) kept_total += prob[i];
            double u = rng.uniform() * kept_total;
            pick = cand[keep - 1].second;
            for (std::size_t i = 0; i < keep; ++i) {
                if (u < prob[i]) {
                    pick = cand[i].second;
                    break;
                }
                u -= prob[i];
            }
        }
        st = fsm.step(st, pick);
        seq.push_back(pick);
    }
    return seq;
}

} // namespace archprog
