#include "archprog/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <optional>

#include "archprog/error.hpp"

namespace archprog {

namespace {

enum class Tok { Ident, Number, Phi, Equals, LParen, RParen, LBracket, RBracket, Comma, Newline, End };

struct Lexeme {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Lexeme> run() {
        std::vector<Lexeme> out;
        int depth = 0;
        while (pos_ < src_.size()) {
            const char ch = src_[pos_];
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                advance(1);
                continue;
            }
            if (ch == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
                continue;
            }
            Lexeme lx;
            lx.line = line_;
            lx.column = column_;
            if (ch == '\n') {
                advance(1);
                if (depth > 0) continue;
                lx.kind = Tok::Newline;
                out.push_back(lx);
                continue;
            }
            if (src_.substr(pos_, 2) == "\xCE\xA6") {
                lx.kind = Tok::Phi;
                lx.text = "\xCE\xA6";
                advance(2);
                out.push_back(lx);
                continue;
            }
            switch (ch) {
            case '=': lx.kind = Tok::Equals; break;
            case '(': lx.kind = Tok::LParen; ++depth; break;
            case ')': lx.kind = Tok::RParen; --depth; break;
            case '[': lx.kind = Tok::LBracket; ++depth; break;
            case ']': lx.kind = Tok::RBracket; --depth; break;
            case ',': lx.kind = Tok::Comma; break;
            default: break;
            }
            if (lx.kind != Tok::End) {
                lx.text = std::string(1, ch);
                advance(1);
                out.push_back(lx);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::size_t end = pos_;
                while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
                lx.kind = Tok::Ident;
                lx.text = std::string(src_.substr(pos_, end - pos_));
                if (lx.text == "Phi") lx.kind = Tok::Phi;
                advance(end - pos_);
                out.push_back(lx);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.') {
                lx.kind = Tok::Number;
                lx.number = lex_number(lx);
                out.push_back(lx);
                continue;
            }
            throw ParseError(line_, column_, std::string("unexpected character '") + ch + "'");
        }
        Lexeme end;
        end.line = line_;
        end.column = column_;
        out.push_back(end);
        return out;
    }

private:
    double lex_number(Lexeme& lx) {
        std::size_t end = pos_;
        if (src_[end] == '-' || src_[end] == '+') ++end;
        const std::size_t digits_begin = end;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        std::size_t ndigits = end - digits_begin;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            const std::size_t frac_begin = end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
            ndigits += end - frac_begin;
        }
        if (ndigits == 0) throw ParseError(line_, column_, "malformed number");
        lx.text = std::string(src_.substr(pos_, end - pos_));
        std::string_view digits = lx.text;
        if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
        double value = 0.0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (res.ec != std::errc() || res.ptr != digits.data() + digits.size())
            throw ParseError(line_, column_, "malformed number '" + lx.text + "'");
        advance(end - pos_);
        return value;
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned char c = static_cast<unsigned char>(src_[pos_ + i]);
            if (c == '\n') {
                ++line_;
                column_ = 1;
            } else if ((c & 0xC0) != 0x80) {
                ++column_;
            }
        }
        pos_ += n;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Phi: return "'\xCE\xA6'";
    case Tok::Equals: return "'='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::optional<LayerLabel> layer_label(const std::string& ident) {
    if (ident.size() < 2 || ident[0] != 'L') return std::nullopt;
    int value = 0;
    const auto res = std::from_chars(ident.data() + 1, ident.data() + ident.size(), value);
    if (res.ec != std::errc() || res.ptr != ident.data() + ident.size() || value < 1) return std::nullopt;
    if (ident[1] == '0') return std::nullopt;
    return value;
}

class Parser {
public:
    explicit Parser(std::vector<Lexeme> toks) : toks_(std::move(toks)) {}

    Program run() {
        Program prog;
        skip_newlines();
        const Lexeme& kw = expect_ident("ground");
        expect(Tok::Equals);
        const Lexeme& z = expect(Tok::Number);
        if (z.number < -1.0 || z.number > 1.0)
            throw ParseError(z.line, z.column, "ground z outside [-1, 1]");
        (void)kw;
        prog.ground = z.number;
        end_statement();
        LayerLabel last_parent = kGround;
        while (peek().kind != Tok::End) {
            prog.layers.push_back(layer_statement(static_cast<LayerLabel>(prog.layers.size()) + 1, last_parent));
            last_parent = prog.layers.back().parent;
            end_statement();
        }
        return prog;
    }

private:
    LayerStatement layer_statement(LayerLabel expected_label, LayerLabel last_parent) {
        LayerStatement st;
        const Lexeme& name = expect(Tok::Ident);
        const auto label = layer_label(name.text);
        if (!label) throw ParseError(name.line, name.column, "expected a layer label like L1, got '" + name.text + "'");
        if (*label != expected_label)
            throw ParseError(name.line, name.column,
                             "layer labels must be consecutive: expected L" + std::to_string(expected_label));
        st.label = *label;
        expect(Tok::Equals);
        expect_ident("layer");
        expect(Tok::LParen);

        expect_ident("parent");
        expect(Tok::Equals);
        const Lexeme& ref = next();
        if (ref.kind == Tok::Phi) {
            st.parent = kGround;
        } else if (ref.kind == Tok::Ident && layer_label(ref.text)) {
            st.parent = *layer_label(ref.text);
            if (st.parent >= st.label)
                throw ParseError(ref.line, ref.column, "undeclared parent reference " + ref.text);
        } else {
            throw ParseError(ref.line, ref.column, "expected parent reference (\xCE\xA6 or Lk), got " + quote(ref));
        }
        if (st.parent < last_parent)
            throw ParseError(ref.line, ref.column, "statement order is not breadth-first (parent precedes L" +
                                                       std::to_string(last_parent) + ")");
        expect(Tok::Comma);

        expect_ident("h");
        expect(Tok::Equals);
        const Lexeme& h = expect(Tok::Number);
        if (!(h.number > 0.0)) throw ParseError(h.line, h.column, "non-positive height");
        st.height = h.number;
        expect(Tok::Comma);

        expect_ident("c");
        expect(Tok::Equals);
        const Lexeme& open = expect(Tok::LBracket);
        for (;;) {
            expect(Tok::LParen);
            const double x = expect(Tok::Number).number;
            expect(Tok::Comma);
            const double y = expect(Tok::Number).number;
            expect(Tok::RParen);
            st.contour.vertices.push_back({x, y});
            if (peek().kind == Tok::Comma) {
                next();
                continue;
            }
            expect(Tok::RBracket);
            break;
        }
        expect(Tok::RParen);

        if (st.contour.size() < 3) throw ParseError(open.line, open.column, "polygon has fewer than 3 vertices");
        for (std::size_t i = 0; i < st.contour.size(); ++i)
            if (st.contour[i] == st.contour.next(i))
                throw ParseError(open.line, open.column, "polygon has duplicate consecutive vertices");
        if (!is_simple(st.contour)) throw ParseError(open.line, open.column, "non-simple polygon");
        st.contour = to_ccw(st.contour);
        return st;
    }

    void end_statement() {
        const Lexeme& t = peek();
        if (t.kind == Tok::End) return;
        if (t.kind != Tok::Newline) throw ParseError(t.line, t.column, "expected end of line, got " + quote(t));
        skip_newlines();
    }

    void skip_newlines() {
        while (peek().kind == Tok::Newline) ++pos_;
    }

    const Lexeme& peek() const { return toks_[pos_]; }
    const Lexeme& next() {
        const Lexeme& t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }

    const Lexeme& expect(Tok kind) {
        const Lexeme& t = next();
        if (t.kind != kind) throw ParseError(t.line, t.column, std::string("expected ") + describe(kind) + ", got " + quote(t));
        return t;
    }

    const Lexeme& expect_ident(const char* word) {
        const Lexeme& t = next();
        if (t.kind != Tok::Ident || t.text != word)
            throw ParseError(t.line, t.column, std::string("expected '") + word + "', got " + quote(t));
        return t;
    }

    static std::string quote(const Lexeme& t) {
        if (t.kind == Tok::Newline || t.kind == Tok::End) return describe(t.kind);
        return "'" + t.text + "'";
    }

    std::vector<Lexeme> toks_;
    std::size_t pos_ = 0;
};

} // namespace

Program parse_program(std::string_view text) {
    return Parser(Lexer(text).run()).run();
}

std::string format_scalar(double v, bool exact) {
    char buf[64];
    for (int digits = 2; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        if (!exact || std::strtod(buf, nullptr) == v) break;
    }
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

std::string print_program(const Program& p, bool exact) {
    std::string out = "ground = " + format_scalar(p.ground, exact) + "\n";
    for (const LayerStatement& st : p.layers) {
        out += "L" + std::to_string(st.label) + " = layer(parent=";
        out += st.parent == kGround ? std::string("\xCE\xA6") : "L" + std::to_string(st.parent);
        out += ", h=" + format_scalar(st.height, exact) + ", c=[";
        for (std::size_t i = 0; i < st.contour.size(); ++i) {
            if (i) out += ",";
            out += "(" + format_scalar(st.contour[i].x, exact) + "," + format_scalar(st.contour[i].y, exact) + ")";
        }
        out += "])\n";
    }
    return out;
}

std::vector<std::ptrdiff_t> ArchTree::parents() const {
    std::vector<std::ptrdiff_t> parent(nodes.size(), -2);
    auto claim = [&](std::size_t child, std::ptrdiff_t by) {
        if (child >= nodes.size()) throw StructureError("child index " + std::to_string(child) + " out of range");
        if (parent[child] != -2) throw StructureError("node " + std::to_string(child) + " has more than one parent");
        parent[child] = by;
    };
    for (std::size_t r : roots) claim(r, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t c : nodes[i].children) claim(c, static_cast<std::ptrdiff_t>(i));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (parent[i] == -2) throw StructureError("node " + std::to_string(i) + " has no parent");
    // Every node has exactly one parent; a cycle would leave its members unreachable from the roots.
    std::vector<char> seen(nodes.size(), 0);
    std::deque<std::size_t> queue(roots.begin(), roots.end());
    std::size_t reached = 0;
    while (!queue.empty()) {
        const std::size_t n = queue.front();
        queue.pop_front();
        if (seen[n]) throw StructureError("cycle through node " + std::to_string(n));
        seen[n] = 1;
        ++reached;
        for (std::size_t c : nodes[n].children) queue.push_back(c);
    }
    if (reached != nodes.size()) throw StructureError("tree contains a cycle unreachable from the ground");
    return parent;
}

std::vector<int> ArchTree::depths() const {
    const auto parent = parents();
    std::vector<int> depth(nodes.size(), 0);
    std::deque<std::size_t> queue(roots.begin(), roots.end());
    for (std::size_t r : roots) depth[r] = 1;
    while (!queue.empty()) {
        const std::size_t n = queue.front();
        queue.pop_front();
        for (std::size_t c : nodes[n].children) {
            depth[c] = depth[n] + 1;
            queue.push_back(c);
        }
    }
    return depth;
}

TreeForm program_to_tree(const Program& p) {
    TreeForm out;
    out.ground = p.ground;
    out.tree.nodes.reserve(p.layers.size());
    for (const LayerStatement& st : p.layers) out.tree.nodes.push_back({st.height, st.contour, {}});
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        const LayerLabel parent = p.layers[i].parent;
        if (parent == kGround)
            out.tree.roots.push_back(i);
        else
            out.tree.nodes[static_cast<std::size_t>(parent - 1)].children.push_back(i);
    }
    return out;
}

Program tree_to_program(double ground, const ArchTree& tree) {
    tree.parents(); // structural validation
    Program p;
    p.ground = ground;
    std::vector<LayerLabel> label(tree.nodes.size(), 0);
    std::deque<std::pair<std::size_t, LayerLabel>> queue;
    for (std::size_t r : tree.roots) queue.emplace_back(r, kGround);
    while (!queue.empty()) {
        const auto [n, parent] = queue.front();
        queue.pop_front();
        const LayerLabel mine = static_cast<LayerLabel>(p.layers.size()) + 1;
        label[n] = mine;
        p.layers.push_back({mine, parent, tree.nodes[n].height, tree.nodes[n].contour});
        for (std::size_t c : tree.nodes[n].children) queue.emplace_back(c, mine);
    }
    return p;
}

std::string Diagnostic::to_string() const {
    return rule + " @ " + (statement == 0 ? std::string("ground") : "L" + std::to_string(statement));
}

std::vector<Diagnostic> validate_program(const Program& p) {
    std::vector<Diagnostic> out;
    if (!(p.ground >= -1.0 && p.ground <= 1.0)) out.push_back({0, "ground z outside [-1, 1]"});
    LayerLabel last_parent = kGround;
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        const LayerStatement& st = p.layers[i];
        const LayerLabel where = static_cast<LayerLabel>(i) + 1;
        if (st.label != where) out.push_back({where, "non-canonical label L" + std::to_string(st.label)});
        if (st.parent < kGround || st.parent >= where) {
            out.push_back({where, "undeclared parent"});
        } else {
            if (st.parent < last_parent) out.push_back({where, "statement order is not breadth-first"});
            last_parent = st.parent;
        }
        if (!(st.height > 0.0)) out.push_back({where, "non-positive height"});
        const Polygon2D& c = st.contour;
        if (c.size() < 3) {
            out.push_back({where, "fewer than 3 vertices"});
            continue;
        }
        bool dup = false;
        for (std::size_t k = 0; k < c.size(); ++k) dup = dup || c[k] == c.next(k);
        if (dup) out.push_back({where, "duplicate consecutive vertices"});
        if (!is_simple(c))
            out.push_back({where, "non-simple polygon"});
        else if (signed_area(c) <= 0.0)
            out.push_back({where, "clockwise contour"});
    }
    return out;
}

} // namespace archprog
