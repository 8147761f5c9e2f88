#ifndef KLA_PARSER_HPP
#define KLA_PARSER_HPP

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "kla/presentation.hpp"

namespace kla {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l), col(c) {}
};

namespace detail {

struct Token {
    enum Kind { Name, Number, Punct, Newline, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : s_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        // skip spaces and comments; newlines are tokens
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++i_; ++col_;
            } else break;
        }
        if (i_ >= s_.size()) {
            tok_ = {Token::End, "", line_, col_};
            return;
        }
        char c = s_[i_];
        int l = line_, co = col_;
        if (c == '\n') {
            ++i_; ++line_; col_ = 1;
            tok_ = {Token::Newline, "\\n", l, co};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\''))
                ++j;
            tok_ = {Token::Name, s_.substr(i_, j - i_), l, co};
            col_ += static_cast<int>(j - i_);
            i_ = j;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_ = {Token::Number, s_.substr(i_, j - i_), l, co};
            col_ += static_cast<int>(j - i_);
            i_ = j;
            return;
        }
        tok_ = {Token::Punct, std::string(1, c), l, co};
        ++i_; ++col_;
    }

    std::string s_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{Token::End, "", 1, 1};
};

[[noreturn]] inline void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg);
}

inline void skip_blank_lines(Lexer& lx) {
    while (lx.peek().kind == Token::Newline) lx.next();
}

inline Token expect_name(Lexer& lx, const std::string& what) {
    Token t = lx.next();
    if (t.kind != Token::Name) fail(t, "expected " + what);
    return t;
}

inline void expect_keyword(Lexer& lx, const std::string& kw) {
    Token t = lx.next();
    if (t.kind != Token::Name || t.text != kw) fail(t, "expected '" + kw + "'");
}

inline void expect_punct(Lexer& lx, char c) {
    Token t = lx.next();
    if (t.kind != Token::Punct || t.text[0] != c)
        fail(t, std::string("expected '") + c + "'");
}

inline void expect_line_end(Lexer& lx) {
    Token t = lx.next();
    if (t.kind != Token::Newline && t.kind != Token::End) fail(t, "expected end of line");
}

inline long expect_posint(Lexer& lx, const std::string& what) {
    Token t = lx.next();
    if (t.kind != Token::Number) fail(t, "expected " + what);
    long v = std::stol(t.text);
    if (v <= 0) fail(t, what + " must be positive");
    return v;
}

/// Evaluated subexpression: a homogeneous tensor polynomial, or zero (which
/// carries no degree of its own).
template <scalar K>
struct EvalVal {
    bool zero = true;
    int degree = 0;
    TPoly<K> t;
    Token at;
};

template <scalar K>
class ExprParser {
public:
    ExprParser(Lexer& lx, const FieldSpec& fs, const GeneratorSet& gens)
        : lx_(lx), fs_(fs), gens_(gens) {}

    EvalVal<K> parse_expr() {
        Token start = lx_.peek();
        bool neg = false;
        if (is_punct('-')) { lx_.next(); neg = true; }
        else if (is_punct('+')) lx_.next();
        EvalVal<K> acc = parse_term();
        if (neg) scale_long(acc, -1);
        acc.at = start;
        while (is_punct('+') || is_punct('-')) {
            bool minus = lx_.peek().text[0] == '-';
            Token op = lx_.next();
            EvalVal<K> rhs = parse_term();
            if (minus) scale_long(rhs, -1);
            add(acc, rhs, op);
        }
        return acc;
    }

private:
    bool is_punct(char c) const {
        return lx_.peek().kind == Token::Punct && lx_.peek().text[0] == c;
    }

    EvalVal<K> parse_term() {
        Rat coeff(1);
        bool have_coeff = false;
        if (lx_.peek().kind == Token::Number) {
            long num = std::stol(lx_.next().text);
            long den = 1;
            if (is_punct('/')) {
                lx_.next();
                Token d = lx_.next();
                if (d.kind != Token::Number) fail(d, "expected denominator");
                den = std::stol(d.text);
                if (den <= 0) fail(d, "denominator must be positive");
            }
            coeff = rat(num, den);
            have_coeff = true;
            expect_punct(lx_, '*');
        }
        EvalVal<K> v = parse_atom();
        if (have_coeff) {
            if (sgn(coeff) == 0) { v.zero = true; v.t.clear(); }
            else scale(v, Field<K>::from_rat(fs_, coeff));
        }
        return v;
    }

    EvalVal<K> parse_atom() {
        Token t = lx_.peek();
        if (t.kind == Token::Name) {
            lx_.next();
            int g = gens_.find(t.text);
            if (g < 0) fail(t, "unknown generator '" + t.text + "'");
            EvalVal<K> v;
            v.zero = false;
            v.degree = gens_.degrees[g];
            v.t[Word(1, char(g))] = Field<K>::one(fs_);
            v.at = t;
            return v;
        }
        if (t.kind == Token::Punct && t.text[0] == '[') {
            lx_.next();
            EvalVal<K> a = parse_expr();
            expect_punct(lx_, ',');
            EvalVal<K> b = parse_expr();
            Token close = lx_.next();
            if (close.kind != Token::Punct || close.text[0] != ']')
                fail(close, "unclosed bracket");
            return commutator(a, b, t);
        }
        fail(t, "expected a generator or '['");
    }

    void scale(EvalVal<K>& v, const K& c) {
        if (v.zero) return;
        TPoly<K> out;
        for (auto& [w, x] : v.t) {
            K y = x * c;
            if (!Field<K>::is_zero(y)) out.emplace(w, y);
        }
        v.t = std::move(out);
        if (v.t.empty()) v.zero = true;
    }

    void scale_long(EvalVal<K>& v, long c) { scale(v, Field<K>::from_long(fs_, c)); }

    void add(EvalVal<K>& a, const EvalVal<K>& b, const Token& at) {
        if (b.zero) return;
        if (a.zero) { a = b; return; }
        if (a.degree != b.degree)
            fail(at, "inhomogeneous sum: degrees " + std::to_string(a.degree) + " and " +
                         std::to_string(b.degree));
        for (auto& [w, x] : b.t) {
            auto it = a.t.find(w);
            if (it == a.t.end()) a.t.emplace(w, x);
            else {
                it->second = it->second + x;
                if (Field<K>::is_zero(it->second)) a.t.erase(it);
            }
        }
        if (a.t.empty()) a.zero = true;
    }

    EvalVal<K> commutator(const EvalVal<K>& a, const EvalVal<K>& b, const Token& at) {
        EvalVal<K> r;
        r.at = at;
        if (a.zero || b.zero) return r;
        r.zero = false;
        r.degree = a.degree + b.degree;
        for (auto& [wa, ca] : a.t)
            for (auto& [wb, cb] : b.t) {
                K c = ca * cb;
                upd(r.t, wa + wb, c);
                upd(r.t, wb + wa, -c);
            }
        if (r.t.empty()) r.zero = true;
        return r;
    }

    static void upd(TPoly<K>& t, const Word& w, const K& c) {
        auto it = t.find(w);
        if (it == t.end()) {
            if (!Field<K>::is_zero(c)) t.emplace(w, c);
        } else {
            it->second = it->second + c;
            if (Field<K>::is_zero(it->second)) t.erase(it);
        }
    }

    Lexer& lx_;
    const FieldSpec& fs_;
    const GeneratorSet& gens_;
};

} // namespace detail

/// Field named in a presentation header (default: rationals).
inline FieldSpec peek_field(const std::string& text) {
    detail::Lexer lx(text);
    detail::skip_blank_lines(lx);
    detail::expect_keyword(lx, "algebra");
    detail::expect_name(lx, "algebra name");
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);
    if (lx.peek().kind == detail::Token::Name && lx.peek().text == "field") {
        lx.next();
        detail::Token t = lx.next();
        if (t.kind != detail::Token::Name) detail::fail(t, "expected field kind");
        if (t.text == "rational") return FieldSpec::rationals();
        if (t.text == "gf") {
            detail::expect_punct(lx, '(');
            long p = detail::expect_posint(lx, "field characteristic");
            detail::expect_punct(lx, ')');
            try {
                return FieldSpec::prime(static_cast<std::uint32_t>(p));
            } catch (const DomainError& e) {
                detail::fail(t, e.what());
            }
        }
        detail::fail(t, "expected 'rational' or 'gf(p)'");
    }
    return FieldSpec::rationals();
}

template <scalar K>
Presentation<K> parse_presentation(const std::string& text) {
    FieldSpec fs = peek_field(text); // validates the header too
    detail::Lexer lx(text);
    detail::skip_blank_lines(lx);
    detail::expect_keyword(lx, "algebra");
    std::string name = detail::expect_name(lx, "algebra name").text;
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);
    if (lx.peek().kind == detail::Token::Name && lx.peek().text == "field") {
        while (lx.peek().kind != detail::Token::Newline && lx.peek().kind != detail::Token::End)
            lx.next();
        detail::expect_line_end(lx);
        detail::skip_blank_lines(lx);
    }

    detail::expect_keyword(lx, "generators");
    GeneratorSet gens;
    while (true) {
        detail::Token n = detail::expect_name(lx, "generator name");
        detail::expect_punct(lx, ':');
        long d = detail::expect_posint(lx, "generator degree");
        try {
            gens.add(n.text, static_cast<int>(d));
        } catch (const UsageError& e) {
            detail::fail(n, e.what());
        }
        if (lx.peek().kind == detail::Token::Punct && lx.peek().text[0] == ',') {
            lx.next();
            continue;
        }
        break;
    }
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);

    detail::expect_keyword(lx, "relations");
    Presentation<K> p(name, fs, gens);
    if (lx.peek().kind != detail::Token::Newline && lx.peek().kind != detail::Token::End) {
        while (true) {
            detail::ExprParser<K> ep(lx, fs, gens);
            detail::EvalVal<K> v = ep.parse_expr();
            if (v.zero) detail::fail(v.at, "relation is identically zero");
            if (v.degree < 2)
                detail::fail(v.at, "relation has degree " + std::to_string(v.degree) +
                                      "; degree-1 relations belong in a quotient, not a presentation");
            LieElem<K> e;
            e.degree = v.degree;
            e.coords = p.free->normalize(fs, v.degree, std::move(v.t));
            if (e.is_zero()) detail::fail(v.at, "relation is identically zero");
            p.relations.push_back(std::move(e));
            if (lx.peek().kind == detail::Token::Punct && lx.peek().text[0] == ';') {
                lx.next();
                continue;
            }
            break;
        }
    }
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);
    detail::Token t = lx.next();
    if (t.kind != detail::Token::End) detail::fail(t, "unexpected trailing input");
    return p;
}

inline GraphSpec parse_graph(const std::string& text) {
    detail::Lexer lx(text);
    detail::skip_blank_lines(lx);
    detail::expect_keyword(lx, "graph");
    GraphSpec g;
    g.name = detail::expect_name(lx, "graph name").text;
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);

    detail::expect_keyword(lx, "vertices");
    while (lx.peek().kind == detail::Token::Name) {
        detail::Token v = lx.next();
        try {
            g.add_vertex(v.text);
        } catch (const UsageError& e) {
            detail::fail(v, e.what());
        }
    }
    if (g.n() == 0) detail::fail(lx.peek(), "expected at least one vertex");
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);

    detail::expect_keyword(lx, "edges");
    while (lx.peek().kind == detail::Token::Name) {
        detail::Token a = lx.next();
        detail::expect_punct(lx, '-');
        detail::Token b = detail::expect_name(lx, "edge endpoint");
        int ia = g.find(a.text), ib = g.find(b.text);
        if (ia < 0) detail::fail(a, "undeclared vertex '" + a.text + "'");
        if (ib < 0) detail::fail(b, "undeclared vertex '" + b.text + "'");
        try {
            g.add_edge(ia, ib);
        } catch (const UsageError& e) {
            detail::fail(a, e.what());
        }
    }
    detail::expect_line_end(lx);
    detail::skip_blank_lines(lx);
    detail::Token t = lx.next();
    if (t.kind != detail::Token::End) detail::fail(t, "unexpected trailing input");
    return g;
}

/// Canonical source text; parse(render(p)) == p.
template <scalar K>
std::string render(const Presentation<K>& p) {
    std::ostringstream os;
    os << "algebra " << (p.name.empty() ? "unnamed" : p.name) << "\n";
    os << "field " << p.field.str() << "\n";
    os << "generators ";
    for (int i = 0; i < p.gens.size(); ++i) {
        if (i) os << ", ";
        os << p.gens.names[i] << ":" << p.gens.degrees[i];
    }
    os << "\n";
    os << "relations ";
    bool first_rel = true;
    for (const auto& r : p.relations) {
        if (!first_rel) os << "; ";
        first_rel = false;
        bool first = true;
        for (auto& [i, c] : r.coords) {
            std::string cs = Field<K>::str(c);
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            first = false;
            if (cs != "1") os << cs << "*";
            os << p.free->bracketing_str(p.free->basis(r.degree)[i]);
        }
    }
    os << "\n";
    return os.str();
}

inline std::string render(const GraphSpec& g) {
    std::ostringstream os;
    os << "graph " << (g.name.empty() ? "unnamed" : g.name) << "\n";
    os << "vertices";
    for (auto& v : g.vertices) os << " " << v;
    os << "\nedges";
    for (auto& [a, b] : g.edges) os << " " << g.vertices[a] << "-" << g.vertices[b];
    os << "\n";
    return os.str();
}

} // namespace kla

#endif
