#include "dbz/expr.hpp"

#include <array>
#include <cctype>
#include <optional>

#include "json.hpp"

namespace dbz {

std::string_view fn_name(FnKind kind) noexcept {
    switch (kind) {
        case FnKind::Sin: return "sin";
        case FnKind::Cos: return "cos";
        case FnKind::Tan: return "tan";
        case FnKind::Exp: return "exp";
        case FnKind::Log: return "log";
    }
    return "?";
}

bool is_reserved_name(std::string_view name) noexcept {
    static constexpr std::array<std::string_view, 8> kReserved = {"pi", "i", "sin", "cos", "tan", "exp", "log", "sqrt"};
    for (auto r : kReserved)
        if (r == name) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Construction

Expr Expr::constant(Scalar value) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Const, std::move(value), {}, {}, {}, {}}));
}

Expr Expr::pi() { return Expr(std::make_shared<const Node>(Node{NodeKind::Pi, {}, {}, {}, {}, {}})); }

Expr Expr::var(std::string name) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Var, {}, std::move(name), {}, {}, {}}));
}

Expr Expr::neg(Expr x) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Neg, {}, {}, {}, {}, {std::move(x)}}));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{kind, {}, {}, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::pow(Expr base, Rational exponent) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Pow, {}, {}, std::move(exponent), {}, {std::move(base)}}));
}

Expr Expr::fn(FnKind kind, Expr arg) {
    return Expr(std::make_shared<const Node>(Node{NodeKind::Fn, {}, {}, {}, kind, {std::move(arg)}}));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case NodeKind::Const: return x.value == y.value;
        case NodeKind::Pi: return true;
        case NodeKind::Var: return x.name == y.name;
        case NodeKind::Pow:
            if (x.exponent != y.exponent) return false;
            break;
        case NodeKind::Fn:
            if (x.fn != y.fn) return false;
            break;
        default: break;
    }
    return x.args == y.args;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(NodeKind::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(NodeKind::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(NodeKind::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(NodeKind::Div, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ == src_.size()) return {Tok::End, {}, start};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                if (pos_ == src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    throw SyntaxError(pos_, "expected digits after decimal point");
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            return {Tok::Number, src_.substr(start, pos_ - start), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, src_.substr(start, pos_ - start), start};
        }
        ++pos_;
        switch (c) {
            case '+': return {Tok::Plus, src_.substr(start, 1), start};
            case '-': return {Tok::Minus, src_.substr(start, 1), start};
            case '*': return {Tok::Star, src_.substr(start, 1), start};
            case '/': return {Tok::Slash, src_.substr(start, 1), start};
            case '^': return {Tok::Caret, src_.substr(start, 1), start};
            case '(': return {Tok::LParen, src_.substr(start, 1), start};
            case ')': return {Tok::RParen, src_.substr(start, 1), start};
            default: break;
        }
        throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

std::optional<FnKind> lookup_fn(std::string_view name) {
    if (name == "sin") return FnKind::Sin;
    if (name == "cos") return FnKind::Cos;
    if (name == "tan") return FnKind::Tan;
    if (name == "exp") return FnKind::Exp;
    if (name == "log") return FnKind::Log;
    return std::nullopt;
}

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    Expr parse_all() {
        if (cur_.kind == Tok::End) throw SyntaxError(cur_.pos, "empty expression");
        Expr e = expr();
        if (cur_.kind != Tok::End) throw SyntaxError(cur_.pos, "unexpected " + describe(cur_));
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind) throw SyntaxError(cur_.pos, std::string("expected ") + what + ", found " + describe(cur_));
        Token t = cur_;
        advance();
        return t;
    }

    Expr expr() {
        Expr lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = Expr::binary(k, std::move(lhs), term());
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = Expr::binary(k, std::move(lhs), factor());
        }
        return lhs;
    }

    Expr factor() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return Expr::neg(factor());
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (cur_.kind != Tok::Caret) return base;
        advance();
        return Expr::pow(std::move(base), exponent());
    }

    static Rational integer_literal(const Token& t) {
        if (t.text.find('.') != std::string_view::npos)
            throw SyntaxError(t.pos, "exponent must be an integer");
        return Rational::parse(t.text);
    }

    Rational exponent() {
        if (cur_.kind == Tok::Number) {
            Token t = cur_;
            advance();
            return integer_literal(t);
        }
        if (cur_.kind != Tok::LParen)
            throw SyntaxError(cur_.pos, "exponent must be an integer or a parenthesized rational, found " + describe(cur_));
        advance();
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            negative = true;
            advance();
        }
        Rational value = integer_literal(expect(Tok::Number, "integer"));
        if (cur_.kind == Tok::Slash) {
            advance();
            Token den = expect(Tok::Number, "integer");
            Rational d = integer_literal(den);
            if (d.is_zero()) throw SyntaxError(den.pos, "zero denominator in exponent");
            value = value / d;
        }
        expect(Tok::RParen, "')'");
        return negative ? -value : value;
    }

    Expr atom() {
        Token t = cur_;
        switch (t.kind) {
            case Tok::Number:
                advance();
                return Expr::constant(Scalar(Rational::parse(t.text)));
            case Tok::LParen: {
                advance();
                Expr inner = expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident: {
                advance();
                if (cur_.kind == Tok::LParen) {
                    auto fn = lookup_fn(t.text);
                    bool is_sqrt = t.text == "sqrt";
                    if (!fn && !is_sqrt) throw SyntaxError(t.pos, "unknown function '" + std::string(t.text) + "'");
                    advance();
                    Expr arg = expr();
                    expect(Tok::RParen, "')'");
                    if (is_sqrt) return Expr::pow(std::move(arg), Rational(1, 2));
                    return Expr::fn(*fn, std::move(arg));
                }
                if (t.text == "pi") return Expr::pi();
                if (t.text == "i") return Expr::constant(Scalar(ComplexRational(0, 1)));
                if (lookup_fn(t.text) || t.text == "sqrt")
                    throw SyntaxError(cur_.pos, "expected '(' after '" + std::string(t.text) + "'");
                return Expr::var(std::string(t.text));
            }
            default: break;
        }
        throw SyntaxError(t.pos, "unexpected " + describe(t));
    }

    Lexer lex_;
    Token cur_{Tok::End, {}, 0};
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Tree utilities

namespace {

template <class Leaf>
Expr rebuild(const Expr& e, const Leaf& leaf) {
    const Node& n = e.node();
    switch (n.kind) {
        case NodeKind::Var: return leaf(e);
        case NodeKind::Const:
        case NodeKind::Pi: return e;
        case NodeKind::Neg: return Expr::neg(rebuild(n.args[0], leaf));
        case NodeKind::Pow: return Expr::pow(rebuild(n.args[0], leaf), n.exponent);
        case NodeKind::Fn: return Expr::fn(n.fn, rebuild(n.args[0], leaf));
        default: return Expr::binary(n.kind, rebuild(n.args[0], leaf), rebuild(n.args[1], leaf));
    }
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
    return rebuild(e, [&](const Expr& v) {
        auto it = bindings.find(v.node().name);
        return it == bindings.end() ? v : Expr::constant(it->second);
    });
}

Expr replace_var(const Expr& e, std::string_view name, const Expr& replacement) {
    return rebuild(e, [&](const Expr& v) { return v.node().name == name ? replacement : v; });
}

std::set<std::string, std::less<>> free_vars(const Expr& e) {
    std::set<std::string, std::less<>> out;
    rebuild(e, [&](const Expr& v) {
        out.insert(v.node().name);
        return v;
    });
    return out;
}

namespace {

bool terminating_decimal(const Rational& r) {
    mpz_class d = r.denominator();
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

std::string decimal_text(const Rational& r) {
    if (r.is_integer()) return r.str();
    // Smallest k with r * 10^k integral.
    mpz_class scale = 1;
    std::size_t digits = 0;
    while ((r * Rational(scale, mpz_class(1))).denominator() != 1) {
        scale *= 10;
        ++digits;
    }
    std::string n = (r * Rational(scale, mpz_class(1))).numerator().get_str();
    if (n.size() <= digits) n.insert(0, digits - n.size() + 1, '0');
    n.insert(n.size() - digits, ".");
    return n;
}

std::string render_rational(const Rational& r) {
    if (r.sign() >= 0 && terminating_decimal(r)) return decimal_text(r);
    return "(" + r.str() + ")";
}

std::string render_const(const Scalar& v) {
    if (auto r = v.as_rational()) return render_rational(*r);
    if (!v.is_exact()) {
        const BigFloatComplex& f = v.floating();
        std::string re = "(" + f.re.str() + ")";
        if (f.im.is_zero()) return re;
        return "(" + re + " + (" + f.im.str() + ") * i)";
    }
    const ComplexRational& c = v.exact();
    std::string im = c.im == Rational(1) ? "i" : render_rational(c.im) + " * i";
    if (c.re.is_zero()) return c.im == Rational(1) ? im : "(" + im + ")";
    return "(" + render_rational(c.re) + " + " + im + ")";
}

std::string render_exponent(const Rational& r) {
    if (r.is_integer() && r.sign() >= 0) return r.str();
    return "(" + r.str() + ")";
}

}  // namespace

std::string render(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case NodeKind::Const: return render_const(n.value);
        case NodeKind::Pi: return "pi";
        case NodeKind::Var: return n.name;
        case NodeKind::Neg: return "-(" + render(n.args[0]) + ")";
        case NodeKind::Pow: return "(" + render(n.args[0]) + ")^" + render_exponent(n.exponent);
        case NodeKind::Fn: return std::string(fn_name(n.fn)) + "(" + render(n.args[0]) + ")";
        case NodeKind::Add: return "(" + render(n.args[0]) + " + " + render(n.args[1]) + ")";
        case NodeKind::Sub: return "(" + render(n.args[0]) + " - " + render(n.args[1]) + ")";
        case NodeKind::Mul: return "(" + render(n.args[0]) + " * " + render(n.args[1]) + ")";
        case NodeKind::Div: return "(" + render(n.args[0]) + " / " + render(n.args[1]) + ")";
    }
    return {};
}

namespace {

nlohmann::ordered_json json_of(const Expr& e) {
    using J = nlohmann::ordered_json;
    const Node& n = e.node();
    auto pair = [&](const char* key) { return J{{key, J::array({json_of(n.args[0]), json_of(n.args[1])})}}; };
    switch (n.kind) {
        case NodeKind::Const: return J{{"const", n.value.str()}};
        case NodeKind::Pi: return J{{"const", "pi"}};
        case NodeKind::Var: return J{{"var", n.name}};
        case NodeKind::Neg: return J{{"neg", json_of(n.args[0])}};
        case NodeKind::Add: return pair("add");
        case NodeKind::Sub: return pair("sub");
        case NodeKind::Mul: return pair("mul");
        case NodeKind::Div: return pair("div");
        case NodeKind::Pow: return J{{"pow", J{{"base", json_of(n.args[0])}, {"exp", n.exponent.str()}}}};
        case NodeKind::Fn: return J{{std::string(fn_name(n.fn)), json_of(n.args[0])}};
    }
    return {};
}

}  // namespace

std::string to_json(const Expr& e) { return json_of(e).dump(); }

}  // namespace dbz
