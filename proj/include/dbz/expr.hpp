#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dbz/scalar.hpp"

namespace dbz {

enum class NodeKind { Const, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Fn };
enum class FnKind { Sin, Cos, Tan, Exp, Log };

std::string_view fn_name(FnKind kind) noexcept;

struct Node;

/// Immutable expression tree handle. Copies share structure.
class Expr {
public:
    static Expr constant(Scalar value);
    static Expr pi();
    static Expr var(std::string name);
    static Expr neg(Expr x);
    static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
    static Expr pow(Expr base, Rational exponent);
    static Expr fn(FnKind kind, Expr arg);

    const Node& node() const noexcept { return *node_; }
    NodeKind kind() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    NodeKind kind;
    Scalar value;          // Const
    std::string name;      // Var
    Rational exponent;     // Pow
    FnKind fn{};           // Fn
    std::vector<Expr> args;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);

/// Parameter values keyed by variable name.
using Bindings = std::map<std::string, Scalar, std::less<>>;

/// Parses the expression grammar; throws SyntaxError with a 0-based position.
Expr parse(std::string_view text);

/// Replaces each bound variable by a constant. No folding.
Expr substitute(const Expr& e, const Bindings& bindings);

/// Replaces every occurrence of variable `name` by `replacement`.
Expr replace_var(const Expr& e, std::string_view name, const Expr& replacement);

std::set<std::string, std::less<>> free_vars(const Expr& e);

/// Fully parenthesized text that parses back to the same tree for any tree
/// the parser can produce.
std::string render(const Expr& e);

/// Canonical compact JSON form, e.g. {"add":[{"var":"z"},{"const":"1"}]}.
std::string to_json(const Expr& e);

bool is_reserved_name(std::string_view name) noexcept;

}  // namespace dbz
