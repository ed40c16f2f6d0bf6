#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "infobs/grid.hpp"

namespace infobs {

/// Scalar expression in the point coordinates, used for payoffs and obstacles.
///
/// Grammar (whitespace insignificant):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('+' | '-') unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'x' | 'y' | 'r' | 'pi'
///              | func '(' expr (',' expr)* ')'
///              | '(' expr ')' | '|' expr '|'
///     func    := abs | sqrt | min | max
///
/// `r` is the Euclidean norm of the point and `|e|` is shorthand for abs(e).
/// `min` and `max` take two or more arguments.
class Expression {
public:
    struct Node;

    Expression() = default;
    /// Throws ProblemError with the character position of the first syntax error.
    static Expression parse(std::string_view text);
    static Expression constant(double value);

    double operator()(const Point& p) const;
    const std::string& source() const noexcept { return source_; }
    bool empty() const noexcept { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace infobs
