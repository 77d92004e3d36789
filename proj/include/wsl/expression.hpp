#pragma once

#include <map>
#include <memory>
#include <string>

#include "wsl/errors.hpp"

namespace wsl {

/// A parsed arithmetic expression in named variables.
///
/// Grammar: numbers, variables, `pi`/`e`, unary minus, `+ - * / ^`,
/// parentheses, and the functions sin cos tan asin acos atan sinh cosh tanh
/// exp log sqrt abs floor min max pow.  `^` is right-associative.
class Expression {
public:
    static Expression parse(const std::string& text);

    double eval(const std::map<std::string, double>& vars) const;

    /// Convenience for profile expressions in the arclength variable.
    double eval_s(double s) const { return eval({{"s", s}}); }

    const std::string& text() const { return text_; }

    Expression(const Expression&);
    Expression(Expression&&) noexcept;
    Expression& operator=(Expression);
    ~Expression();

    struct Node;

private:
    explicit Expression(std::shared_ptr<const Node> root, std::string text);
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace wsl
