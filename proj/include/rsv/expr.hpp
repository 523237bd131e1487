#pragma once

#include <memory>
#include <string>
#include <vector>

namespace rsv {

// Arithmetic expressions over named variables:
//   + - * / ^ (right associative), unary minus, parentheses, decimal numbers,
//   sin cos tan exp log sqrt, and the constant pi.
// Variable names are bound at parse time to positions in the evaluation array.
class Expression {
public:
    struct Node;

    // Throws ConfigError with the offending position on a syntax error or an
    // unknown identifier.
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);

    double operator()(const std::vector<double>& values) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace rsv
