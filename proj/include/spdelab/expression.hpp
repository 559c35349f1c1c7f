#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spdelab {

/// Parse error with 1-based position inside the expression text.
struct ExprError : std::runtime_error {
    int column;
    ExprError(const std::string& msg, int col)
        : std::runtime_error(msg + " (column " + std::to_string(col) + ")"), column(col) {}
};

/// Arithmetic expression over named variables with the usual operators
/// (+ - * / ^, unary -), constants pi and e, and functions
/// sin cos tan sinh cosh tanh exp log sqrt abs floor min max pow.
/// Compiled once; evaluation is reentrant.
class Expression {
public:
    /// `variables` fixes the allowed names and their slot order for eval().
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);

    double eval(const std::vector<double>& values) const;
    const std::string& text() const { return text_; }
    const std::vector<std::string>& variables() const { return vars_; }

    Expression() = default;

    struct Node;  // exposed for the parser implementation

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::vector<std::string> vars_;
};

}  // namespace spdelab
