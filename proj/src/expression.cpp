#include "spdelab/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace spdelab {

struct Expression::Node {
    enum class Op {
        Const, Var, Add, Sub, Mul, Div, Pow, Neg,
        Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs, Floor,
        Min, Max, Pow2,
    };
    Op op;
    double value = 0.0;
    int slot = -1;
    std::shared_ptr<const Node> a, b;

    double eval(const std::vector<double>& v) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var: return v[slot];
            case Op::Add: return a->eval(v) + b->eval(v);
            case Op::Sub: return a->eval(v) - b->eval(v);
            case Op::Mul: return a->eval(v) * b->eval(v);
            case Op::Div: return a->eval(v) / b->eval(v);
            case Op::Pow: return std::pow(a->eval(v), b->eval(v));
            case Op::Neg: return -a->eval(v);
            case Op::Sin: return std::sin(a->eval(v));
            case Op::Cos: return std::cos(a->eval(v));
            case Op::Tan: return std::tan(a->eval(v));
            case Op::Sinh: return std::sinh(a->eval(v));
            case Op::Cosh: return std::cosh(a->eval(v));
            case Op::Tanh: return std::tanh(a->eval(v));
            case Op::Exp: return std::exp(a->eval(v));
            case Op::Log: return std::log(a->eval(v));
            case Op::Sqrt: return std::sqrt(a->eval(v));
            case Op::Abs: return std::abs(a->eval(v));
            case Op::Floor: return std::floor(a->eval(v));
            case Op::Min: return std::min(a->eval(v), b->eval(v));
            case Op::Max: return std::max(a->eval(v), b->eval(v));
            case Op::Pow2: return std::pow(a->eval(v), b->eval(v));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make_const(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError(msg, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_sum() {
        NodePtr e = parse_product();
        for (;;) {
            if (consume('+')) e = make_binary(Op::Add, e, parse_product());
            else if (consume('-')) e = make_binary(Op::Sub, e, parse_product());
            else return e;
        }
    }

    NodePtr parse_product() {
        NodePtr e = parse_unary();
        for (;;) {
            if (consume('*')) e = make_binary(Op::Mul, e, parse_unary());
            else if (consume('/')) e = make_binary(Op::Div, e, parse_unary());
            else return e;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make_unary(Op::Neg, parse_unary());
        if (consume('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (consume('^')) return make_binary(Op::Pow, base, parse_unary());  // right assoc
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
            ++end;
        const std::string tok = text_.substr(pos_, end - pos_);
        try {
            const double v = std::stod(tok);
            pos_ = end;
            return make_const(v);
        } catch (const std::exception&) {
            fail("malformed number '" + tok + "'");
        }
    }

    NodePtr parse_name() {
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                      text_[end] == '_'))
            ++end;
        const std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;

        static const std::map<std::string, Op> unary_fns = {
            {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},
            {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"tanh", Op::Tanh},
            {"exp", Op::Exp},   {"log", Op::Log},   {"sqrt", Op::Sqrt},
            {"abs", Op::Abs},   {"floor", Op::Floor}};
        static const std::map<std::string, Op> binary_fns = {
            {"min", Op::Min}, {"max", Op::Max}, {"pow", Op::Pow2}};

        if (peek() == '(') {
            if (auto it = unary_fns.find(name); it != unary_fns.end()) {
                consume('(');
                NodePtr a = parse_sum();
                if (!consume(')')) fail("expected ')' after argument of " + name);
                return make_unary(it->second, a);
            }
            if (auto it = binary_fns.find(name); it != binary_fns.end()) {
                consume('(');
                NodePtr a = parse_sum();
                if (!consume(',')) fail("expected ',' in " + name);
                NodePtr b = parse_sum();
                if (!consume(')')) fail("expected ')' after arguments of " + name);
                return make_binary(it->second, a, b);
            }
            fail("unknown function '" + name + "'");
        }
        if (name == "pi") return make_const(M_PI);
        if (name == "e") return make_const(M_E);
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::Var;
                n->slot = static_cast<int>(i);
                return n;
            }
        }
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expression e;
    e.text_ = text;
    e.vars_ = variables;
    e.root_ = Parser(text, variables).run();
    return e;
}

double Expression::eval(const std::vector<double>& values) const {
    if (!root_) throw std::logic_error("Expression: eval before parse");
    if (values.size() != vars_.size())
        throw std::invalid_argument("Expression: wrong number of variable values");
    return root_->eval(values);
}

}  // namespace spdelab
