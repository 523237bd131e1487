#include "rsv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "rsv/errors.hpp"

namespace rsv {

struct Expression::Node {
    enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;
    std::size_t index = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(const std::vector<double>& v) const {
        switch (kind) {
            case Kind::Number: return value;
            case Kind::Variable: return v[index];
            case Kind::Neg: return -a->eval(v);
            case Kind::Add: return a->eval(v) + b->eval(v);
            case Kind::Sub: return a->eval(v) - b->eval(v);
            case Kind::Mul: return a->eval(v) * b->eval(v);
            case Kind::Div: return a->eval(v) / b->eval(v);
            case Kind::Pow: {
                const double e = b->eval(v);
                if (e == std::round(e) && std::abs(e) <= 64) {
                    const double base = a->eval(v);
                    double r = 1.0;
                    for (int k = 0; k < std::abs(static_cast<int>(e)); ++k) r *= base;
                    return e < 0 ? 1.0 / r : r;
                }
                return std::pow(a->eval(v), e);
            }
            case Kind::Call: return fn(a->eval(v));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct Function {
    const char* name;
    double (*fn)(double);
};

const Function kFunctions[] = {
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
    {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
};

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = make(Kind::Add, lhs, term());
            else if (eat('-')) lhs = make(Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*')) lhs = make(Kind::Mul, lhs, unary());
            else if (eat('/')) lhs = make(Kind::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::Number;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) {
                    auto n = std::make_shared<Expression::Node>();
                    n->kind = Kind::Variable;
                    n->index = i;
                    return n;
                }
            for (const auto& f : kFunctions)
                if (name == f.name) {
                    if (!eat('(')) fail("expected '(' after " + name);
                    auto n = std::make_shared<Expression::Node>();
                    n->kind = Kind::Call;
                    n->fn = f.fn;
                    n->a = expr();
                    if (!eat(')')) fail("expected ')'");
                    return n;
                }
            if (name == "pi") {
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::Number;
                n->value = std::numbers::pi;
                return n;
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text, variables).parse();
    return e;
}

double Expression::operator()(const std::vector<double>& values) const { return root_->eval(values); }

}  // namespace rsv
