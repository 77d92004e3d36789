#include "wsl/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace wsl {

struct Expression::Node {
    enum class Kind { constant, variable, unary, binary, call } kind;
    double value = 0.0;
    std::string name;
    std::shared_ptr<const Node> a, b;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr run() {
        auto n = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input in expression at position " +
                             std::to_string(pos_));
        return n;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
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
        auto lhs = parse_product();
        while (true) {
            if (eat('+'))
                lhs = binary("+", lhs, parse_product());
            else if (eat('-'))
                lhs = binary("-", lhs, parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        while (true) {
            if (eat('*'))
                lhs = binary("*", lhs, parse_unary());
            else if (eat('/'))
                lhs = binary("/", lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::unary;
            n->name = "-";
            n->a = parse_unary();
            return n;
        }
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_atom();
        if (eat('^')) return binary("^", base, parse_unary());  // right-assoc
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        if (eat('(')) {
            auto n = parse_sum();
            if (!eat(')')) throw ParseError("missing ')' in expression");
            return n;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }

    NodePtr parse_number() {
        size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
            ++end;
        try {
            size_t used = 0;
            const double v = std::stod(text_.substr(pos_, end - pos_), &used);
            pos_ += used;
            return make_const(v);
        } catch (const std::exception&) {
            throw ParseError("malformed number in expression");
        }
    }

    NodePtr parse_name() {
        size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                      text_[end] == '_'))
            ++end;
        std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "pi") return make_const(std::numbers::pi);
        if (name == "e") return make_const(std::numbers::e);
        if (peek() == '(') {
            eat('(');
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::call;
            n->name = std::move(name);
            if (peek() != ')') {
                n->args.push_back(parse_sum());
                while (eat(',')) n->args.push_back(parse_sum());
            }
            if (!eat(')')) throw ParseError("missing ')' after function arguments");
            return n;
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->name = std::move(name);
        return n;
    }

    static NodePtr binary(const char* op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::binary;
        n->name = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }
};

double eval_node(const Node& n, const std::map<std::string, double>& vars) {
    switch (n.kind) {
        case Node::Kind::constant:
            return n.value;
        case Node::Kind::variable: {
            auto it = vars.find(n.name);
            if (it == vars.end()) throw ParseError("unbound variable '" + n.name + "'");
            return it->second;
        }
        case Node::Kind::unary:
            return -eval_node(*n.a, vars);
        case Node::Kind::binary: {
            const double a = eval_node(*n.a, vars);
            const double b = eval_node(*n.b, vars);
            switch (n.name[0]) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            throw ParseError("unknown operator");
        }
        case Node::Kind::call: {
            std::vector<double> a(n.args.size());
            for (size_t i = 0; i < a.size(); ++i) a[i] = eval_node(*n.args[i], vars);
            auto need = [&](size_t k) {
                if (a.size() != k)
                    throw ParseError("function '" + n.name + "' expects " + std::to_string(k) +
                                     " argument(s)");
            };
            if (n.name == "sin") { need(1); return std::sin(a[0]); }
            if (n.name == "cos") { need(1); return std::cos(a[0]); }
            if (n.name == "tan") { need(1); return std::tan(a[0]); }
            if (n.name == "asin") { need(1); return std::asin(a[0]); }
            if (n.name == "acos") { need(1); return std::acos(a[0]); }
            if (n.name == "atan") { need(1); return std::atan(a[0]); }
            if (n.name == "sinh") { need(1); return std::sinh(a[0]); }
            if (n.name == "cosh") { need(1); return std::cosh(a[0]); }
            if (n.name == "tanh") { need(1); return std::tanh(a[0]); }
            if (n.name == "exp") { need(1); return std::exp(a[0]); }
            if (n.name == "log") { need(1); return std::log(a[0]); }
            if (n.name == "sqrt") { need(1); return std::sqrt(a[0]); }
            if (n.name == "abs") { need(1); return std::abs(a[0]); }
            if (n.name == "floor") { need(1); return std::floor(a[0]); }
            if (n.name == "pow") { need(2); return std::pow(a[0], a[1]); }
            if (n.name == "min") {
                if (a.empty()) throw ParseError("min() needs arguments");
                double m = a[0];
                for (double x : a) m = std::min(m, x);
                return m;
            }
            if (n.name == "max") {
                if (a.empty()) throw ParseError("max() needs arguments");
                double m = a[0];
                for (double x : a) m = std::max(m, x);
                return m;
            }
            throw ParseError("unknown function '" + n.name + "'");
        }
    }
    throw ParseError("corrupt expression node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    return Expression(p.run(), text);
}

double Expression::eval(const std::map<std::string, double>& vars) const {
    return eval_node(*root_, vars);
}

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}
Expression::Expression(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression other) {
    root_ = std::move(other.root_);
    text_ = std::move(other.text_);
    return *this;
}
Expression::~Expression() = default;

}  // namespace wsl
