#include "pairquad/exprlang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace pairquad {

namespace {

struct FnInfo {
    int arity;
    double (*f1)(double);
    double (*f2)(double, double);
};

const std::map<std::string_view, FnInfo>& function_table() {
    static const std::map<std::string_view, FnInfo> table = {
        {"sin", {1, std::sin, nullptr}},   {"cos", {1, std::cos, nullptr}},
        {"tan", {1, std::tan, nullptr}},   {"exp", {1, std::exp, nullptr}},
        {"log", {1, std::log, nullptr}},   {"sqrt", {1, std::sqrt, nullptr}},
        {"abs", {1, std::fabs, nullptr}},  {"pow", {2, nullptr, std::pow}},
        {"atan2", {2, nullptr, std::atan2}},
    };
    return table;
}

Expr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::number;
    n->number = v;
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            Expr rhs = parse_term();
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::binary;
            n->op = c;
            n->args = {lhs, rhs};
            lhs = n;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            Expr rhs = parse_unary();
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::binary;
            n->op = c;
            n->args = {lhs, rhs};
            lhs = n;
        }
    }

    Expr parse_unary() {
        if (eat('-')) {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::unary_minus;
            n->args = {parse_unary()};
            return n;
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (eat('^')) {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::binary;
            n->op = '^';
            n->args = {base, parse_unary()};
            return n;
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        double v = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + src_.size(), v);
        if (res.ec != std::errc{})
            throw ParseError("malformed number", start);
        pos_ = static_cast<std::size_t>(res.ptr - src_.data());
        return make_number(v);
    }

    Expr parse_name() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));

        if (peek() == '(') {
            auto it = function_table().find(name);
            if (it == function_table().end())
                throw ParseError("unknown function '" + name + "'", start);
            ++pos_;  // consume '('
            std::vector<Expr> args;
            if (peek() != ')') {
                args.push_back(parse_expr());
                while (eat(',')) args.push_back(parse_expr());
            }
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            if (static_cast<int>(args.size()) != it->second.arity)
                throw ParseError("function '" + name + "' expects " +
                                     std::to_string(it->second.arity) + " argument(s)",
                                 start);
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::call;
            n->name = name;
            n->args = std::move(args);
            return n;
        }

        if (name == "pi") return make_number(3.14159265358979323846);
        if (name == "e") return make_number(2.71828182845904523536);

        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::variable;
        n->name = name;
        return n;
    }
};

double eval_impl(const ExprNode& n, const VarResolver& vars) {
    switch (n.kind) {
        case ExprNode::Kind::number:
            return n.number;
        case ExprNode::Kind::variable: {
            auto v = vars(n.name);
            if (!v) throw EvalError("unbound variable '" + n.name + "'");
            return *v;
        }
        case ExprNode::Kind::unary_minus:
            return -eval_impl(*n.args[0], vars);
        case ExprNode::Kind::binary: {
            double a = eval_impl(*n.args[0], vars);
            double b = eval_impl(*n.args[1], vars);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
                case '^': {
                    double r = std::pow(a, b);
                    if (!std::isfinite(r))
                        throw EvalError("pow domain error or overflow");
                    return r;
                }
            }
            throw EvalError("corrupt expression node");
        }
        case ExprNode::Kind::call: {
            const FnInfo& fn = function_table().at(n.name);
            if (fn.arity == 1) {
                double a = eval_impl(*n.args[0], vars);
                if (n.name == "log" && a <= 0.0) throw EvalError("log of non-positive value");
                if (n.name == "sqrt" && a < 0.0) throw EvalError("sqrt of negative value");
                double r = fn.f1(a);
                if (!std::isfinite(r)) throw EvalError("non-finite result in '" + n.name + "'");
                return r;
            }
            double a = eval_impl(*n.args[0], vars);
            double b = eval_impl(*n.args[1], vars);
            double r = fn.f2(a, b);
            if (!std::isfinite(r)) throw EvalError("non-finite result in '" + n.name + "'");
            return r;
        }
    }
    throw EvalError("corrupt expression node");
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Precedence levels for the printer, matching the grammar.
int precedence(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::binary:
            if (n.op == '+' || n.op == '-') return 1;
            if (n.op == '*' || n.op == '/') return 2;
            return 4;  // '^'
        case ExprNode::Kind::unary_minus:
            return 3;
        default:
            return 5;
    }
}

void print_impl(const ExprNode& n, std::string& out) {
    auto wrap = [&out](const ExprNode& child, bool need) {
        if (need) out += '(';
        print_impl(child, out);
        if (need) out += ')';
    };
    switch (n.kind) {
        case ExprNode::Kind::number:
            if (n.number < 0.0) {
                // Negative literal prints as unary minus to stay reparseable
                // in positions like 2^-3.
                out += '-';
                out += format_double(-n.number);
            } else {
                out += format_double(n.number);
            }
            return;
        case ExprNode::Kind::variable:
            out += n.name;
            return;
        case ExprNode::Kind::unary_minus:
            out += '-';
            wrap(*n.args[0], precedence(*n.args[0]) < 3);
            return;
        case ExprNode::Kind::binary: {
            int p = precedence(n);
            const ExprNode& l = *n.args[0];
            const ExprNode& r = *n.args[1];
            if (n.op == '^') {
                // Left operand of '^' must bind tighter than '^' itself;
                // right operand is a unary, so only looser-than-unary needs parens.
                wrap(l, precedence(l) <= p);
                out += '^';
                wrap(r, precedence(r) < 3);
            } else {
                wrap(l, precedence(l) < p);
                out += n.op;
                // '-' and '/' are left-associative: equal precedence on the
                // right needs parens.
                wrap(r, precedence(r) < p || (precedence(r) == p && (n.op == '-' || n.op == '/')));
            }
            return;
        }
        case ExprNode::Kind::call:
            out += n.name;
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ',';
                print_impl(*n.args[i], out);
            }
            out += ')';
            return;
    }
}

void collect_vars(const ExprNode& n, std::set<std::string>& out) {
    if (n.kind == ExprNode::Kind::variable) out.insert(n.name);
    for (const auto& a : n.args) collect_vars(*a, out);
}

}  // namespace

Expr parse(std::string_view src) { return Parser(src).run(); }

double eval(const Expr& e, const VarResolver& vars) {
    if (!e) throw EvalError("null expression");
    return eval_impl(*e, vars);
}

double eval(const Expr& e, const std::map<std::string, double>& vars) {
    return eval(e, [&vars](std::string_view name) -> std::optional<double> {
        auto it = vars.find(std::string(name));
        if (it == vars.end()) return std::nullopt;
        return it->second;
    });
}

std::string print(const Expr& e) {
    if (!e) return "";
    std::string out;
    print_impl(*e, out);
    return out;
}

std::vector<std::string> variables(const Expr& e) {
    std::set<std::string> s;
    if (e) collect_vars(*e, s);
    return {s.begin(), s.end()};
}

}  // namespace pairquad
