#include "eigengrowth/expr.hpp"

#include "eigengrowth/error.hpp"
#include "eigengrowth/special.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "cli";

enum class Op { number, var, neg, add, sub, mul, div, pow, call };

using UnaryFn = double (*)(double);

struct Function {
    const char* name;
    UnaryFn fn;
};

double loglog_int(double x) { return loglog_integral(x); }
double cos_rsqrt_int(double x) { return cos_rsqrt_integral(x); }
double log_fn(double x) { return std::log(x); }
double exp_fn(double x) { return std::exp(x); }
double sqrt_fn(double x) { return std::sqrt(x); }
double sin_fn(double x) { return std::sin(x); }
double cos_fn(double x) { return std::cos(x); }
double abs_fn(double x) { return std::abs(x); }

constexpr Function kFunctions[] = {
    {"log", log_fn},   {"exp", exp_fn},   {"sqrt", sqrt_fn},
    {"sin", sin_fn},   {"cos", cos_fn},   {"abs", abs_fn},
    {"loglog_int", loglog_int},           {"cos_rsqrt_int", cos_rsqrt_int},
};

}  // namespace

struct Expression::Node {
    Op op = Op::number;
    double value = 0.0;
    UnaryFn fn = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x) const {
        switch (op) {
            case Op::number: return value;
            case Op::var: return x;
            case Op::neg: return -lhs->eval(x);
            case Op::add: return lhs->eval(x) + rhs->eval(x);
            case Op::sub: return lhs->eval(x) - rhs->eval(x);
            case Op::mul: return lhs->eval(x) * rhs->eval(x);
            case Op::div: return lhs->eval(x) / rhs->eval(x);
            case Op::pow: {
                const double e = rhs->eval(x);
                if (e == 2.0) {
                    const double b = lhs->eval(x);
                    return b * b;
                }
                return std::pow(lhs->eval(x), e);
            }
            case Op::call: return fn(lhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(kModule, "expression \"" + s_ + "\": " + what + " at position " +
                                       std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Op::add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Op::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Op::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Op::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        double v = 0.0;
        const char* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        auto n = std::make_shared<Expression::Node>();
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "x") return make(Op::var);
        if (name == "pi") {
            auto n = std::make_shared<Expression::Node>();
            n->value = std::numbers::pi;
            return n;
        }
        for (const Function& f : kFunctions) {
            if (name != f.name) continue;
            if (!accept('(')) fail("expected '(' after " + name);
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::call;
            n->fn = f.fn;
            n->lhs = expression();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace eigengrowth
