#pragma once

#include <memory>
#include <string>

namespace eigengrowth {

/// Arithmetic expression in one variable x.
///
/// Grammar: numbers, x, pi, + − * / ^ (right associative), unary minus,
/// parentheses and the functions log, exp, sqrt, sin, cos, abs, loglog_int
/// (∫_0^x log(−log y) dy) and cos_rsqrt_int (∫_0^x cos(y^{−1/2}) dy).
class Expression {
public:
    /// Throws ConfigError naming the offending position.
    static Expression parse(const std::string& text);

    double operator()(double x) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace eigengrowth
