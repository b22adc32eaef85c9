#pragma once

// Arithmetic expressions in one variable t, e.g. "1 + sech(t)^2".
// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
// pi, t, and the functions exp sin cos tan sech cosh sinh tanh sqrt log.

#include <memory>
#include <string>

#include "phasefn/real.hpp"

namespace phasefn {

/// Value with first and second derivative (forward-mode, second order).
template <class Real>
struct Jet {
    Real v, d, dd;
};

class Expression {
public:
    /// Throws UsageError with the failing position on malformed input.
    static Expression parse(const std::string& text);

    template <class Real>
    Real eval(const Real& t) const;

    /// Value, d/dt and d2/dt2 at t.
    template <class Real>
    Jet<Real> eval_jet(const Real& t) const;

    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace phasefn
