#include "phasefn/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "phasefn/errors.hpp"

namespace phasefn {

enum class Op { num, var, add, sub, mul, div, pow, neg, func };
enum class Fn { exp, sin, cos, tan, sech, cosh, sinh, tanh, sqrt, log };

struct Expression::Node {
    Op op;
    Fn fn = Fn::exp;
    double vd = 0;
    Quad vq = 0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;

NodeP make(Op op, NodeP a = nullptr, NodeP b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct FnName {
    const char* name;
    Fn fn;
};
const FnName kFunctions[] = {{"exp", Fn::exp},   {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},
                             {"sech", Fn::sech}, {"cosh", Fn::cosh}, {"sinh", Fn::sinh}, {"tanh", Fn::tanh},
                             {"sqrt", Fn::sqrt}, {"log", Fn::log}};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodeP parse() {
        NodeP e = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw UsageError("expression error at position " + std::to_string(i_) + ": " + why + " in \"" + s_ + "\"");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    NodeP expr() {
        NodeP l = term();
        for (;;) {
            if (accept('+')) l = make(Op::add, l, term());
            else if (accept('-')) l = make(Op::sub, l, term());
            else return l;
        }
    }
    NodeP term() {
        NodeP l = unary();
        for (;;) {
            skip();
            if (i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == '*') return l;  // handled by power()
            if (accept('*')) l = make(Op::mul, l, unary());
            else if (accept('/')) l = make(Op::div, l, unary());
            else return l;
        }
    }
    NodeP unary() {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }
    NodeP power() {
        NodeP base = primary();
        skip();
        if (accept('^')) return make(Op::pow, base, unary());
        if (i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == '*') {
            i_ += 2;
            return make(Op::pow, base, unary());
        }
        return base;
    }
    NodeP primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            NodeP e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            const std::string id = s_.substr(start, i_ - start);
            if (id == "t") return make(Op::var);
            if (id == "pi") {
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::num;
                n->vd = pi<double>();
                n->vq = pi<Quad>();
                return n;
            }
            for (const auto& f : kFunctions) {
                if (id == f.name) {
                    if (!accept('(')) fail("expected '(' after " + id);
                    NodeP arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    auto n = std::make_shared<Expression::Node>();
                    n->op = Op::func;
                    n->fn = f.fn;
                    n->a = arg;
                    return n;
                }
            }
            i_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    NodeP number() {
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
            if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                i_ = j;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            }
        }
        const std::string lit = s_.substr(start, i_ - start);
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::num;
        try {
            n->vd = parse_real<double>(lit);
            n->vq = parse_real<Quad>(lit);
        } catch (const UsageError&) {
            i_ = start;
            fail("malformed number '" + lit + "'");
        }
        return n;
    }
};

template <class Real>
Real constant(const Expression::Node& n) {
    if constexpr (std::is_same_v<Real, double>) return n.vd;
    else return n.vq;
}

template <class Real>
Real eval_node(const Expression::Node& n, const Real& t) {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tan;
    using std::tanh;
    switch (n.op) {
        case Op::num: return constant<Real>(n);
        case Op::var: return t;
        case Op::add: return eval_node(*n.a, t) + eval_node(*n.b, t);
        case Op::sub: return eval_node(*n.a, t) - eval_node(*n.b, t);
        case Op::mul: return eval_node(*n.a, t) * eval_node(*n.b, t);
        case Op::div: return eval_node(*n.a, t) / eval_node(*n.b, t);
        case Op::pow: return Real(pow(eval_node(*n.a, t), eval_node(*n.b, t)));
        case Op::neg: return -eval_node(*n.a, t);
        case Op::func: {
            const Real u = eval_node(*n.a, t);
            switch (n.fn) {
                case Fn::exp: return exp(u);
                case Fn::sin: return sin(u);
                case Fn::cos: return cos(u);
                case Fn::tan: return tan(u);
                case Fn::sech: return 1 / cosh(u);
                case Fn::cosh: return cosh(u);
                case Fn::sinh: return sinh(u);
                case Fn::tanh: return tanh(u);
                case Fn::sqrt: return sqrt(u);
                case Fn::log: return log(u);
            }
        }
    }
    return Real(0);
}

template <class Real>
Jet<Real> chain(const Jet<Real>& u, const Real& f, const Real& f1, const Real& f2) {
    return {f, f1 * u.d, f2 * u.d * u.d + f1 * u.dd};
}

template <class Real>
Jet<Real> jet_node(const Expression::Node& n, const Real& t) {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tan;
    using std::tanh;
    switch (n.op) {
        case Op::num: return {constant<Real>(n), 0, 0};
        case Op::var: return {t, 1, 0};
        case Op::add: {
            const auto a = jet_node(*n.a, t), b = jet_node(*n.b, t);
            return {a.v + b.v, a.d + b.d, a.dd + b.dd};
        }
        case Op::sub: {
            const auto a = jet_node(*n.a, t), b = jet_node(*n.b, t);
            return {a.v - b.v, a.d - b.d, a.dd - b.dd};
        }
        case Op::mul: {
            const auto a = jet_node(*n.a, t), b = jet_node(*n.b, t);
            return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd};
        }
        case Op::div: {
            const auto a = jet_node(*n.a, t), b = jet_node(*n.b, t);
            const Real w = a.v / b.v;
            const Real w1 = (a.d - w * b.d) / b.v;
            return {w, w1, (a.dd - 2 * w1 * b.d - w * b.dd) / b.v};
        }
        case Op::neg: {
            const auto a = jet_node(*n.a, t);
            return {-a.v, -a.d, -a.dd};
        }
        case Op::pow: {
            const auto a = jet_node(*n.a, t), b = jet_node(*n.b, t);
            if (b.d == 0 && b.dd == 0) {
                const Real c = b.v;
                if (c == 0) return {1, 0, 0};
                if (c == 1) return a;
                const Real p0 = pow(a.v, c), p1 = pow(a.v, c - 1), p2 = c == 2 ? Real(1) : Real(pow(a.v, c - 2));
                return chain(a, p0, c * p1, c * (c - 1) * p2);
            }
            // a^b = exp(b log a)
            const Real la = log(a.v);
            const Jet<Real> l{la, a.d / a.v, (a.dd * a.v - a.d * a.d) / (a.v * a.v)};
            const Jet<Real> e{b.v * l.v, b.d * l.v + b.v * l.d, b.dd * l.v + 2 * b.d * l.d + b.v * l.dd};
            const Real ev = exp(e.v);
            return chain(e, ev, ev, ev);
        }
        case Op::func: {
            const auto u = jet_node(*n.a, t);
            switch (n.fn) {
                case Fn::exp: {
                    const Real e = exp(u.v);
                    return chain(u, e, e, e);
                }
                case Fn::sin: {
                    const Real s = sin(u.v), c = cos(u.v);
                    return chain(u, s, c, -s);
                }
                case Fn::cos: {
                    const Real s = sin(u.v), c = cos(u.v);
                    return chain(u, c, -s, -c);
                }
                case Fn::tan: {
                    const Real tv = tan(u.v), s2 = 1 + tv * tv;
                    return chain(u, tv, s2, 2 * s2 * tv);
                }
                case Fn::sech: {
                    const Real s = 1 / cosh(u.v), th = tanh(u.v);
                    return chain(u, s, -s * th, s * (th * th - s * s));
                }
                case Fn::cosh: {
                    const Real c = cosh(u.v), s = sinh(u.v);
                    return chain(u, c, s, c);
                }
                case Fn::sinh: {
                    const Real c = cosh(u.v), s = sinh(u.v);
                    return chain(u, s, c, s);
                }
                case Fn::tanh: {
                    const Real th = tanh(u.v), s2 = 1 - th * th;
                    return chain(u, th, s2, -2 * s2 * th);
                }
                case Fn::sqrt: {
                    const Real r = sqrt(u.v);
                    return chain(u, r, 1 / (2 * r), -1 / (4 * r * u.v));
                }
                case Fn::log: {
                    return chain(u, Real(log(u.v)), 1 / u.v, -1 / (u.v * u.v));
                }
            }
        }
    }
    return {0, 0, 0};
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

template <class Real>
Real Expression::eval(const Real& t) const {
    if (!root_) throw UsageError("empty expression");
    return eval_node<Real>(*root_, t);
}

template <class Real>
Jet<Real> Expression::eval_jet(const Real& t) const {
    if (!root_) throw UsageError("empty expression");
    return jet_node<Real>(*root_, t);
}

template double Expression::eval<double>(const double&) const;
template Quad Expression::eval<Quad>(const Quad&) const;
template Jet<double> Expression::eval_jet<double>(const double&) const;
template Jet<Quad> Expression::eval_jet<Quad>(const Quad&) const;

}  // namespace phasefn
