#include "infobs/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "infobs/errors.hpp"

namespace infobs {

struct Expression::Node {
    enum class Kind { number, var_x, var_y, var_r, neg, add, sub, mul, div, pow, abs, sqrt, min, max };
    Kind kind = Kind::number;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(const Point& p) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::var_x: return p.x;
            case Kind::var_y: return p.y;
            case Kind::var_r: return std::hypot(p.x, p.y);
            case Kind::neg: return -args[0]->eval(p);
            case Kind::add: return args[0]->eval(p) + args[1]->eval(p);
            case Kind::sub: return args[0]->eval(p) - args[1]->eval(p);
            case Kind::mul: return args[0]->eval(p) * args[1]->eval(p);
            case Kind::div: return args[0]->eval(p) / args[1]->eval(p);
            case Kind::pow: return std::pow(args[0]->eval(p), args[1]->eval(p));
            case Kind::abs: return std::abs(args[0]->eval(p));
            case Kind::sqrt: return std::sqrt(args[0]->eval(p));
            case Kind::min: {
                double v = args[0]->eval(p);
                for (std::size_t i = 1; i < args.size(); ++i) v = std::min(v, args[i]->eval(p));
                return v;
            }
            case Kind::max: {
                double v = args[0]->eval(p);
                for (std::size_t i = 1; i < args.size(); ++i) v = std::max(v, args[i]->eval(p));
                return v;
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double value = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->value = value;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "expression syntax error at position " << pos_ << ": " << msg << " in '" << text_ << "'";
        throw ProblemError(os.str());
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Kind::add, {lhs, term()});
            } else if (accept('-')) {
                lhs = make(Kind::sub, {lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Kind::mul, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Kind::div, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (accept('|')) {
            NodePtr e = expr();
            expect('|');
            return make(Kind::abs, {e});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        std::size_t start = pos_;
        std::string s(text_.substr(pos_));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            fail("bad number");
        }
        pos_ = start + used;
        return make(Kind::number, {}, v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        std::string id(text_.substr(start, pos_ - start));
        if (id == "x") return make(Kind::var_x);
        if (id == "y") return make(Kind::var_y);
        if (id == "r") return make(Kind::var_r);
        if (id == "pi") return make(Kind::number, {}, std::numbers::pi);
        Kind k;
        std::size_t min_args = 1, max_args = 1;
        if (id == "abs") {
            k = Kind::abs;
        } else if (id == "sqrt") {
            k = Kind::sqrt;
        } else if (id == "min" || id == "max") {
            k = id == "min" ? Kind::min : Kind::max;
            min_args = 2;
            max_args = static_cast<std::size_t>(-1);
        } else {
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        expect('(');
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        if (args.size() < min_args || args.size() > max_args) fail("wrong number of arguments to " + id);
        return make(k, std::move(args));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse_all();
    e.source_ = std::string(text);
    return e;
}

Expression Expression::constant(double value) {
    Expression e;
    e.root_ = make(Kind::number, {}, value);
    std::ostringstream os;
    os.precision(17);
    os << value;
    e.source_ = os.str();
    return e;
}

double Expression::operator()(const Point& p) const {
    if (!root_) throw ContractError("evaluating an empty expression");
    return root_->eval(p);
}

}  // namespace infobs
