#include <affhom/expr_parser.hpp>

#include <cctype>
#include <string>

#include <affhom/errors.hpp>

namespace affhom {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParamPoly parse()
    {
        ParamPoly p = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ParamPoly expr()
    {
        ParamPoly acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    ParamPoly term()
    {
        ParamPoly acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                ParamPoly d = unary();
                if (!d.is_monomial()) {
                    pos_ = at;
                    fail("division by a non-monomial");
                }
                const auto& [m, c] = *d.terms().begin();
                acc = acc.divide(m) * (Rational(1) / c);
            } else {
                return acc;
            }
        }
    }

    ParamPoly unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    ParamPoly power()
    {
        ParamPoly base = atom();
        if (!accept('^')) {
            return base;
        }
        skip_space();
        bool negative = false;
        if (accept('-')) {
            negative = true;
        } else {
            accept('+');
        }
        skip_space();
        const long k = integer();
        if (!negative) {
            return base.pow(static_cast<unsigned>(k));
        }
        if (!base.is_monomial()) {
            fail("negative power of a non-monomial");
        }
        const auto& [m, c] = *base.terms().begin();
        return ParamPoly(m.inverse(), Rational(1) / c).pow(static_cast<unsigned>(k));
    }

    long integer()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected an integer");
        }
        if (pos_ - start > 6) {
            fail("exponent too large");
        }
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    ParamPoly atom()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ParamPoly p = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return ParamPoly(Rational(Integer(std::string(text_.substr(start, pos_ - start)), 10)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size()
                   && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string name(text_.substr(start, pos_ - start));
            if (pos_ < text_.size() && text_[pos_] == '[') {
                const std::size_t close = text_.find(']', pos_);
                if (close == std::string_view::npos) {
                    fail("unterminated index");
                }
                for (std::size_t i = pos_ + 1; i < close; ++i) {
                    const char ch = text_[i];
                    if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != ',') {
                        fail("bad index character");
                    }
                }
                name += std::string(text_.substr(pos_, close - pos_ + 1));
                pos_ = close + 1;
            }
            return ParamPoly(Symbol::named(name));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

ParamPoly parse_poly(std::string_view text)
{
    return Parser(text).parse();
}

} // namespace affhom
