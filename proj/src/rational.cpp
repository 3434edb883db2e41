#include <affhom/rational.hpp>

#include <cctype>

#include <affhom/errors.hpp>

namespace affhom {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            return false;
        }
    }
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) {
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    Rational q(negative ? Integer(-n) : n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational factorial(unsigned k)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return Rational(f);
}

std::optional<Rational> exact_root(const Rational& q, unsigned k)
{
    if (k == 0) {
        return std::nullopt;
    }
    if (k % 2 == 0 && sgn(q) < 0) {
        return std::nullopt;
    }
    auto root_int = [k](const Integer& v) -> std::optional<Integer> {
        Integer a = abs(v);
        Integer r;
        if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) == 0) {
            return std::nullopt;
        }
        return sgn(v) < 0 ? Integer(-r) : r;
    };
    const auto n = root_int(q.get_num());
    const auto d = root_int(q.get_den());
    if (!n || !d) {
        return std::nullopt;
    }
    Rational r(*n, *d);
    r.canonicalize();
    return r;
}

} // namespace affhom
