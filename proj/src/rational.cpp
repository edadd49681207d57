#include "brickwall/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace brickwall {

namespace {

std::int64_t parse_i64(const std::string& s) {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer: '" + s + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(parse_i64(text.substr(0, slash)),
                        parse_i64(text.substr(slash + 1)));
    }

    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        if (frac_len == 0 || frac_len > 17)
            throw std::invalid_argument("bad decimal: '" + text + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(parse_i64(digits), den);
    }

    return Rational(parse_i64(text));
}

}  // namespace brickwall
