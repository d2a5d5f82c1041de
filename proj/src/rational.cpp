#include "convo/rational.hpp"

#include <cctype>

namespace convo {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational rational_parse(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) throw ParseError("malformed rational: '" + text + "'");

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational: '" + text + "'");
        Int d(den);
        if (d == 0) throw ParseError("zero denominator: '" + text + "'");
        value = Rational(Int(num), d);
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac))
            throw ParseError("malformed rational: '" + text + "'");
        Int scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value = Rational(Int(whole) * scale + Int(frac), scale);
    } else {
        if (!all_digits(s)) throw ParseError("malformed rational: '" + text + "'");
        value = Rational(Int(s));
    }
    return neg ? Rational(-value) : value;
}

std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

std::string rational_vec_str(const std::vector<Rational>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += rational_str(v[i]);
    }
    return s + ")";
}

}  // namespace convo
