#include "f2lab/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace f2lab {

Int pow2i(unsigned k) {
    Int r = 1;
    r <<= k;
    return r;
}

Rational pow2r(long k) {
    if (k >= 0) return Rational(pow2i(static_cast<unsigned>(k)));
    return Rational(1, pow2i(static_cast<unsigned>(-k)));
}

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::string frac_str(const Rational& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string dec_str(const Rational& r, int digits) {
    if (digits < 0) throw DomainError("dec_str: negative digit count");
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    // round(num*scale/den) half-to-even
    Int t = num * scale;
    Int q = t / den, rem = t % den;
    Int twice = rem * 2;
    if (twice > den || (twice == den && (q % 2) != 0)) ++q;
    Int ip = q / scale, fp = q % scale;
    std::string frac = fp.str();
    if (static_cast<int>(frac.size()) < digits)
        frac.insert(frac.begin(), digits - frac.size(), '0');
    std::string out = ip.str();
    if (digits > 0) out += "." + frac;
    if (neg && (ip != 0 || fp != 0)) out.insert(out.begin(), '-');
    return out;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational", 0);
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Int p(text.substr(0, slash)), q(text.substr(slash + 1));
            if (q == 0) throw DomainError("rational with zero denominator: " + text);
            return Rational(p, q);
        }
        auto dot = text.find('.');
        if (dot != std::string::npos) {
            std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
            if (ip.empty() || ip == "-" || ip == "+") ip += "0";
            if (fp.empty()) fp = "0";
            Int den = 1;
            for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
            Int whole(ip), frac(fp);
            bool neg = !ip.empty() && ip[0] == '-';
            Int num = whole * den + (neg ? -frac : frac);
            return Rational(num, den);
        }
        return Rational(Int(text));
    } catch (const std::exception& e) {
        if (dynamic_cast<const DomainError*>(&e)) throw;
        throw ParseError(std::string("bad rational '") + text + "': " + e.what(), 0);
    }
}

Int ceil_log2_inv(const Rational& delta) {
    if (delta <= 0 || delta > 1) throw DomainError("ceil_log2_inv: delta must be in (0,1]");
    Int p = boost::multiprecision::numerator(delta);
    Int q = boost::multiprecision::denominator(delta);
    // smallest j >= 0 with p * 2^j >= q
    Int j = 0, v = p;
    while (v < q) {
        v <<= 1;
        ++j;
    }
    return j;
}

}  // namespace f2lab
