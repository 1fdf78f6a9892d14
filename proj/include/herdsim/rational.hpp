#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace herdsim {

// All probabilities, odds ratios and congestion fractions are arbitrary
// precision rationals. Inequalities between sums of log likelihood ratios
// are decided by comparing products of odds ratios against 1, which stays
// exact arbitrarily close to a boundary.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double to_double(const Rat& r) { return static_cast<double>(r); }

// Accepts "n", "n/d" and decimal notation ("0.984", "-1.5e-3" is not
// supported; exponents are rare in configs and easy to avoid). Decimals are
// converted exactly.
inline Rat parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty rational literal");
    s = s.substr(first, last - first + 1);

    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            const BigInt num(s.substr(0, slash));
            const BigInt den(s.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'");
            return Rat(num, den);
        }
        const auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(BigInt(s));
        std::string intpart = s.substr(0, dot);
        std::string fracpart = s.substr(dot + 1);
        if (fracpart.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad decimal '" + text + "'");
        bool negative = !intpart.empty() && intpart[0] == '-';
        if (intpart.empty() || intpart == "-" || intpart == "+") intpart += "0";
        BigInt ip(intpart);
        BigInt scale = 1;
        for (size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
        BigInt fp = fracpart.empty() ? BigInt(0) : BigInt(fracpart);
        BigInt num = boost::multiprecision::abs(ip) * scale + fp;
        if (negative) num = -num;
        return Rat(num, scale);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("cannot parse rational '" + text + "'");
    }
}

inline std::string format_rational(const Rat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rat rat_pow(Rat base, unsigned exp) {
    Rat result = 1;
    while (exp > 0) {
        if (exp & 1u) result *= base;
        base *= base;
        exp >>= 1u;
    }
    return result;
}

// An exact odds ratio together with its log, the only place doubles enter
// the core computation. llr = ln(odds).
struct OddsLog {
    Rat odds = 1;
    double llr = 0.0;

    OddsLog() = default;
    explicit OddsLog(Rat o) : odds(std::move(o)), llr(std::log(to_double(odds))) {}
};

}  // namespace herdsim
