#include "pb/rational.hpp"

#include "pb/error.hpp"

#include <cctype>

namespace pb {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rat parse_rat(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw Error("MalformedNumber", "empty numeric literal '" + text + "'");

    Rat r;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw Error("MalformedNumber", "bad fraction '" + text + "'");
        mpz_class d(den);
        if (d == 0) throw Error("MalformedNumber", "zero denominator in '" + text + "'");
        r = Rat(mpz_class(num), d);
        r.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty())
            throw Error("MalformedNumber", "bad decimal '" + text + "'");
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw Error("MalformedNumber", "bad decimal '" + text + "'");
        mpz_class whole = ip.empty() ? mpz_class(0) : mpz_class(ip);
        mpz_class frac = fp.empty() ? mpz_class(0) : mpz_class(fp);
        mpz_class pow10 = 1;
        for (size_t i = 0; i < fp.size(); ++i) pow10 *= 10;
        r = Rat(whole * pow10 + frac, pow10);
        r.canonicalize();
    } else {
        if (!all_digits(s)) throw Error("MalformedNumber", "bad integer '" + text + "'");
        r = Rat(mpz_class(s));
    }
    return neg ? Rat(-r) : r;
}

std::string rat_str(const Rat& x) {
    mpz_class num = x.get_num(), den = x.get_den();
    if (den == 1) return num.get_str();

    // Terminating decimal iff den = 2^a * 5^b; k = max(a, b) digits suffice and
    // the last digit is then nonzero (num/den is in lowest terms).
    mpz_class d = den;
    unsigned a = 0, b = 0;
    while (d % 2 == 0) { d /= 2; ++a; }
    while (d % 5 == 0) { d /= 5; ++b; }
    if (d != 1) return num.get_str() + "/" + den.get_str();

    unsigned k = std::max(a, b);
    mpz_class pow10 = 1;
    for (unsigned i = 0; i < k; ++i) pow10 *= 10;
    mpz_class scaled = num * pow10 / den; // exact by construction
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    return (neg ? "-" : "") + digits;
}

std::string rat_frac(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

mpz_class rat_floor(const Rat& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

} // namespace pb
