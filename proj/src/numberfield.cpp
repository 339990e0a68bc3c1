#include "voawb/numberfield.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace voawb {

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
    q.canonicalize();
    return q;
}

const Rat& NF::as_rat() const {
    if (!is_rational()) throw DimensionMismatch("number field element is not rational: " + to_string());
    return c_[0];
}

NF& NF::operator+=(const NF& o) {
    for (int j = 0; j < 4; ++j) c_[j] += o.c_[j];
    return *this;
}

NF& NF::operator-=(const NF& o) {
    for (int j = 0; j < 4; ++j) c_[j] -= o.c_[j];
    return *this;
}

NF NF::operator*(const NF& o) const {
    // (a + bi + c r + d ir)(a' + b'i + c'r + d'ir), with i^2 = -1, r^2 = 2.
    const Rat &a = c_[0], &b = c_[1], &c = c_[2], &d = c_[3];
    const Rat &A = o.c_[0], &B = o.c_[1], &C = o.c_[2], &D = o.c_[3];
    Rat r0 = a * A - b * B + 2 * (c * C - d * D);
    Rat r1 = a * B + b * A + 2 * (c * D + d * C);
    Rat r2 = a * C + c * A - (b * D + d * B);
    Rat r3 = a * D + d * A + b * C + c * B;
    return NF(std::move(r0), std::move(r1), std::move(r2), std::move(r3));
}

NF NF::inv() const {
    if (is_zero()) throw DivisionByZero("inverse of 0 in Q(i,sqrt2)");
    if (is_rational()) return NF(Rat(1) / c_[0]);
    NF num = conj_i() * conj_s() * conj_i().conj_s();
    NF norm = *this * num;
    // The product over the Galois orbit lies in Q.
    const Rat& n = norm.as_rat();
    Rat ninv = Rat(1) / n;
    return NF(num.c_[0] * ninv, num.c_[1] * ninv, num.c_[2] * ninv, num.c_[3] * ninv);
}

std::strong_ordering NF::operator<=>(const NF& o) const {
    for (int j = 0; j < 4; ++j) {
        int c = cmp(c_[j], o.c_[j]);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::string NF::to_string() const {
    static const char* units[4] = {"", "i", "√2", "i√2"};
    std::string out;
    for (int j = 0; j < 4; ++j) {
        if (c_[j] == 0) continue;
        Rat q = c_[j];
        std::string term;
        if (j == 0) {
            term = rat_to_string(q);
        } else {
            if (q == 1) term = units[j];
            else if (q == -1) term = std::string("-") + units[j];
            else term = rat_to_string(q) + units[j];
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    if (out.empty()) out = "0";
    return out;
}

namespace {

struct NFParser {
    const std::string& s;
    size_t p = 0;
    explicit NFParser(const std::string& str) : s(str) {}

    void skip_ws() { while (p < s.size() && std::isspace((unsigned char)s[p])) ++p; }

    bool eat(const std::string& tok) {
        skip_ws();
        if (s.compare(p, tok.size(), tok) == 0) { p += tok.size(); return true; }
        return false;
    }

    bool peek_digit() {
        skip_ws();
        return p < s.size() && std::isdigit((unsigned char)s[p]);
    }

    Rat read_rat() {
        skip_ws();
        size_t q = p;
        while (q < s.size() && std::isdigit((unsigned char)s[q])) ++q;
        if (q == p) throw ParseError("expected number at '" + s.substr(p) + "'");
        size_t num_end = q;
        if (q < s.size() && s[q] == '/') {
            size_t r = q + 1;
            while (r < s.size() && std::isdigit((unsigned char)s[r])) ++r;
            if (r == q + 1) throw ParseError("expected denominator in: " + s);
            q = r;
        }
        Rat v = rat_from_string(s.substr(p, q - p));
        p = q;
        (void)num_end;
        return v;
    }

    // term := [sign] [rational] [unit], unit in {i, √2, i√2, s2, is2}
    NF parse_sum() {
        NF acc;
        bool first = true;
        for (;;) {
            skip_ws();
            if (p >= s.size()) break;
            int sign = 1;
            if (eat("+")) sign = 1;
            else if (eat("-")) sign = -1;
            else if (!first) break;
            skip_ws();
            Rat coef(1);
            bool have_num = false;
            if (peek_digit()) { coef = read_rat(); have_num = true; }
            int unit = 0;
            if (eat("i√2") || eat("is2")) unit = 3;
            else if (eat("√2") || eat("s2")) unit = 2;
            else if (eat("i")) unit = 1;
            else if (!have_num) throw ParseError("expected term at '" + s.substr(p) + "'");
            if (sign < 0) coef = -coef;
            NF t;
            switch (unit) {
                case 0: t = NF(coef); break;
                case 1: t = NF(Rat(0), coef, Rat(0), Rat(0)); break;
                case 2: t = NF(Rat(0), Rat(0), coef, Rat(0)); break;
                case 3: t = NF(Rat(0), Rat(0), Rat(0), coef); break;
            }
            acc += t;
            first = false;
        }
        skip_ws();
        if (p != s.size()) throw ParseError("trailing characters in number field element: " + s);
        return acc;
    }
};

} // namespace

NF NF::parse(const std::string& str) {
    NFParser parser(str);
    return parser.parse_sum();
}

size_t NF::hash() const {
    std::hash<std::string> h;
    size_t out = 0x9e3779b97f4a7c15ull;
    for (int j = 0; j < 4; ++j) {
        out ^= h(c_[j].get_str()) + 0x9e3779b9 + (out << 6) + (out >> 2);
    }
    return out;
}

} // namespace voawb
