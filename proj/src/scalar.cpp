#include "voawb/scalar.hpp"

#include <cctype>

namespace voawb {

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero("scalar with zero denominator");
    reduce();
}

void Scalar::reduce() {
    if (num_.is_zero()) {
        den_ = Poly(NF::one());
        return;
    }
    if (den_.degree() > 0 || num_.degree() > 0) {
        Poly g = Poly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
    NF lead = den_.leading();
    if (lead != NF::one()) {
        NF li = lead.inv();
        num_ = num_ * li;
        den_ = den_ * li;
    }
}

NF Scalar::as_nf() const {
    if (is_zero()) return NF::zero();
    if (!is_constant()) throw DimensionMismatch("scalar is not constant: " + to_string());
    return num_.coeff(0);
}

Scalar Scalar::operator-() const {
    Scalar r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return Scalar(num_ + o.num_, den_);
    return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return Scalar(num_ - o.num_, den_);
    return Scalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    return Scalar(num_ * o.num_, den_ * o.den_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw DivisionByZero("scalar division by zero");
    if (is_zero()) return Scalar();
    return Scalar(num_ * o.den_, den_ * o.num_);
}

Scalar Scalar::inv() const {
    if (is_zero()) throw DivisionByZero("inverse of zero scalar");
    return Scalar(den_, num_);
}

NF Scalar::eval(const NF& k0) const {
    NF d = den_.eval(k0);
    if (d.is_zero()) throw PoleAtLevel("pole at level " + k0.to_string());
    return num_.eval(k0) / d;
}

std::strong_ordering Scalar::operator<=>(const Scalar& o) const {
    auto c = num_ <=> o.num_;
    if (c != std::strong_ordering::equal) return c;
    return den_ <=> o.den_;
}

std::string Scalar::to_string() const {
    if (den_ == Poly(NF::one())) {
        return num_.to_string();
    }
    std::string n = num_.to_string();
    std::string d = den_.to_string();
    auto wrap = [](const std::string& s) {
        bool atom = s.find('+') == std::string::npos && s.find('-', 1) == std::string::npos &&
                    s.rfind('-', 0) == std::string::npos && s.find('/') == std::string::npos;
        return atom ? s : "(" + s + ")";
    };
    return wrap(n) + "/" + wrap(d);
}

namespace {

// Expression parser for rendered scalars: rationals, i, sqrt2 tokens, k,
// parentheses, + - * / ^ and implicit multiplication such as "2k" or "(1+i)k".
struct ScalarParser {
    const std::string& s;
    size_t p = 0;
    explicit ScalarParser(const std::string& str) : s(str) {}

    void ws() { while (p < s.size() && std::isspace((unsigned char)s[p])) ++p; }

    bool lit(const std::string& t) {
        ws();
        if (s.compare(p, t.size(), t) == 0) { p += t.size(); return true; }
        return false;
    }

    char peek() { ws(); return p < s.size() ? s[p] : '\0'; }

    Scalar parse_expr() {
        Scalar acc = parse_term();
        for (;;) {
            if (lit("+")) acc = acc + parse_term();
            else if (lit("-")) acc = acc - parse_term();
            else return acc;
        }
    }

    Scalar parse_term() {
        Scalar acc = parse_power();
        for (;;) {
            ws();
            if (lit("*")) { acc = acc * parse_power(); continue; }
            if (lit("/")) { acc = acc / parse_power(); continue; }
            char c = peek();
            if (c == 'k' || c == '(' || c == 'i' || c == 's' || (unsigned char)c == 0xE2) {
                acc = acc * parse_power(); // implicit multiplication
                continue;
            }
            return acc;
        }
    }

    Scalar parse_power() {
        Scalar base = parse_atom();
        ws();
        if (lit("^")) {
            ws();
            size_t q = p;
            while (q < s.size() && std::isdigit((unsigned char)s[q])) ++q;
            if (q == p) throw ParseError("expected exponent in: " + s);
            int e = std::stoi(s.substr(p, q - p));
            p = q;
            Scalar acc = Scalar::one();
            for (int j = 0; j < e; ++j) acc = acc * base;
            return acc;
        }
        return base;
    }

    Scalar parse_atom() {
        ws();
        if (p >= s.size()) throw ParseError("unexpected end of scalar: " + s);
        if (lit("(")) {
            Scalar inner = parse_expr();
            if (!lit(")")) throw ParseError("missing ')' in: " + s);
            return inner;
        }
        if (lit("-")) return -parse_power();
        if (lit("i√2") || lit("is2")) return Scalar(NF(Rat(0), Rat(0), Rat(0), Rat(1)));
        if (lit("√2") || lit("s2")) return Scalar(NF::sqrt2());
        if (lit("k")) return Scalar::k();
        if (lit("i")) return Scalar(NF::i());
        if (std::isdigit((unsigned char)s[p])) {
            size_t q = p;
            while (q < s.size() && std::isdigit((unsigned char)s[q])) ++q;
            Rat v = rat_from_string(s.substr(p, q - p));
            p = q;
            // A slash after a numeral parses as general division in parse_term.
            return Scalar(v);
        }
        throw ParseError("unexpected character in scalar at '" + s.substr(p) + "'");
    }
};

} // namespace

Scalar Scalar::parse(const std::string& str) {
    ScalarParser parser(str);
    Scalar v = parser.parse_expr();
    parser.ws();
    if (parser.p != str.size()) throw ParseError("trailing characters in scalar: " + str);
    return v;
}

} // namespace voawb
