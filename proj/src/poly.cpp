#include "voawb/poly.hpp"

#include <sstream>

namespace voawb {

Poly Poly::operator-() const {
    std::vector<NF> r(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) r[j] = -c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<NF> r(std::max(c_.size(), o.c_.size()));
    for (size_t j = 0; j < r.size(); ++j) {
        if (j < c_.size()) r[j] += c_[j];
        if (j < o.c_.size()) r[j] += o.c_[j];
    }
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<NF> r(std::max(c_.size(), o.c_.size()));
    for (size_t j = 0; j < r.size(); ++j) {
        if (j < c_.size()) r[j] += c_[j];
        if (j < o.c_.size()) r[j] -= o.c_[j];
    }
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<NF> r(c_.size() + o.c_.size() - 1);
    for (size_t a = 0; a < c_.size(); ++a) {
        if (c_[a].is_zero()) continue;
        for (size_t b = 0; b < o.c_.size(); ++b) {
            if (o.c_[b].is_zero()) continue;
            r[a + b] += c_[a] * o.c_[b];
        }
    }
    return Poly(std::move(r));
}

Poly Poly::operator*(const NF& s) const {
    if (s.is_zero()) return Poly();
    std::vector<NF> r(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) r[j] = c_[j] * s;
    return Poly(std::move(r));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    std::vector<NF> rem = a.c_;
    int db = b.degree();
    NF lead_inv = b.leading().inv();
    std::vector<NF> quo;
    if ((int)rem.size() - 1 >= db) quo.assign(rem.size() - db, NF::zero());
    for (int d = (int)rem.size() - 1; d >= db; --d) {
        if (rem[d].is_zero()) continue;
        NF f = rem[d] * lead_inv;
        quo[d - db] = f;
        for (int j = 0; j <= db; ++j) rem[d - db + j] -= f * b.c_[j];
    }
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
}

Poly Poly::operator%(const Poly& o) const {
    Poly q, r;
    divmod(*this, o, q, r);
    return r;
}

Poly Poly::operator/(const Poly& o) const {
    Poly q, r;
    divmod(*this, o, q, r);
    return q;
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = r.is_zero() ? Poly() : r.monic();
    }
    if (a.is_zero()) return Poly();
    return a.monic();
}

Poly Poly::monic() const {
    if (is_zero()) return Poly();
    return *this * leading().inv();
}

NF Poly::eval(const NF& x) const {
    NF acc;
    for (int j = degree(); j >= 0; --j) acc = acc * x + c_[j];
    return acc;
}

std::strong_ordering Poly::operator<=>(const Poly& o) const {
    if (c_.size() != o.c_.size())
        return c_.size() < o.c_.size() ? std::strong_ordering::less : std::strong_ordering::greater;
    for (size_t j = c_.size(); j-- > 0;) {
        auto c = c_[j] <=> o.c_[j];
        if (c != std::strong_ordering::equal) return c;
    }
    return std::strong_ordering::equal;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int j = degree(); j >= 0; --j) {
        const NF& cf = c_[j];
        if (cf.is_zero()) continue;
        std::string mono = (j == 0) ? "" : (j == 1 ? "k" : "k^" + std::to_string(j));
        std::string term;
        std::string cs = cf.to_string();
        bool simple = cf.is_rational() || (cs.find('+') == std::string::npos &&
                                           cs.rfind('-', 0) == std::string::npos &&
                                           cs.find('-') == std::string::npos);
        if (j == 0) {
            term = simple ? cs : "(" + cs + ")";
        } else if (cf == NF::one()) {
            term = mono;
        } else if (cf == -NF::one()) {
            term = "-" + mono;
        } else {
            term = (simple ? cs : "(" + cs + ")") + mono;
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

size_t Poly::hash() const {
    size_t out = 1469598103934665603ull;
    for (const auto& c : c_) out = (out ^ c.hash()) * 1099511628211ull;
    return out;
}

} // namespace voawb
