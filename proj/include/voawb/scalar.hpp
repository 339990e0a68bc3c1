#ifndef VOAWB_SCALAR_HPP
#define VOAWB_SCALAR_HPP

#include "voawb/poly.hpp"

namespace voawb {

/// Element of Q(i,sqrt2)(k): a rational function num/den in the formal level k.
/// Canonical form: gcd(num, den) = 1 and den monic, so equality is
/// coefficientwise comparison.
class Scalar {
public:
    Scalar() : num_(), den_(Poly(NF::one())) {}
    Scalar(int n) : num_(Poly(NF(n))), den_(Poly(NF::one())) {}
    explicit Scalar(const NF& c) : num_(Poly(c)), den_(Poly(NF::one())) {}
    explicit Scalar(const Rat& q) : num_(Poly(NF(q))), den_(Poly(NF::one())) {}
    Scalar(Poly num, Poly den);

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar k() { return Scalar(Poly::variable(), Poly(NF::one())); }
    static Scalar from_rat(const Rat& q) { return Scalar(q); }
    static Scalar from_nf(const NF& c) { return Scalar(c); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    /// True iff the value depends nontrivially on k.
    bool is_generic() const { return num_.degree() > 0 || den_.degree() > 0; }

    /// Constant value as a number field element; throws on genuine k-dependence.
    NF as_nf() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
    Scalar inv() const;

    /// Exact evaluation at k = k0; throws PoleAtLevel if the denominator vanishes.
    NF eval(const NF& k0) const;

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const Scalar& o) const;

    std::string to_string() const;
    static Scalar parse(const std::string& s);

    size_t hash() const { return num_.hash() * 31 + den_.hash(); }

private:
    void reduce();
    Poly num_, den_;
};

inline Scalar operator*(const NF& c, const Scalar& s) { return Scalar(c) * s; }

} // namespace voawb

#endif
