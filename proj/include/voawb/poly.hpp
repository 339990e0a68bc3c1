#ifndef VOAWB_POLY_HPP
#define VOAWB_POLY_HPP

#include <vector>

#include "voawb/numberfield.hpp"

namespace voawb {

/// Dense polynomial in the formal level variable k, coefficients in Q(i,sqrt2).
/// Invariant: no trailing zero coefficients; the zero polynomial has empty storage.
class Poly {
public:
    Poly() = default;
    explicit Poly(NF c) { if (!c.is_zero()) c_.push_back(std::move(c)); }
    static Poly variable() { return Poly(std::vector<NF>{NF::zero(), NF::one()}); }
    explicit Poly(std::vector<NF> coeffs) : c_(std::move(coeffs)) { trim(); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return (int)c_.size() - 1; } // -1 for zero
    const NF& coeff(int j) const {
        static const NF z;
        return (j >= 0 && j < (int)c_.size()) ? c_[j] : z;
    }
    const NF& leading() const { return c_.back(); }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const NF& s) const;

    /// Euclidean division; requires o nonzero.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    Poly operator%(const Poly& o) const;
    Poly operator/(const Poly& o) const; // exact or Euclidean quotient

    /// Monic gcd (1 for coprime inputs, 0 only if both are 0).
    static Poly gcd(Poly a, Poly b);

    Poly monic() const;

    NF eval(const NF& x) const;

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const Poly& o) const;

    std::string to_string() const;

    size_t hash() const;

private:
    void trim() { while (!c_.empty() && c_.back().is_zero()) c_.pop_back(); }
    std::vector<NF> c_;
};

} // namespace voawb

#endif
