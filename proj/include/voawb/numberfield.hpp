#ifndef VOAWB_NUMBERFIELD_HPP
#define VOAWB_NUMBERFIELD_HPP

#include <gmpxx.h>
#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "voawb/errors.hpp"

namespace voawb {

using Rat = mpq_class;

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

/// Element of Q(i,sqrt2), stored in the basis {1, i, sqrt2, i*sqrt2}.
/// Coordinates are exact rationals in lowest terms (mpq_class canonical form).
class NF {
public:
    NF() : c_{} {}
    NF(int n) : c_{Rat(n), Rat(), Rat(), Rat()} {}
    NF(const Rat& q) : c_{q, Rat(), Rat(), Rat()} {}
    NF(Rat a, Rat b, Rat c, Rat d) : c_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    static NF zero() { return NF(); }
    static NF one() { return NF(1); }
    static NF i() { return NF(Rat(0), Rat(1), Rat(0), Rat(0)); }
    static NF sqrt2() { return NF(Rat(0), Rat(0), Rat(1), Rat(0)); }
    static NF from_rat(const Rat& q) { return NF(q); }
    static NF from_nf(const NF& x) { return x; }

    const Rat& coord(int j) const { return c_[j]; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    /// Rational part; throws unless the element is rational.
    const Rat& as_rat() const;

    NF operator-() const { return NF(-c_[0], -c_[1], -c_[2], -c_[3]); }
    NF& operator+=(const NF& o);
    NF& operator-=(const NF& o);
    NF operator+(const NF& o) const { NF r = *this; r += o; return r; }
    NF operator-(const NF& o) const { NF r = *this; r -= o; return r; }
    NF operator*(const NF& o) const;
    NF& operator*=(const NF& o) { *this = *this * o; return *this; }
    NF inv() const;
    NF operator/(const NF& o) const { return *this * o.inv(); }

    /// Galois images: i -> -i and sqrt2 -> -sqrt2.
    NF conj_i() const { return NF(c_[0], -c_[1], c_[2], -c_[3]); }
    NF conj_s() const { return NF(c_[0], c_[1], -c_[2], -c_[3]); }

    bool operator==(const NF& o) const { return c_ == o.c_; }
    bool operator!=(const NF& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const NF& o) const;

    /// Rendering in the form "a+bi+c√2+di√2"; parse accepts "√2" or "s2".
    std::string to_string() const;
    static NF parse(const std::string& s);

    size_t hash() const;

private:
    std::array<Rat, 4> c_; // coordinates on {1, i, sqrt2, i*sqrt2}
};

inline NF operator*(const Rat& q, const NF& x) { return NF(q) * x; }

} // namespace voawb

#endif
