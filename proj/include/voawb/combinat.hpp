#ifndef VOAWB_COMBINAT_HPP
#define VOAWB_COMBINAT_HPP

#include <cstdint>
#include <vector>

#include "voawb/numberfield.hpp"

namespace voawb {

/// Generalized binomial coefficient binom(m, l) = m(m-1)...(m-l+1)/l!,
/// defined for any integer m and l >= 0.
inline Rat binom_rat(long m, long l) {
    if (l < 0) return Rat(0);
    Rat num(1), den(1);
    for (long j = 0; j < l; ++j) {
        num *= Rat(m - j);
        den *= Rat(j + 1);
    }
    Rat r = num / den;
    r.canonicalize();
    return r;
}

/// Number of partitions of n with parts in `colors` colors
/// (generating function prod (1-q^j)^-colors).
inline int64_t colored_partitions(int n, int colors) {
    if (n < 0) return 0;
    std::vector<int64_t> p(n + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int c = 0; c < colors; ++c)
            for (int v = part; v <= n; ++v) p[v] += p[v - part];
    return p[n];
}

/// All colored partitions of n: weakly decreasing part sizes, and for equal
/// part sizes weakly increasing colors. Each entry is a list of (part, color).
/// Returned in a fixed deterministic order.
inline std::vector<std::vector<std::pair<int, int>>> colored_partition_list(int n, int colors) {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur;
    // recursion over (remaining, max part, min color for the current part size)
    struct Rec {
        int colors;
        std::vector<std::vector<std::pair<int, int>>>& out;
        std::vector<std::pair<int, int>>& cur;
        void go(int rem, int max_part, int min_color) {
            if (rem == 0) {
                out.push_back(cur);
                return;
            }
            for (int part = std::min(rem, max_part); part >= 1; --part) {
                int c0 = (part == max_part) ? min_color : 0;
                for (int c = c0; c < colors; ++c) {
                    cur.emplace_back(part, c);
                    go(rem - part, part, c);
                    cur.pop_back();
                }
            }
        }
    } rec{colors, out, cur};
    rec.go(n, n, 0);
    return out;
}

} // namespace voawb

#endif
