#ifndef VOAWB_LINALG_HPP
#define VOAWB_LINALG_HPP

#include <optional>
#include <vector>

#include "voawb/errors.hpp"

namespace voawb {

/// Dense matrix over an exact field. Row-major, deterministic elimination
/// (first nonzero pivot), no pivot heuristics so runs are reproducible.
template <class F>
class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(int rows, int cols) : r_(rows), c_(cols), a_((size_t)rows * cols, F::zero()) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int j = 0; j < n; ++j) m(j, j) = F::one();
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    F& operator()(int i, int j) { return a_[(size_t)i * c_ + j]; }
    const F& operator()(int i, int j) const { return a_[(size_t)i * c_ + j]; }

    Mat operator*(const Mat& o) const {
        if (c_ != o.r_) throw DimensionMismatch("matrix product shape");
        Mat out(r_, o.c_);
        for (int i = 0; i < r_; ++i)
            for (int l = 0; l < c_; ++l) {
                const F& x = (*this)(i, l);
                if (x.is_zero()) continue;
                for (int j = 0; j < o.c_; ++j) {
                    if (o(l, j).is_zero()) continue;
                    out(i, j) += x * o(l, j);
                }
            }
        return out;
    }

    Mat operator+(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix sum shape");
        Mat out(r_, c_);
        for (size_t t = 0; t < a_.size(); ++t) out.a_[t] = a_[t] + o.a_[t];
        return out;
    }

    Mat operator-(const Mat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("matrix difference shape");
        Mat out(r_, c_);
        for (size_t t = 0; t < a_.size(); ++t) out.a_[t] = a_[t] - o.a_[t];
        return out;
    }

    Mat operator*(const F& s) const {
        Mat out(r_, c_);
        for (size_t t = 0; t < a_.size(); ++t) out.a_[t] = a_[t] * s;
        return out;
    }

    Mat transpose() const {
        Mat out(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    bool is_zero() const {
        for (const auto& x : a_) if (!x.is_zero()) return false;
        return true;
    }

    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    /// In-place reduced row echelon form; returns pivot columns.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int row = 0;
        for (int col = 0; col < c_ && row < r_; ++col) {
            int pr = -1;
            for (int i = row; i < r_; ++i)
                if (!( *this)(i, col).is_zero()) { pr = i; break; }
            if (pr < 0) continue;
            if (pr != row)
                for (int j = 0; j < c_; ++j) std::swap((*this)(pr, j), (*this)(row, j));
            F inv = (*this)(row, col).inv();
            for (int j = col; j < c_; ++j) (*this)(row, j) = (*this)(row, j) * inv;
            for (int i = 0; i < r_; ++i) {
                if (i == row) continue;
                F f = (*this)(i, col);
                if (f.is_zero()) continue;
                for (int j = col; j < c_; ++j) (*this)(i, j) -= f * (*this)(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    int rank() const {
        Mat tmp = *this;
        return (int)tmp.rref().size();
    }

    /// Basis of the right null space, echelon-normalized.
    std::vector<std::vector<F>> kernel() const {
        Mat tmp = *this;
        std::vector<int> piv = tmp.rref();
        std::vector<bool> is_piv(c_, false);
        for (int c : piv) is_piv[c] = true;
        std::vector<std::vector<F>> out;
        for (int free = 0; free < c_; ++free) {
            if (is_piv[free]) continue;
            std::vector<F> v(c_, F::zero());
            v[free] = F::one();
            for (size_t pi = 0; pi < piv.size(); ++pi)
                v[piv[pi]] = F::zero() - tmp((int)pi, free);
            out.push_back(std::move(v));
        }
        return out;
    }

    /// Solves A x = b; returns nullopt when inconsistent. Free variables are 0.
    std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
        if ((int)b.size() != r_) throw DimensionMismatch("solve rhs length");
        Mat aug(r_, c_ + 1);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_) = b[i];
        }
        std::vector<int> piv = aug.rref();
        if (!piv.empty() && piv.back() == c_) return std::nullopt;
        std::vector<F> x(c_, F::zero());
        for (size_t pi = 0; pi < piv.size(); ++pi) x[piv[pi]] = aug((int)pi, c_);
        return x;
    }

    F det() const {
        if (r_ != c_) throw DimensionMismatch("determinant of non-square matrix");
        Mat tmp = *this;
        F out = F::one();
        for (int col = 0; col < c_; ++col) {
            int pr = -1;
            for (int i = col; i < r_; ++i)
                if (!tmp(i, col).is_zero()) { pr = i; break; }
            if (pr < 0) return F::zero();
            if (pr != col) {
                for (int j = 0; j < c_; ++j) std::swap(tmp(pr, j), tmp(col, j));
                out = F::zero() - out;
            }
            out = out * tmp(col, col);
            F inv = tmp(col, col).inv();
            for (int i = col + 1; i < r_; ++i) {
                F f = tmp(i, col) * inv;
                if (f.is_zero()) continue;
                for (int j = col; j < c_; ++j) tmp(i, j) -= f * tmp(col, j);
            }
        }
        return out;
    }

    Mat inverse() const {
        if (r_ != c_) throw DimensionMismatch("inverse of non-square matrix");
        Mat aug(r_, 2 * c_);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_ + i) = F::one();
        }
        std::vector<int> piv = aug.rref();
        int left_pivots = 0;
        for (int c : piv)
            if (c < c_) ++left_pivots;
        if (left_pivots != c_) throw SolveFailed("singular matrix has no inverse");
        Mat out(r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(i, j) = aug(i, c_ + j);
        return out;
    }

private:
    int r_, c_;
    std::vector<F> a_;
};

/// Rank of the row span of a list of coordinate vectors.
template <class F>
int span_rank(const std::vector<std::vector<F>>& rows) {
    if (rows.empty()) return 0;
    Mat<F> m((int)rows.size(), (int)rows[0].size());
    for (int i = 0; i < (int)rows.size(); ++i)
        for (int j = 0; j < (int)rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m.rank();
}

} // namespace voawb

#endif
