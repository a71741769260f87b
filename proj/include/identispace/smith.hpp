#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "identispace/integer_matrix.hpp"

namespace identispace {

/// U * A * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}.
template <class Int>
struct SNFResult {
    Matrix<Int> D;
    Matrix<Int> U;
    Matrix<Int> V;

    std::vector<Int> diagonal() const
    {
        std::vector<Int> d;
        for (std::size_t k = 0; k < std::min(D.rows(), D.cols()); ++k) d.push_back(D(k, k));
        return d;
    }

    std::size_t rank() const
    {
        std::size_t r = 0;
        for (std::size_t k = 0; k < std::min(D.rows(), D.cols()); ++k)
            if (D(k, k) != Int(0)) ++r;
        return r;
    }
};

namespace detail {

/// Smallest nonzero |entry| in the trailing block starting at (t, t); ties
/// resolved by row-major position.
template <class Int>
std::optional<std::pair<std::size_t, std::size_t>> smallest_entry(const Matrix<Int>& m, std::size_t t)
{
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Int best_abs{};
    for (std::size_t r = t; r < m.rows(); ++r)
        for (std::size_t c = t; c < m.cols(); ++c) {
            if (m(r, c) == Int(0)) continue;
            Int a = checked::abs(m(r, c));
            if (!best || a < best_abs) {
                best = {r, c};
                best_abs = std::move(a);
            }
        }
    return best;
}

}  // namespace detail

/// Smith normal form by repeated smallest-pivot reduction. Built-in integer
/// types throw std::overflow_error rather than wrap.
template <class Int>
SNFResult<Int> smith_normal_form(const Matrix<Int>& a)
{
    SNFResult<Int> res{a, Matrix<Int>::identity(a.rows()), Matrix<Int>::identity(a.cols())};
    Matrix<Int>& d = res.D;
    const std::size_t limit = std::min(d.rows(), d.cols());

    for (std::size_t t = 0; t < limit; ++t) {
        for (;;) {
            const auto pivot = detail::smallest_entry(d, t);
            if (!pivot) return res;  // trailing block is zero
            d.swap_rows(t, pivot->first);
            res.U.swap_rows(t, pivot->first);
            d.swap_cols(t, pivot->second);
            res.V.swap_cols(t, pivot->second);

            bool cleared = true;
            for (std::size_t r = t + 1; r < d.rows(); ++r) {
                if (d(r, t) == Int(0)) continue;
                const Int q = checked::neg(checked::div(d(r, t), d(t, t)));
                d.add_row_multiple(r, t, q);
                res.U.add_row_multiple(r, t, q);
                if (d(r, t) != Int(0)) cleared = false;
            }
            for (std::size_t c = t + 1; c < d.cols(); ++c) {
                if (d(t, c) == Int(0)) continue;
                const Int q = checked::neg(checked::div(d(t, c), d(t, t)));
                d.add_col_multiple(c, t, q);
                res.V.add_col_multiple(c, t, q);
                if (d(t, c) != Int(0)) cleared = false;
            }
            if (!cleared) continue;

            // Pivot must divide the whole trailing block; otherwise fold the
            // offending row in and reduce again.
            std::optional<std::size_t> bad_row;
            for (std::size_t r = t + 1; r < d.rows() && !bad_row; ++r)
                for (std::size_t c = t + 1; c < d.cols(); ++c)
                    if (d(r, c) % d(t, t) != Int(0)) {
                        bad_row = r;
                        break;
                    }
            if (!bad_row) break;
            d.add_row_multiple(t, *bad_row, Int(1));
            res.U.add_row_multiple(t, *bad_row, Int(1));
        }
        if (d(t, t) < Int(0)) {
            d.negate_row(t);
            res.U.negate_row(t);
        }
    }
    return res;
}

}  // namespace identispace
