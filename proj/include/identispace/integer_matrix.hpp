#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace identispace {

using BigInt = boost::multiprecision::cpp_int;

/// Arithmetic that throws std::overflow_error for built-in integers and
/// forwards to the type's own operators otherwise.
namespace checked {

template <class Int>
Int add(const Int& a, const Int& b)
{
    if constexpr (std::is_integral_v<Int>) {
        Int r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
        return r;
    } else {
        return a + b;
    }
}

template <class Int>
Int sub(const Int& a, const Int& b)
{
    if constexpr (std::is_integral_v<Int>) {
        Int r;
        if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
        return r;
    } else {
        return a - b;
    }
}

template <class Int>
Int mul(const Int& a, const Int& b)
{
    if constexpr (std::is_integral_v<Int>) {
        Int r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
        return r;
    } else {
        return a * b;
    }
}

template <class Int>
Int neg(const Int& a)
{
    return sub(Int(0), a);
}

/// Truncating quotient.
template <class Int>
Int div(const Int& a, const Int& b)
{
    if constexpr (std::is_integral_v<Int> && std::is_signed_v<Int>) {
        if (b == Int(-1) && a == std::numeric_limits<Int>::min())
            throw std::overflow_error("integer overflow in division");
    }
    return a / b;
}

template <class Int>
Int abs(const Int& a)
{
    return a < Int(0) ? neg(a) : a;
}

}  // namespace checked

/// Dense row-major integer matrix.
template <class Int>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

    Matrix(std::initializer_list<std::initializer_list<long long>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
    {
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            for (long long v : r) data_.push_back(Int(v));
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Int(1);
        return m;
    }

    template <class Other>
    static Matrix from(const Matrix<Other>& o)
    {
        Matrix m(o.rows(), o.cols());
        for (std::size_t r = 0; r < o.rows(); ++r)
            for (std::size_t c = 0; c < o.cols(); ++c) m(r, c) = Int(o(r, c));
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const
    {
        for (const Int& v : data_)
            if (v != Int(0)) return false;
        return true;
    }

    Matrix transposed() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }

    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Int& factor)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(dst, c) = checked::add((*this)(dst, c), checked::mul(factor, (*this)(src, c)));
    }

    /// col[dst] += factor * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const Int& factor)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, dst) = checked::add((*this)(r, dst), checked::mul(factor, (*this)(r, src)));
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = checked::neg((*this)(r, c));
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not compose");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Int& v = a(r, k);
                if (v == Int(0)) continue;
                for (std::size_t c = 0; c < b.cols_; ++c)
                    out(r, c) = checked::add(out(r, c), checked::mul(v, b(k, c)));
            }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<Int> data_;
};

using IntMatrix = Matrix<BigInt>;

}  // namespace identispace
