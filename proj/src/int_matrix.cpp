#include "mori/int_matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mori {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

Int checked_add(Int a, Int b)
{
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in addition");
    return r;
}

Int checked_mul(Int a, Int b)
{
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in multiplication");
    return r;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, Int fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw std::invalid_argument("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(std::span<const Int> entries)
{
    IntMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, i) = entries[i];
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows)
{
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_)
            throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

IntVector IntMatrix::row(std::size_t i) const
{
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const
{
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

void IntMatrix::set_column(std::size_t j, std::span<const Int> values)
{
    if (values.size() != rows_)
        throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = values[i];
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_symmetric() const
{
    if (!is_square())
        return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i))
                return false;
    return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("matrix product dimension mismatch");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int a = (*this)(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) = checked_add(out(i, j), checked_mul(a, rhs(k, j)));
        }
    return out;
}

IntVector IntMatrix::operator*(std::span<const Int> v) const
{
    if (cols_ != v.size())
        throw std::invalid_argument("matrix-vector dimension mismatch");
    IntVector out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            acc = checked_add(acc, checked_mul((*this)(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

IntMatrix IntMatrix::operator-() const
{
    IntMatrix out = *this;
    for (auto& x : out.data_)
        x = -x;
    return out;
}

Int IntMatrix::determinant() const
{
    if (!is_square())
        throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0)
        return 1;
    // Bareiss fraction-free elimination.
    std::vector<BigInt> a(data_.begin(), data_.end());
    auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return a[i * n + j]; };
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && at(swap_row, k) == 0)
                ++swap_row;
            if (swap_row == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(at(k, j), at(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    BigInt det = at(n - 1, n - 1) * sign;
    if (det > BigInt(std::numeric_limits<Int>::max()) || det < BigInt(std::numeric_limits<Int>::min()))
        throw std::overflow_error("determinant exceeds 64-bit range");
    return static_cast<Int>(det);
}

IntMatrix IntMatrix::unimodular_inverse() const
{
    const Int det = determinant();
    if (det != 1 && det != -1)
        throw std::invalid_argument("matrix is not unimodular");
    const std::size_t n = rows_;
    std::vector<BigRational> a(n * 2 * n);
    auto at = [&](std::size_t i, std::size_t j) -> BigRational& { return a[i * 2 * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            at(i, j) = (*this)(i, j);
        at(i, n + i) = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (at(pivot, col) == 0)
            ++pivot;
        if (pivot != col)
            for (std::size_t j = 0; j < 2 * n; ++j)
                std::swap(at(pivot, j), at(col, j));
        const BigRational p = at(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j)
            at(col, j) /= p;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || at(i, col) == 0)
                continue;
            const BigRational f = at(i, col);
            for (std::size_t j = 0; j < 2 * n; ++j)
                at(i, j) -= f * at(col, j);
        }
    }
    IntMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const BigRational& q = at(i, n + j);
            if (denominator(q) != 1)
                throw std::logic_error("non-integral inverse of unimodular matrix");
            inv(i, j) = static_cast<Int>(numerator(q));
        }
    return inv;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
{
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i)
            os << ',';
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                os << ',';
            os << m(i, j);
        }
        os << ']';
    }
    return os << ']';
}

Int dot(std::span<const Int> a, std::span<const Int> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("dot product length mismatch");
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = checked_add(acc, checked_mul(a[i], b[i]));
    return acc;
}

IntVector add(std::span<const Int> a, std::span<const Int> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vector sum length mismatch");
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = checked_add(a[i], b[i]);
    return out;
}

IntVector scale(Int s, std::span<const Int> v)
{
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = checked_mul(s, v[i]);
    return out;
}

bool is_zero(std::span<const Int> v)
{
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

std::string vector_to_string(std::span<const Int> v)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ',';
        os << v[i];
    }
    os << ']';
    return os.str();
}

Int mod_floor(Int a, Int m)
{
    const Int r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace mori
