#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mori {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

// Overflow-checked primitives; throw std::overflow_error.
Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

/// Dense row-major integer matrix. Sizes here are tiny (rank of H^2), so
/// everything is stored by value.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0);
    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix diagonal(std::span<const Int> entries);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;
    IntVector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const Int> values);

    IntMatrix transpose() const;
    bool is_symmetric() const;

    IntMatrix operator*(const IntMatrix& rhs) const;
    IntVector operator*(std::span<const Int> v) const;
    IntMatrix operator-() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    /// Exact determinant (fraction-free elimination on big integers).
    Int determinant() const;
    /// Inverse of a matrix with determinant +-1; throws otherwise.
    IntMatrix unimodular_inverse() const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

Int dot(std::span<const Int> a, std::span<const Int> b);
IntVector add(std::span<const Int> a, std::span<const Int> b);
IntVector scale(Int s, std::span<const Int> v);
bool is_zero(std::span<const Int> v);
std::string vector_to_string(std::span<const Int> v);

/// Nonnegative residue of a modulo m (m > 0).
Int mod_floor(Int a, Int m);

} // namespace mori
