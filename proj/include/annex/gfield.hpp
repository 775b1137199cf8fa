#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace annex {

/// An element of GF(2^m), stored as the bit vector of polynomial coefficients.
struct FieldElement {
  std::uint16_t value = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint16_t v) : value(v) {}

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

inline constexpr unsigned kMaxFieldDegree = 16;

/// Carry-less product of a and b reduced modulo `polynomial` (degree `degree`).
/// Schoolbook shift-and-add; used for table construction and as a test oracle.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, unsigned degree,
                        std::uint32_t polynomial);

/// True when `polynomial` has exact degree `degree` and no factor over GF(2).
bool is_irreducible(std::uint32_t polynomial, unsigned degree);

/// Irreducible polynomial used when none is given. 0x11B for degree 8.
std::uint32_t default_polynomial(unsigned degree);

/// GF(2^m) arithmetic context.
///
/// Multiplication goes through log/antilog tables built at construction. The
/// reduction polynomial only has to be irreducible; the table base is the
/// first primitive element found, so non-primitive moduli such as 0x11B work.
/// Immutable after construction and safe to share between threads.
class GaloisField {
 public:
  explicit GaloisField(unsigned degree = 8);
  GaloisField(unsigned degree, std::uint32_t reduction_polynomial);

  /// Field with q elements; q must be a power of two in [2, 2^16].
  static GaloisField with_size(std::uint32_t q);

  unsigned degree() const { return degree_; }
  std::uint32_t size() const { return size_; }
  std::uint32_t polynomial() const { return polynomial_; }
  FieldElement primitive_element() const { return primitive_; }

  /// Checked conversion from an integer; throws DomainError if v >= q.
  FieldElement element(std::uint32_t v) const;

  FieldElement add(FieldElement a, FieldElement b) const {
    return FieldElement(static_cast<std::uint16_t>(a.value ^ b.value));
  }
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, b); }

  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.value == 0 || b.value == 0) return FieldElement{};
    return FieldElement(exp_[log_[a.value] + log_[b.value]]);
  }

  /// Throws DomainError for a == 0.
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const;
  FieldElement pow(FieldElement a, std::uint64_t e) const;

  /// dst[i] += c * src[i]
  void axpy(std::span<FieldElement> dst, FieldElement c,
            std::span<const FieldElement> src) const;
  /// v[i] *= c
  void scale(std::span<FieldElement> v, FieldElement c) const;
  FieldElement dot(std::span<const FieldElement> a,
                   std::span<const FieldElement> b) const;

  std::string to_string() const;

 private:
  void build_tables();

  unsigned degree_;
  std::uint32_t polynomial_;
  std::uint32_t size_;
  FieldElement primitive_;
  std::vector<std::uint16_t> log_;
  std::vector<std::uint16_t> exp_;  // length 2(q-1) so log sums never wrap
};

/// Dense row-major matrix over a GaloisField.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<FieldElement> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElement& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  FieldElement operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<FieldElement> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const FieldElement> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<const FieldElement> entries() const { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> entries_;
};

/// Row rank by Gaussian elimination (first nonzero pivot, leftmost column first).
std::size_t rank(const GaloisField& field, Matrix m);

/// X with a * X == rhs. Throws RankDeficiencyError when a is singular and
/// ParameterError on shape mismatch.
Matrix solve(const GaloisField& field, const Matrix& a, const Matrix& rhs);

Matrix multiply(const GaloisField& field, const Matrix& a, const Matrix& b);

}  // namespace annex
