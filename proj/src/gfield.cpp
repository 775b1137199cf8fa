#include "annex/gfield.hpp"

#include <array>
#include <bit>
#include <sstream>
#include <utility>

#include "annex/errors.hpp"

namespace annex {

namespace {

int poly_degree(std::uint32_t p) { return p == 0 ? -1 : std::bit_width(p) - 1; }

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

}  // namespace

std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, unsigned degree,
                        std::uint32_t polynomial) {
  const std::uint32_t top = 1u << degree;
  std::uint32_t result = 0;
  while (b != 0) {
    if (b & 1u) result ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= polynomial;
  }
  return result;
}

bool is_irreducible(std::uint32_t polynomial, unsigned degree) {
  if (degree == 0 || degree > kMaxFieldDegree) return false;
  if (poly_degree(polynomial) != static_cast<int>(degree)) return false;
  for (unsigned d = 1; 2 * d <= degree; ++d) {
    for (std::uint32_t f = 1u << d; f < (2u << d); ++f) {
      if (poly_mod(polynomial, f) == 0) return false;
    }
  }
  return true;
}

std::uint32_t default_polynomial(unsigned degree) {
  static constexpr std::array<std::uint32_t, kMaxFieldDegree + 1> kTable = {
      0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11B,
      0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};
  if (degree == 0 || degree > kMaxFieldDegree) {
    throw ParameterError("field degree must be in [1, 16], got " + std::to_string(degree));
  }
  return kTable[degree];
}

GaloisField::GaloisField(unsigned degree) : GaloisField(degree, default_polynomial(degree)) {}

GaloisField::GaloisField(unsigned degree, std::uint32_t reduction_polynomial)
    : degree_(degree), polynomial_(reduction_polynomial), size_(0) {
  if (!is_irreducible(reduction_polynomial, degree)) {
    std::ostringstream os;
    os << "reduction polynomial 0x" << std::hex << reduction_polynomial
       << " is not irreducible of degree " << std::dec << degree;
    throw ParameterError(os.str());
  }
  size_ = 1u << degree;
  build_tables();
}

GaloisField GaloisField::with_size(std::uint32_t q) {
  if (q < 2 || !std::has_single_bit(q) || q > (1u << kMaxFieldDegree)) {
    throw ParameterError("field size must be a power of two in [2, 65536], got " +
                         std::to_string(q));
  }
  return GaloisField(static_cast<unsigned>(std::countr_zero(q)));
}

void GaloisField::build_tables() {
  const std::uint32_t order = size_ - 1;
  // Find a generator of the multiplicative group.
  std::uint32_t gen = 0;
  for (std::uint32_t c = (size_ == 2 ? 1 : 2); c < size_ && gen == 0; ++c) {
    std::uint32_t x = c;
    std::uint32_t k = 1;
    while (x != 1) {
      x = clmul_mod(x, c, degree_, polynomial_);
      ++k;
    }
    if (k == order) gen = c;
  }
  primitive_ = FieldElement(static_cast<std::uint16_t>(gen));

  log_.assign(size_, 0);
  exp_.assign(2 * order, 0);
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < order; ++i) {
    exp_[i] = static_cast<std::uint16_t>(x);
    exp_[i + order] = static_cast<std::uint16_t>(x);
    log_[x] = static_cast<std::uint16_t>(i);
    x = clmul_mod(x, gen, degree_, polynomial_);
  }
}

FieldElement GaloisField::element(std::uint32_t v) const {
  if (v >= size_) {
    throw DomainError("value " + std::to_string(v) + " outside GF(" + std::to_string(size_) + ")");
  }
  return FieldElement(static_cast<std::uint16_t>(v));
}

FieldElement GaloisField::inv(FieldElement a) const {
  if (a.value == 0) throw DomainError("zero has no multiplicative inverse");
  const std::uint32_t order = size_ - 1;
  return FieldElement(exp_[(order - log_[a.value]) % order]);
}

FieldElement GaloisField::div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

FieldElement GaloisField::pow(FieldElement a, std::uint64_t e) const {
  if (e == 0) return FieldElement(1);
  if (a.value == 0) return FieldElement{};
  const std::uint64_t order = size_ - 1;
  return FieldElement(exp_[(static_cast<std::uint64_t>(log_[a.value]) * (e % order)) % order]);
}

void GaloisField::axpy(std::span<FieldElement> dst, FieldElement c,
                       std::span<const FieldElement> src) const {
  if (c.value == 0) return;
  const std::size_t n = dst.size();
  if (c.value == 1) {
    for (std::size_t i = 0; i < n; ++i) dst[i].value ^= src[i].value;
    return;
  }
  const std::uint32_t lc = log_[c.value];
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t s = src[i].value;
    if (s != 0) dst[i].value ^= exp_[log_[s] + lc];
  }
}

void GaloisField::scale(std::span<FieldElement> v, FieldElement c) const {
  if (c.value == 1) return;
  for (auto& x : v) x = mul(x, c);
}

FieldElement GaloisField::dot(std::span<const FieldElement> a,
                              std::span<const FieldElement> b) const {
  std::uint16_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= mul(a[i], b[i]).value;
  return FieldElement(acc);
}

std::string GaloisField::to_string() const {
  std::ostringstream os;
  os << "GF(" << size_ << ") mod 0x" << std::hex << polynomial_;
  return os.str();
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<FieldElement> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ParameterError("matrix entry count does not match its shape");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement(1);
  return m;
}

std::size_t rank(const GaloisField& field, Matrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, c).value == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(r, k), m(pivot, k));
    }
    const FieldElement inv_p = field.inv(m(r, c));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const FieldElement f = field.mul(m(i, c), inv_p);
      field.axpy(m.row(i), f, m.row(r));
    }
    ++r;
  }
  return r;
}

Matrix solve(const GaloisField& field, const Matrix& a, const Matrix& rhs) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ParameterError("solve: coefficient matrix must be square");
  if (rhs.rows() != n) throw ParameterError("solve: right-hand side row count mismatch");

  Matrix m = a;
  Matrix x = rhs;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c).value == 0) ++pivot;
    if (pivot == n) throw RankDeficiencyError("solve: matrix is singular");
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(pivot, k));
      for (std::size_t k = 0; k < x.cols(); ++k) std::swap(x(c, k), x(pivot, k));
    }
    const FieldElement inv_p = field.inv(m(c, c));
    field.scale(m.row(c), inv_p);
    field.scale(x.row(c), inv_p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const FieldElement f = m(i, c);
      if (f.value == 0) continue;
      field.axpy(m.row(i), f, m.row(c));
      field.axpy(x.row(i), f, x.row(c));
    }
  }
  return x;
}

Matrix multiply(const GaloisField& field, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ParameterError("multiply: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      field.axpy(out.row(i), a(i, k), b.row(k));
    }
  }
  return out;
}

}  // namespace annex
