#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pcl {

using Symbol = std::uint16_t;

// GF(2^m) for m in {8, 16}, backed by exp/log tables.
class Field {
 public:
  static const Field& gf256();
  static const Field& gf65536();

  std::uint32_t order() const { return order_; }
  int bits() const { return bits_; }

  Symbol add(Symbol a, Symbol b) const { return a ^ b; }
  Symbol sub(Symbol a, Symbol b) const { return a ^ b; }
  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  // Throws std::domain_error for a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  // y[i] ^= c * x[i]
  void mul_add(Symbol c, std::span<const Symbol> x, std::span<Symbol> y) const;

 private:
  Field(int bits, std::uint32_t poly);

  int bits_;
  std::uint32_t order_;
  std::vector<Symbol> exp_;
  std::vector<std::uint32_t> log_;
};

// Smallest supported field with at least `elements` distinct elements.
// Throws FieldTooSmallError beyond 2^16.
const Field& smallest_field_for(std::size_t elements);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Symbol& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  Symbol at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> a_;
};

// nullopt when the matrix is singular. Requires a square matrix.
std::optional<Matrix> invert(const Matrix& m, const Field& f);
std::size_t rank(Matrix m, const Field& f);

// a x b Cauchy matrix 1/(x_i + y_j); every square submatrix is invertible,
// so any a columns are linearly independent.
// Requires a <= b; throws FieldTooSmallError if a + b exceeds the field order.
Matrix make_coeff_matrix(std::size_t a, std::size_t b, const Field& f);

// Systematic (n, k) MDS code: generator rows are [I_k; C] with C an
// (n-k) x k Cauchy block. Positions are 0-based.
class MdsCode {
 public:
  MdsCode(std::size_t n, std::size_t k, const Field& f);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  const Field& field() const { return *field_; }

  // Row `pos` of the n x k generator.
  std::vector<Symbol> generator_row(std::size_t pos) const;

  std::vector<Symbol> encode(std::span<const Symbol> stripe) const;

  // `symbols` holds (position, value) pairs; the first k distinct positions
  // are used. Throws UnrecoverableError with fewer than k, and
  // std::invalid_argument on repeated or out-of-range positions.
  std::vector<Symbol> decode(std::span<const std::pair<std::size_t, Symbol>> symbols) const;

  // Column-wise variants: k data blocks of equal length in, n coded blocks out.
  std::vector<std::vector<Symbol>> encode_blocks(const std::vector<std::vector<Symbol>>& data) const;
  std::vector<std::vector<Symbol>> decode_blocks(
      std::span<const std::size_t> positions,
      const std::vector<std::vector<Symbol>>& blocks) const;

 private:
  Matrix decoding_matrix(std::span<const std::size_t> positions) const;

  std::size_t n_;
  std::size_t k_;
  const Field* field_;
  Matrix parity_;
};

}  // namespace pcl
