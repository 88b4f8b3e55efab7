#include "pcl/galois.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pcl/errors.hpp"

namespace pcl {

Field::Field(int bits, std::uint32_t poly)
    : bits_(bits), order_(1u << bits), exp_(2 * (order_ - 1)), log_(order_, 0) {
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i + 1 < order_; ++i) {
    exp_[i] = static_cast<Symbol>(x);
    log_[x] = i;
    x <<= 1;
    if (x & order_) x ^= poly;
  }
  if (x != 1) throw std::logic_error("field polynomial is not primitive");
  for (std::uint32_t i = order_ - 1; i < exp_.size(); ++i) exp_[i] = exp_[i - (order_ - 1)];
}

const Field& Field::gf256() {
  static const Field f(8, 0x11D);
  return f;
}

const Field& Field::gf65536() {
  static const Field f(16, 0x1100B);
  return f;
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
}

void Field::mul_add(Symbol c, std::span<const Symbol> x, std::span<Symbol> y) const {
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] ^= x[i];
    return;
  }
  const std::uint32_t lc = log_[c];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) y[i] ^= exp_[lc + log_[x[i]]];
  }
}

const Field& smallest_field_for(std::size_t elements) {
  if (elements <= 256) return Field::gf256();
  if (elements <= 65536) return Field::gf65536();
  throw FieldTooSmallError("need " + std::to_string(elements) +
                           " distinct field elements; GF(2^16) is the largest supported field");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out.at(r, j) = at(r, cols[j]);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) out.at(i, c) = at(rows[i], c);
  return out;
}

std::optional<Matrix> invert(const Matrix& m, const Field& f) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix is not square");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix b = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a.at(piv, col) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a.at(piv, c), a.at(col, c));
        std::swap(b.at(piv, c), b.at(col, c));
      }
    }
    const Symbol s = f.inv(a.at(col, col));
    for (std::size_t c = 0; c < n; ++c) {
      a.at(col, c) = f.mul(a.at(col, c), s);
      b.at(col, c) = f.mul(b.at(col, c), s);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Symbol factor = a.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a.at(r, c) ^= f.mul(factor, a.at(col, c));
        b.at(r, c) ^= f.mul(factor, b.at(col, c));
      }
    }
  }
  return b;
}

std::size_t rank(Matrix a, const Field& f) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t piv = r;
    while (piv < a.rows() && a.at(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a.at(piv, c), a.at(r, c));
    const Symbol s = f.inv(a.at(r, col));
    for (std::size_t c = 0; c < a.cols(); ++c) a.at(r, c) = f.mul(a.at(r, c), s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, col) == 0) continue;
      const Symbol factor = a.at(i, col);
      for (std::size_t c = 0; c < a.cols(); ++c) a.at(i, c) ^= f.mul(factor, a.at(r, c));
    }
    ++r;
  }
  return r;
}

namespace {

// x_i = i, y_j = a + j; all a + b values are distinct so x_i + y_j != 0.
Matrix cauchy(std::size_t a, std::size_t b, const Field& f) {
  if (a + b > f.order()) {
    throw FieldTooSmallError("a " + std::to_string(a) + "x" + std::to_string(b) +
                             " coefficient matrix needs " + std::to_string(a + b) +
                             " field elements; escalate to GF(2^16)");
  }
  Matrix m(a, b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      m.at(i, j) = f.inv(static_cast<Symbol>(i ^ (a + j)));
  return m;
}

}  // namespace

Matrix make_coeff_matrix(std::size_t a, std::size_t b, const Field& f) {
  if (a > b) throw std::invalid_argument("coefficient matrix needs rows <= cols");
  return cauchy(a, b, f);
}

MdsCode::MdsCode(std::size_t n, std::size_t k, const Field& f) : n_(n), k_(k), field_(&f) {
  if (k == 0 || n < k) throw std::invalid_argument("MDS code needs 1 <= k <= n");
  if (n > k) {
    if (n > f.order()) {
      throw FieldTooSmallError("(" + std::to_string(n) + "," + std::to_string(k) +
                               ") MDS code exceeds the field; escalate to GF(2^16)");
    }
    parity_ = cauchy(n - k, k, f);
  }
}

std::vector<Symbol> MdsCode::generator_row(std::size_t pos) const {
  if (pos >= n_) throw std::out_of_range("MDS position out of range");
  std::vector<Symbol> row(k_, 0);
  if (pos < k_) {
    row[pos] = 1;
  } else {
    for (std::size_t c = 0; c < k_; ++c) row[c] = parity_.at(pos - k_, c);
  }
  return row;
}

std::vector<Symbol> MdsCode::encode(std::span<const Symbol> stripe) const {
  if (stripe.size() != k_) throw std::invalid_argument("stripe length must equal k");
  std::vector<Symbol> out(stripe.begin(), stripe.end());
  out.resize(n_, 0);
  for (std::size_t r = 0; r + k_ < n_; ++r) {
    Symbol acc = 0;
    for (std::size_t c = 0; c < k_; ++c) acc ^= field_->mul(parity_.at(r, c), stripe[c]);
    out[k_ + r] = acc;
  }
  return out;
}

Matrix MdsCode::decoding_matrix(std::span<const std::size_t> positions) const {
  Matrix g(k_, k_);
  for (std::size_t i = 0; i < k_; ++i) {
    auto row = generator_row(positions[i]);
    for (std::size_t c = 0; c < k_; ++c) g.at(i, c) = row[c];
  }
  auto inv = invert(g, *field_);
  if (!inv) throw std::logic_error("MDS generator submatrix is singular");
  return *inv;
}

namespace {

std::vector<std::size_t> first_k_positions(std::span<const std::size_t> positions, std::size_t n,
                                           std::size_t k) {
  std::vector<bool> seen(n, false);
  for (std::size_t p : positions) {
    if (p >= n) throw std::invalid_argument("MDS position out of range");
    if (seen[p]) throw std::invalid_argument("repeated MDS position");
    seen[p] = true;
  }
  if (positions.size() < k) {
    throw UnrecoverableError("have " + std::to_string(positions.size()) + " coded symbols, need " +
                             std::to_string(k));
  }
  return {positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace

std::vector<Symbol> MdsCode::decode(
    std::span<const std::pair<std::size_t, Symbol>> symbols) const {
  std::vector<std::size_t> pos;
  for (const auto& s : symbols) pos.push_back(s.first);
  auto use = first_k_positions(pos, n_, k_);
  std::vector<std::vector<Symbol>> blocks;
  for (std::size_t i = 0; i < k_; ++i) blocks.push_back({symbols[i].second});
  auto out = decode_blocks(use, blocks);
  std::vector<Symbol> stripe(k_);
  for (std::size_t i = 0; i < k_; ++i) stripe[i] = out[i][0];
  return stripe;
}

std::vector<std::vector<Symbol>> MdsCode::encode_blocks(
    const std::vector<std::vector<Symbol>>& data) const {
  if (data.size() != k_) throw std::invalid_argument("need exactly k data blocks");
  const std::size_t len = data.empty() ? 0 : data[0].size();
  for (const auto& d : data)
    if (d.size() != len) throw std::invalid_argument("data blocks differ in length");
  std::vector<std::vector<Symbol>> out(data.begin(), data.end());
  for (std::size_t r = 0; r + k_ < n_; ++r) {
    std::vector<Symbol> block(len, 0);
    for (std::size_t c = 0; c < k_; ++c) field_->mul_add(parity_.at(r, c), data[c], block);
    out.push_back(std::move(block));
  }
  return out;
}

std::vector<std::vector<Symbol>> MdsCode::decode_blocks(
    std::span<const std::size_t> positions, const std::vector<std::vector<Symbol>>& blocks) const {
  if (positions.size() != blocks.size())
    throw std::invalid_argument("positions and blocks differ in count");
  auto use = first_k_positions(positions, n_, k_);
  const std::size_t len = blocks[0].size();
  bool systematic = true;
  for (std::size_t i = 0; i < k_; ++i) systematic = systematic && use[i] < k_;
  std::vector<std::vector<Symbol>> out(k_, std::vector<Symbol>(len, 0));
  if (systematic) {
    for (std::size_t i = 0; i < k_; ++i) out[use[i]] = blocks[i];
    return out;
  }
  Matrix dec = decoding_matrix(use);
  for (std::size_t r = 0; r < k_; ++r)
    for (std::size_t c = 0; c < k_; ++c) field_->mul_add(dec.at(r, c), blocks[c], out[r]);
  return out;
}

}  // namespace pcl
