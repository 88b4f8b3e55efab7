#include "pcl/decoder.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

#include "pcl/errors.hpp"

namespace pcl {

bool DecodeReport::all_success() const {
  return std::all_of(files.begin(), files.end(), [](const FileDecode& f) { return f.success; });
}

namespace {

using Known = std::map<PieceRef, std::vector<Symbol>>;

// Solves the message for the pieces in `unknown`; all other entries must be
// in `known`. Throws std::logic_error if the system is singular.
std::vector<std::vector<Symbol>> solve_message(const Message& m, const std::vector<PieceRef>& unknown,
                                               const Known& known, const Field& f, std::size_t len) {
  const std::size_t u = unknown.size();
  std::vector<std::vector<Symbol>> rhs = m.payload;
  std::vector<std::vector<Symbol>> a(m.rows, std::vector<Symbol>(u, 0));
  for (std::size_t c = 0; c < m.entries.size(); ++c) {
    const auto pos = std::find(unknown.begin(), unknown.end(), m.entries[c]);
    if (pos != unknown.end()) {
      const auto col = static_cast<std::size_t>(pos - unknown.begin());
      for (std::size_t r = 0; r < m.rows; ++r) a[r][col] ^= m.coefficients.at(r, c);
    } else {
      const auto& sym = known.at(m.entries[c]);
      for (std::size_t r = 0; r < m.rows; ++r) f.mul_add(m.coefficients.at(r, c), sym, rhs[r]);
    }
  }
  // Gauss-Jordan on [a | rhs].
  std::size_t row = 0;
  std::vector<std::size_t> pivot_row(u);
  for (std::size_t col = 0; col < u; ++col) {
    std::size_t p = row;
    while (p < m.rows && a[p][col] == 0) ++p;
    if (p == m.rows) throw std::logic_error("singular coefficient submatrix in a delivered message");
    std::swap(a[p], a[row]);
    std::swap(rhs[p], rhs[row]);
    const Symbol s = f.inv(a[row][col]);
    for (auto& x : a[row]) x = f.mul(x, s);
    std::vector<Symbol> scaled(len, 0);
    f.mul_add(s, rhs[row], scaled);
    rhs[row] = std::move(scaled);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Symbol factor = a[r][col];
      for (std::size_t c = 0; c < u; ++c) a[r][c] ^= f.mul(factor, a[row][c]);
      f.mul_add(factor, rhs[row], rhs[r]);
    }
    pivot_row[col] = row;
    ++row;
  }
  std::vector<std::vector<Symbol>> out;
  for (std::size_t col = 0; col < u; ++col) out.push_back(rhs[pivot_row[col]]);
  return out;
}

bool wants_file(const DemandVector& wanted, int file) {
  return std::find(wanted.begin(), wanted.end(), file) != wanted.end();
}

}  // namespace

DecodeReport decode_user(int k, const CacheState& cache, const DemandVector& wanted,
                         const DeliveryPacket& packet, const PublicSchemeInfo& info) {
  if (info.field == nullptr) throw std::invalid_argument("public scheme info lacks a field");
  const Field& f = *info.field;
  DecodeReport report;
  report.user = k;

  Known known;
  for (std::size_t i = 0; i < cache.metadata.size(); ++i) known.emplace(cache.metadata[i], cache.content[i]);
  const std::vector<PieceRef>& cached = cache.metadata;
  auto is_cached = [&](const PieceRef& r) { return std::binary_search(cached.begin(), cached.end(), r); };

  std::vector<bool> done(packet.messages.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t mi = 0; mi < packet.messages.size(); ++mi) {
      if (done[mi]) continue;
      const Message& m = packet.messages[mi];
      if (info.kind == SchemeKind::kVirtualUser) {
        std::size_t uncached = 0;
        bool all_wanted = true;
        for (const auto& e : m.entries) {
          if (is_cached(e)) continue;
          ++uncached;
          all_wanted = all_wanted && wants_file(wanted, e.file);
        }
        if (uncached != m.rows || !all_wanted) {
          done[mi] = true;  // not addressed to this user
          continue;
        }
      }
      std::vector<PieceRef> unknown;
      for (const auto& e : m.entries)
        if (!known.count(e) && std::find(unknown.begin(), unknown.end(), e) == unknown.end())
          unknown.push_back(e);
      if (unknown.empty()) {
        done[mi] = true;
        continue;
      }
      if (unknown.size() > m.rows) continue;
      auto solved = solve_message(m, unknown, known, f, info.piece_symbols);
      for (std::size_t j = 0; j < unknown.size(); ++j) known.emplace(unknown[j], std::move(solved[j]));
      done[mi] = true;
      ++report.messages_consumed;
      progress = true;
    }
  }

  const PieceLayout lay = info.layout;
  std::optional<MdsCode> code;
  for (int file : wanted) {
    FileDecode fd;
    fd.file = file;
    std::vector<std::size_t> positions;
    std::vector<std::vector<Symbol>> blocks;
    for (auto it = known.lower_bound({file, 0}); it != known.end() && it->first.file == file; ++it) {
      positions.push_back(it->first.piece);
      blocks.push_back(it->second);
      if (is_cached(it->first))
        ++fd.pieces_from_cache;
      else
        ++fd.pieces_from_delivery;
    }
    if (positions.size() < lay.k) {
      fd.error = "file " + std::to_string(file) + ": have " + std::to_string(positions.size()) +
                 " of the " + std::to_string(lay.k) + " pieces needed";
      report.files.push_back(std::move(fd));
      continue;
    }
    std::vector<std::vector<Symbol>> units;
    if (lay.n == lay.k) {
      units = std::move(blocks);
    } else {
      if (!code) code.emplace(lay.n, lay.k, f);
      units = code->decode_blocks(positions, blocks);
    }
    for (const auto& u : units) fd.data.insert(fd.data.end(), u.begin(), u.end());
    fd.success = true;
    report.files.push_back(std::move(fd));
  }
  return report;
}

bool verify_against(DecodeReport& report, const FileLibrary& library) {
  bool ok = true;
  for (const auto& fd : report.files) ok = ok && fd.success && fd.data == library.file(fd.file);
  report.bit_exact = ok;
  return ok;
}

}  // namespace pcl
