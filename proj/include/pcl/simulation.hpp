#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/schemes.hpp"

namespace pcl {

inline constexpr std::size_t kDefaultSymbolsPerUnit = 8;

// Server secret: for every file, the coded piece behind each label.
struct Placement {
  std::vector<std::vector<std::size_t>> piece_of_label;  // [file - 1][label]

  std::size_t piece(int file, std::size_t label) const {
    return piece_of_label[static_cast<std::size_t>(file - 1)][label];
  }
};

Placement identity_placement(const Scheme& s);
// One uniform permutation per file, or the identity for schemes that do not
// permute pieces.
Placement draw_placement(const Scheme& s, UniformSource& src);

// User k's cache metadata, sorted by (file, piece).
std::vector<PieceRef> cache_metadata(const Scheme& s, const Placement& p, int user);

// Packet with entries resolved to pieces but without coefficients or payload.
DeliveryPacket packet_metadata(const std::vector<PlannedMessage>& plan, const Placement& p);

struct Delivery {
  DeliveryPacket packet;
  // Server-only: label and piece of every entry, message by message.
  std::vector<std::vector<SubfileId>> trace;
};

// What any user may know about the scheme without seeing server state.
struct PublicSchemeInfo {
  SchemeKind kind = SchemeKind::kMds;
  int N = 0;
  PieceLayout layout;
  std::size_t piece_symbols = 0;
  const Field* field = nullptr;
};

PublicSchemeInfo public_info(const Scheme& s, std::size_t symbols_per_unit);

// Coefficients for a message of the given shape; identical for every message
// with that shape.
Matrix coefficients_for(Coding coding, std::size_t rows, std::size_t cols, const Field& f);

// A scheme instance with a concrete library and placement.
class Simulation {
 public:
  Simulation(const Scheme& scheme, std::size_t symbols_per_unit, std::uint64_t seed);
  Simulation(const Scheme& scheme, std::size_t symbols_per_unit, std::uint64_t seed, Placement placement);

  const Scheme& scheme() const { return *scheme_; }
  const FileLibrary& library() const { return library_; }
  const Placement& placement() const { return placement_; }
  std::size_t piece_symbols() const { return spu_; }
  std::size_t B() const { return library_.B; }
  PublicSchemeInfo info() const { return public_info(*scheme_, spu_); }

  const std::vector<Symbol>& piece(int file, std::size_t p) const {
    return pieces_[static_cast<std::size_t>(file - 1)][p];
  }

  CacheState cache(int user) const;
  Delivery deliver(const DemandMatrix& d, UniformSource& src) const;
  // Delivery randomness drawn from stream `stream` of this run's seed.
  Delivery deliver(const DemandMatrix& d, std::uint64_t stream = 0) const;

  Rational measured_load(const DeliveryPacket& packet) const;
  Rational measured_memory(const CacheState& cache) const;

 private:
  void build_pieces();

  const Scheme* scheme_;
  std::size_t spu_;
  std::uint64_t seed_;
  FileLibrary library_;
  Placement placement_;
  std::vector<std::vector<std::vector<Symbol>>> pieces_;
};

}  // namespace pcl
