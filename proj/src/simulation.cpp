#include "pcl/simulation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace pcl {

namespace {

constexpr std::uint64_t kPlacementStream = 0x5ec;
constexpr std::uint64_t kDeliveryStream = 0xde1;

}  // namespace

Placement identity_placement(const Scheme& s) {
  Placement p;
  const std::size_t n = s.label_count();
  for (int i = 1; i <= s.N(); ++i) {
    std::vector<std::size_t> m(n);
    for (std::size_t j = 0; j < n; ++j) m[j] = j;
    p.piece_of_label.push_back(std::move(m));
  }
  return p;
}

Placement draw_placement(const Scheme& s, UniformSource& src) {
  if (!s.permutes_pieces()) return identity_placement(s);
  Placement p;
  const int n = static_cast<int>(s.label_count());
  for (int i = 1; i <= s.N(); ++i) {
    const auto perm = sample_permutation(n, src);
    std::vector<std::size_t> m(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) m[j] = static_cast<std::size_t>(perm[j] - 1);
    p.piece_of_label.push_back(std::move(m));
  }
  return p;
}

std::vector<PieceRef> cache_metadata(const Scheme& s, const Placement& p, int user) {
  std::vector<PieceRef> out;
  std::vector<std::size_t> cached;
  for (std::size_t j = 0; j < s.label_count(); ++j)
    if (s.cached_by(user, j)) cached.push_back(j);
  for (int i = 1; i <= s.N(); ++i)
    for (std::size_t j : cached) out.push_back({i, p.piece(i, j)});
  std::sort(out.begin(), out.end());
  return out;
}

DeliveryPacket packet_metadata(const std::vector<PlannedMessage>& plan, const Placement& p) {
  DeliveryPacket packet;
  packet.messages.reserve(plan.size());
  for (const auto& pm : plan) {
    Message m;
    m.coding = pm.coding;
    m.rows = pm.rows;
    m.entries.reserve(pm.entries.size());
    for (const auto& e : pm.entries) m.entries.push_back({e.file, p.piece(e.file, e.label)});
    packet.messages.push_back(std::move(m));
  }
  return packet;
}

PublicSchemeInfo public_info(const Scheme& s, std::size_t symbols_per_unit) {
  return {s.kind(), s.N(), s.layout(), symbols_per_unit, &s.field()};
}

Matrix coefficients_for(Coding coding, std::size_t rows, std::size_t cols, const Field& f) {
  switch (coding) {
    case Coding::kCauchy:
      return make_coeff_matrix(rows, cols, f);
    case Coding::kXor: {
      if (rows != 1) throw std::invalid_argument("xor messages have one row");
      Matrix m(1, cols);
      for (std::size_t c = 0; c < cols; ++c) m.at(0, c) = 1;
      return m;
    }
    case Coding::kIdentity:
      if (rows != cols) throw std::invalid_argument("identity messages are square");
      return Matrix::identity(rows);
  }
  throw std::invalid_argument("unknown coding");
}

Simulation::Simulation(const Scheme& scheme, std::size_t symbols_per_unit, std::uint64_t seed)
    : scheme_(&scheme), spu_(symbols_per_unit), seed_(seed) {
  if (spu_ == 0) throw std::invalid_argument("symbols per unit must be positive");
  library_ = FileLibrary::generate(scheme.N(), scheme.layout().k * spu_, scheme.field(), seed);
  Rng r(seed, kPlacementStream);
  placement_ = draw_placement(scheme, r);
  build_pieces();
}

Simulation::Simulation(const Scheme& scheme, std::size_t symbols_per_unit, std::uint64_t seed,
                       Placement placement)
    : scheme_(&scheme), spu_(symbols_per_unit), seed_(seed), placement_(std::move(placement)) {
  if (spu_ == 0) throw std::invalid_argument("symbols per unit must be positive");
  library_ = FileLibrary::generate(scheme.N(), scheme.layout().k * spu_, scheme.field(), seed);
  build_pieces();
}

void Simulation::build_pieces() {
  const PieceLayout lay = scheme_->layout();
  std::optional<MdsCode> code;
  if (lay.n > lay.k) code.emplace(lay.n, lay.k, scheme_->field());
  pieces_.clear();
  for (int i = 1; i <= scheme_->N(); ++i) {
    const auto& f = library_.file(i);
    std::vector<std::vector<Symbol>> units(lay.k);
    for (std::size_t u = 0; u < lay.k; ++u)
      units[u].assign(f.begin() + static_cast<std::ptrdiff_t>(u * spu_),
                      f.begin() + static_cast<std::ptrdiff_t>((u + 1) * spu_));
    pieces_.push_back(code ? code->encode_blocks(units) : units);
  }
}

CacheState Simulation::cache(int user) const {
  CacheState c;
  c.user = user;
  c.metadata = cache_metadata(*scheme_, placement_, user);
  c.content.reserve(c.metadata.size());
  for (const auto& r : c.metadata) c.content.push_back(piece(r.file, r.piece));
  return c;
}

Delivery Simulation::deliver(const DemandMatrix& d, UniformSource& src) const {
  const auto plan = scheme_->plan_delivery(d, src);
  Delivery out;
  out.packet = packet_metadata(plan, placement_);
  std::map<std::pair<std::size_t, std::size_t>, Matrix> coeff_cache;
  for (std::size_t m = 0; m < plan.size(); ++m) {
    auto& msg = out.packet.messages[m];
    const auto shape = std::make_pair(msg.rows, msg.entries.size());
    auto it = coeff_cache.find(shape);
    if (it == coeff_cache.end())
      it = coeff_cache.emplace(shape, coefficients_for(msg.coding, msg.rows, msg.entries.size(), scheme_->field())).first;
    msg.coefficients = it->second;
    msg.payload.assign(msg.rows, std::vector<Symbol>(spu_, 0));
    for (std::size_t r = 0; r < msg.rows; ++r)
      for (std::size_t c = 0; c < msg.entries.size(); ++c)
        scheme_->field().mul_add(msg.coefficients.at(r, c), piece(msg.entries[c].file, msg.entries[c].piece),
                                 msg.payload[r]);
    std::vector<SubfileId> trace;
    for (std::size_t c = 0; c < msg.entries.size(); ++c)
      trace.push_back({plan[m].entries[c].file, plan[m].entries[c].label, msg.entries[c].piece});
    out.trace.push_back(std::move(trace));
  }
  return out;
}

Delivery Simulation::deliver(const DemandMatrix& d, std::uint64_t stream) const {
  Rng r = Rng(seed_, kDeliveryStream).split(stream);
  return deliver(d, r);
}

Rational Simulation::measured_load(const DeliveryPacket& packet) const {
  return Rational(static_cast<long long>(packet.payload_symbols()), static_cast<long long>(B()));
}

Rational Simulation::measured_memory(const CacheState& cache) const {
  return Rational(static_cast<long long>(cache.symbol_count()), static_cast<long long>(B()));
}

}  // namespace pcl
