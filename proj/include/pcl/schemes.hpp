#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pcl/combinatorics.hpp"
#include "pcl/core.hpp"
#include "pcl/galois.hpp"
#include "pcl/rational.hpp"

namespace pcl {

inline constexpr std::uint64_t kDefaultSubpacketizationCap = 1'000'000;

enum class SchemeKind { kBaseline, kMan, kVirtualUser, kMds, kCorner };

// "baseline", "man", "virtual-user", "mds", "mds-corner".
std::string to_string(SchemeKind k);
SchemeKind parse_scheme_kind(const std::string& s);

// Each file is cut into k data units and encoded to n coded pieces.
// n == k is a plain split.
struct PieceLayout {
  std::size_t n = 1;
  std::size_t k = 1;
};

struct PlannedEntry {
  int file = 0;           // 1-based
  std::size_t label = 0;  // 0-based label index
  bool operator==(const PlannedEntry&) const = default;
};

// A message before the secret label->piece map is applied.
struct PlannedMessage {
  std::size_t rows = 0;
  Coding coding = Coding::kCauchy;
  std::vector<PlannedEntry> entries;
};

struct SchemeConfig {
  SchemeKind kind = SchemeKind::kMds;
  int K = 0;
  int N = 0;
  int L = 1;
  int t = -1;        // mds and virtual-user corner index
  int t_prime = -1;  // man corner index
  Rational memory = 0;  // baseline only
  bool man_precoding = false;
  bool vu_shuffle = true;
  std::uint64_t subpacketization_cap = kDefaultSubpacketizationCap;
};

class Scheme {
 public:
  virtual ~Scheme() = default;

  SchemeKind kind() const { return kind_; }
  int K() const { return K_; }
  int N() const { return N_; }
  int L() const { return L_; }

  // Labels are shared by all files.
  virtual std::size_t label_count() const = 0;
  virtual Label label(std::size_t j) const = 0;
  virtual bool cached_by(int user, std::size_t j) const = 0;

  virtual PieceLayout layout() const = 0;
  // Whether placement hides the label->piece map behind a uniform permutation.
  virtual bool permutes_pieces() const { return true; }

  // Delivery randomness, if any, is drawn from `src`.
  virtual std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const = 0;
  // Number of equally likely delivery-randomness outcomes (saturates at UINT64_MAX).
  virtual std::uint64_t delivery_outcomes() const { return 1; }

  // Closed forms, in files.
  virtual Rational memory() const = 0;
  virtual Rational load() const = 0;
  // Denominator used when printing the load (14/8 rather than 7/4).
  virtual std::uint64_t load_denominator() const = 0;

  std::size_t subpacketization() const { return label_count(); }
  SystemParams params(std::size_t symbols_per_unit) const;
  const Field& field() const { return *field_; }
  std::string description() const;

 protected:
  Scheme(SchemeKind kind, int K, int N, int L);
  // Picks the smallest field holding `elements` distinct values.
  void set_field_for(std::size_t elements);
  void check_cap(std::uint64_t value, std::uint64_t cap, const std::string& what) const;
  virtual std::string corner_text() const = 0;

 private:
  SchemeKind kind_;
  int K_;
  int N_;
  int L_;
  const Field* field_ = nullptr;
};

class BaselineScheme final : public Scheme {
 public:
  BaselineScheme(int K, int N, int L, const Rational& M);
  std::size_t label_count() const override { return units_; }
  Label label(std::size_t j) const override;
  bool cached_by(int user, std::size_t j) const override;
  PieceLayout layout() const override { return {units_, units_}; }
  bool permutes_pieces() const override { return false; }
  std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const override;
  Rational memory() const override { return M_; }
  Rational load() const override;
  std::uint64_t load_denominator() const override;

 private:
  std::string corner_text() const override;
  Rational M_;
  std::size_t units_;
  std::size_t cached_units_;
};

// Non-private reference: MAN placement and L rounds of XOR delivery.
class ManScheme final : public Scheme {
 public:
  ManScheme(int K, int N, int L, int t_prime, bool precoding, std::uint64_t cap);
  std::size_t label_count() const override { return labels_.size(); }
  Label label(std::size_t j) const override { return {labels_.at(j), 0}; }
  bool cached_by(int user, std::size_t j) const override;
  PieceLayout layout() const override { return {labels_.size(), labels_.size()}; }
  bool permutes_pieces() const override { return precoding_; }
  std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const override;
  Rational memory() const override;
  Rational load() const override;
  std::uint64_t load_denominator() const override;
  int t_prime() const { return t_prime_; }

 private:
  std::string corner_text() const override;
  int t_prime_;
  bool precoding_;
  std::vector<Subset> labels_;
};

class VirtualUserScheme final : public Scheme {
 public:
  VirtualUserScheme(int K, int N, int L, int t, bool shuffle, std::uint64_t cap);
  std::size_t label_count() const override { return pieces_; }
  Label label(std::size_t j) const override;
  bool cached_by(int user, std::size_t j) const override;
  PieceLayout layout() const override { return {pieces_, pieces_}; }
  std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const override;
  std::uint64_t delivery_outcomes() const override;
  Rational memory() const override;
  Rational load() const override;
  std::uint64_t load_denominator() const override { return pieces_; }
  int t() const { return t_; }
  int U() const { return U_; }
  bool shuffles() const { return shuffle_; }

 private:
  std::string corner_text() const override;
  int t_;
  int U_;
  bool shuffle_;
  std::size_t pieces_;
  std::size_t messages_;
};

// Effective demands of all U = C(N,L) K users: the K real rows first, then
// virtual users filled so every demand vector is held exactly K times.
std::vector<DemandVector> vu_assign_virtual_demands(const DemandMatrix& d, int N, int L);

class MdsScheme final : public Scheme {
 public:
  MdsScheme(int K, int N, int L, int t);
  std::size_t label_count() const override { return std::size_t{1} << K(); }
  Label label(std::size_t j) const override;
  bool cached_by(int user, std::size_t j) const override;
  PieceLayout layout() const override { return {label_count(), k_mds_}; }
  std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const override;
  Rational memory() const override;
  Rational load() const override;
  std::uint64_t load_denominator() const override { return k_mds_; }
  int t() const { return t_; }
  std::size_t k_mds() const { return k_mds_; }
  // Label index of a user set given as a bitmask.
  std::size_t label_of_mask(std::uint64_t mask) const { return label_of_mask_.at(mask); }

 private:
  std::string corner_text() const override;
  int t_;
  std::size_t k_mds_;
  std::vector<std::uint64_t> mask_of_label_;
  std::vector<std::size_t> label_of_mask_;
  std::vector<std::uint64_t> message_sets_;
};

// k_mds = 2^(K-1) + sum_{j=t}^{K-1} C(K-1, j).
std::uint64_t mds_data_pieces(int K, int t);

class CornerScheme final : public Scheme {
 public:
  CornerScheme(int K, int N, int L);
  std::size_t label_count() const override { return 2 * static_cast<std::size_t>(K()); }
  Label label(std::size_t j) const override;
  bool cached_by(int user, std::size_t j) const override;
  PieceLayout layout() const override { return {label_count(), label_count()}; }
  std::vector<PlannedMessage> plan_delivery(const DemandMatrix& d, UniformSource& src) const override;
  Rational memory() const override;
  Rational load() const override;
  std::uint64_t load_denominator() const override { return label_count(); }

 private:
  std::string corner_text() const override { return ""; }
};

std::unique_ptr<Scheme> make_scheme(const SchemeConfig& config);

}  // namespace pcl
