#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcl/rational.hpp"
#include "pcl/schemes.hpp"

namespace pcl {

struct CurvePoint {
  Rational M;
  Rational R;
  bool operator==(const CurvePoint&) const = default;
};

struct TradeoffCurve {
  std::string tag;
  int K = 0;
  int N = 0;
  int L = 0;
  std::vector<CurvePoint> points;  // corner points, sorted by M
  std::vector<CurvePoint> hull;    // lower convex envelope of points

  // Envelope value at M. Throws std::out_of_range outside the hull's span.
  Rational eval(const Rational& M) const;
};

// Sorts, keeps the lowest R per M and computes the lower hull.
TradeoffCurve make_curve(std::string tag, int K, int N, int L, std::vector<CurvePoint> points);

// Closed-form corner points of a scheme family:
//   baseline      (0,N), (N,0)
//   man           t' in [0:K]
//   virtual-user  (0,N) and t in [1:C(N,L)K]
//   mds           (0,N), t in [0:K-1], (N,0); the corner point replaces
//                 t = K-1 when (2K-1)/(2K) <= 2^(K-1)/(2^(K-1)+1)
//   mds-corner    (0,N), ((2K-1)N/(2K), L/(2K)), (N,0)
TradeoffCurve corner_points(SchemeKind kind, int K, int N, int L);

Rational envelope_eval(const TradeoffCurve& c, const Rational& M);

// L (1 - M/N). Throws std::out_of_range unless 0 <= M <= N.
Rational converse_cut(int N, int L, const Rational& M);

// min{(2K-1)/(2K), 2^(K-1)/(2^(K-1)+1)} N: from here on the mds envelope
// meets the cut.
Rational mds_tight_memory(int K, int N);

// `points` evenly spaced values from lo to hi inclusive (points >= 2).
std::vector<Rational> lattice(const Rational& lo, const Rational& hi, std::size_t points);

// Order-optimality regions of the virtual-user and mds schemes, reported
// for information only.
struct TableRegion {
  std::string name;
  std::optional<int> vu_factor;
  std::optional<int> mds_factor;
};
TableRegion classify_region(int K, int N, int L, const Rational& M);

struct ClaimCheck {
  std::string name;
  std::uint64_t checked = 0;
  std::vector<std::string> violations;
  bool holds() const { return violations.empty(); }
};

struct GapGrid {
  std::vector<int> Ks{2, 3, 4, 5, 6};
  std::vector<int> Ns{2, 3, 4, 5, 6, 7, 8};
  std::vector<int> Ls{1, 2, 3};
  std::size_t lattice_points = 50;
};

struct GapRow {
  int K = 0;
  int N = 0;
  int L = 0;
  Rational M;
  Rational R_v;
  Rational R_m;
  Rational converse;
  std::optional<Rational> ratio_v;  // absent where the cut is 0
  std::optional<Rational> ratio_m;
  TableRegion region;
};

struct GapReport {
  GapGrid grid;
  std::vector<GapRow> rows;
  ClaimCheck factor_two;        // M >= N/2: R_v, R_m <= 2 L (1 - M/N)
  ClaimCheck cut_equality;      // M >= mds_tight_memory: R_m == L (1 - M/N)
  ClaimCheck vu_corner_bound;   // t = C(N,L) t': R_v <= 2 L (K - t') / (t' + 1)
  ClaimCheck ratio_at_least_one;
};

// Grid cells with L > N are skipped.
GapReport gap_report(const GapGrid& grid = {});

std::string to_json(const GapReport& r);

// scheme,K,N,L,M_num,M_den,R_num,R_den
std::string csv_header();
std::string csv_row(const std::string& tag, int K, int N, int L, const Rational& M, const Rational& R);

}  // namespace pcl
