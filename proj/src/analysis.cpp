#include "pcl/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "pcl/errors.hpp"

namespace pcl {

namespace {

Rational cross(const CurvePoint& o, const CurvePoint& a, const CurvePoint& b) {
  return (a.M - o.M) * (b.R - o.R) - (a.R - o.R) * (b.M - o.M);
}

Rational frac(long long a, long long b) { return Rational(a, b); }

std::string describe(int K, int N, int L, const Rational& M) {
  return "K=" + std::to_string(K) + " N=" + std::to_string(N) + " L=" + std::to_string(L) +
         " M=" + to_string(M);
}

}  // namespace

Rational TradeoffCurve::eval(const Rational& M) const {
  if (hull.empty() || M < hull.front().M || M > hull.back().M)
    throw std::out_of_range("M = " + to_string(M) + " outside the curve");
  auto it = std::lower_bound(hull.begin(), hull.end(), M,
                             [](const CurvePoint& p, const Rational& m) { return p.M < m; });
  if (it->M == M) return it->R;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  return lo.R + (hi.R - lo.R) * (M - lo.M) / (hi.M - lo.M);
}

TradeoffCurve make_curve(std::string tag, int K, int N, int L, std::vector<CurvePoint> points) {
  std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.M < b.M || (a.M == b.M && a.R < b.R);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const CurvePoint& a, const CurvePoint& b) { return a.M == b.M; }),
               points.end());
  TradeoffCurve c{std::move(tag), K, N, L, std::move(points), {}};
  for (const auto& p : c.points) {
    while (c.hull.size() >= 2 && cross(c.hull[c.hull.size() - 2], c.hull.back(), p) <= 0) c.hull.pop_back();
    c.hull.push_back(p);
  }
  return c;
}

TradeoffCurve corner_points(SchemeKind kind, int K, int N, int L) {
  SystemParams{K, N, L, 0, 0}.validate();
  std::vector<CurvePoint> pts;
  const Rational n(N);
  switch (kind) {
    case SchemeKind::kBaseline:
      pts = {{0, n}, {n, 0}};
      break;
    case SchemeKind::kMan:
      for (int tp = 0; tp <= K; ++tp) pts.push_back({frac(N * tp, K), frac(L * (K - tp), tp + 1)});
      break;
    case SchemeKind::kVirtualUser: {
      const auto U = static_cast<long long>(binom(N, L)) * K;
      pts.push_back({0, n});
      for (long long t = 1; t <= U; ++t) pts.push_back({frac(t * N, U), frac(L * (U - t), t + 1)});
      break;
    }
    case SchemeKind::kMds: {
      if (K < 2) throw InputError("mds curve needs K >= 2");
      pts.push_back({0, n});
      const long long half = 1LL << (K - 1);
      const bool substitute = frac(2 * K - 1, 2 * K) <= frac(half, half + 1);
      for (int t = 0; t <= K - 1; ++t) {
        if (t == K - 1 && substitute) break;
        const auto k = static_cast<long long>(mds_data_pieces(K, t));
        long long sent = 0;
        for (int j = t + 1; j <= K; ++j) sent += static_cast<long long>(binom(K, j));
        pts.push_back({frac(N * half, k), frac(L * sent, k)});
      }
      if (substitute) pts.push_back({frac((2 * K - 1) * N, 2 * K), frac(L, 2 * K)});
      pts.push_back({n, 0});
      break;
    }
    case SchemeKind::kCorner:
      if (K < 2) throw InputError("mds-corner needs K >= 2");
      pts = {{0, n}, {frac((2 * K - 1) * N, 2 * K), frac(L, 2 * K)}, {n, 0}};
      break;
  }
  return make_curve(to_string(kind), K, N, L, std::move(pts));
}

Rational envelope_eval(const TradeoffCurve& c, const Rational& M) { return c.eval(M); }

Rational converse_cut(int N, int L, const Rational& M) {
  if (M < 0 || M > N) throw std::out_of_range("M = " + to_string(M) + " outside [0, N]");
  return L * (1 - M / N);
}

Rational mds_tight_memory(int K, int N) {
  const long long half = 1LL << (K - 1);
  return std::min(frac(2 * K - 1, 2 * K), frac(half, half + 1)) * N;
}

std::vector<Rational> lattice(const Rational& lo, const Rational& hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("lattice needs at least two points");
  std::vector<Rational> out;
  const auto steps = static_cast<long long>(points - 1);
  for (long long j = 0; j <= steps; ++j) out.push_back(lo + (hi - lo) * j / steps);
  return out;
}

TableRegion classify_region(int K, int N, int L, const Rational& M) {
  if (M >= Rational(N, 2)) return {"M>=N/2", 2, 2};
  const bool above = M >= Rational(N, K);
  if (N > L * K) {
    if (L == 1) return {"N>LK,M<N/2,L=1", above ? std::optional<int>(4) : std::nullopt, std::nullopt};
    return {"N>LK,M<N/2,L>1", above ? std::optional<int>(22) : std::nullopt, std::nullopt};
  }
  if (L == 1) return {"N<=LK,M<N/2,L=1", 8, std::nullopt};
  return {"N<=LK,M<N/2,L>1", 22, std::nullopt};
}

GapReport gap_report(const GapGrid& grid) {
  GapReport r;
  r.grid = grid;
  r.factor_two.name = "factor_two";
  r.cut_equality.name = "cut_equality";
  r.vu_corner_bound.name = "vu_corner_bound";
  r.ratio_at_least_one.name = "ratio_at_least_one";
  for (int K : grid.Ks) {
    for (int N : grid.Ns) {
      for (int L : grid.Ls) {
        if (L > N) continue;
        const auto vu = corner_points(SchemeKind::kVirtualUser, K, N, L);
        const auto mds = corner_points(SchemeKind::kMds, K, N, L);

        for (const auto& M : lattice(0, N, grid.lattice_points)) {
          GapRow row{K, N, L, M, vu.eval(M), mds.eval(M), converse_cut(N, L, M), {}, {}, classify_region(K, N, L, M)};
          if (row.converse > 0) {
            row.ratio_v = row.R_v / row.converse;
            row.ratio_m = row.R_m / row.converse;
            r.ratio_at_least_one.checked += 2;
            if (*row.ratio_v < 1) r.ratio_at_least_one.violations.push_back("vu " + describe(K, N, L, M));
            if (*row.ratio_m < 1) r.ratio_at_least_one.violations.push_back("mds " + describe(K, N, L, M));
          }
          r.rows.push_back(std::move(row));
        }

        for (const auto& M : lattice(Rational(N, 2), N, grid.lattice_points)) {
          const Rational bound = 2 * converse_cut(N, L, M);
          r.factor_two.checked += 2;
          if (vu.eval(M) > bound) r.factor_two.violations.push_back("vu " + describe(K, N, L, M));
          if (mds.eval(M) > bound) r.factor_two.violations.push_back("mds " + describe(K, N, L, M));
        }

        for (const auto& M : lattice(mds_tight_memory(K, N), N, grid.lattice_points)) {
          ++r.cut_equality.checked;
          if (mds.eval(M) != converse_cut(N, L, M)) r.cut_equality.violations.push_back(describe(K, N, L, M));
        }

        const auto C = static_cast<long long>(binom(N, L));
        const long long U = C * K;
        for (int tp = 1; tp <= K; ++tp) {
          const long long t = C * tp;
          const Rational rv(L * (U - t), t + 1);
          ++r.vu_corner_bound.checked;
          if (rv > Rational(2 * L * (K - tp), tp + 1))
            r.vu_corner_bound.violations.push_back("K=" + std::to_string(K) + " N=" + std::to_string(N) +
                                                   " L=" + std::to_string(L) + " t'=" + std::to_string(tp));
        }
      }
    }
  }
  return r;
}

namespace {

nlohmann::ordered_json check_json(const ClaimCheck& c) {
  nlohmann::ordered_json j;
  j["checked"] = c.checked;
  j["holds"] = c.holds();
  j["violations"] = c.violations;
  return j;
}

nlohmann::ordered_json opt_json(const std::optional<Rational>& r) {
  return r ? nlohmann::ordered_json(to_string(*r)) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string to_json(const GapReport& r) {
  nlohmann::ordered_json j;
  j["grid"] = {{"K", r.grid.Ks}, {"N", r.grid.Ns}, {"L", r.grid.Ls}, {"lattice_points", r.grid.lattice_points}};
  j["checks"] = {{r.factor_two.name, check_json(r.factor_two)},
                 {r.cut_equality.name, check_json(r.cut_equality)},
                 {r.vu_corner_bound.name, check_json(r.vu_corner_bound)},
                 {r.ratio_at_least_one.name, check_json(r.ratio_at_least_one)}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["K"] = row.K;
    e["N"] = row.N;
    e["L"] = row.L;
    e["M"] = to_string(row.M);
    e["R_v"] = to_string(row.R_v);
    e["R_m"] = to_string(row.R_m);
    e["converse"] = to_string(row.converse);
    e["ratio_v"] = opt_json(row.ratio_v);
    e["ratio_m"] = opt_json(row.ratio_m);
    e["region"] = row.region.name;
    e["vu_factor"] = row.region.vu_factor ? nlohmann::ordered_json(*row.region.vu_factor) : nullptr;
    e["mds_factor"] = row.region.mds_factor ? nlohmann::ordered_json(*row.region.mds_factor) : nullptr;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

std::string csv_header() { return "scheme,K,N,L,M_num,M_den,R_num,R_den"; }

std::string csv_row(const std::string& tag, int K, int N, int L, const Rational& M, const Rational& R) {
  return tag + "," + std::to_string(K) + "," + std::to_string(N) + "," + std::to_string(L) + "," +
         numerator(M).str() + "," + denominator(M).str() + "," + numerator(R).str() + "," + denominator(R).str();
}

}  // namespace pcl
