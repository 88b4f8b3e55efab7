#include "pcl/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcl/analysis.hpp"
#include "pcl/decoder.hpp"
#include "pcl/errors.hpp"
#include "pcl/privacy_audit.hpp"
#include "pcl/schemes.hpp"
#include "pcl/simulation.hpp"

namespace pcl {

namespace {

constexpr std::uint64_t kRandomDemandStream = 0xd3;

struct SchemeFlags {
  std::string scheme;
  int K = 0;
  int N = 0;
  int L = 1;
  std::optional<int> t;
  std::optional<int> t_prime;
  std::optional<std::string> memory;
  bool precoding = false;
  bool no_shuffle = false;
};

void add_scheme_flags(CLI::App* cmd, SchemeFlags& f) {
  cmd->add_option("--scheme", f.scheme, "baseline | man | virtual-user | mds | mds-corner")->required();
  cmd->add_option("-K", f.K, "number of users")->required();
  cmd->add_option("-N", f.N, "number of files")->required();
  cmd->add_option("-L", f.L, "files demanded per user");
  cmd->add_option("-t", f.t, "corner index (mds, virtual-user)");
  cmd->add_option("--t-prime", f.t_prime, "corner index (man)");
  cmd->add_option("-M", f.memory, "cache size in files (baseline)");
  cmd->add_flag("--precoding", f.precoding, "man: private placement precoding");
  cmd->add_flag("--no-shuffle", f.no_shuffle, "virtual-user: keep messages in lexicographic order");
}

std::uint64_t subpack_cap() {
  const char* v = std::getenv("PCL_SUBPACK_CAP");
  if (v == nullptr || *v == '\0') return kDefaultSubpacketizationCap;
  try {
    std::size_t used = 0;
    const auto cap = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return cap;
  } catch (const std::exception&) {
    throw InputError(std::string("PCL_SUBPACK_CAP is not a number: ") + v);
  }
}

std::unique_ptr<Scheme> build_scheme(const SchemeFlags& f) {
  SchemeConfig c;
  c.kind = parse_scheme_kind(f.scheme);
  c.K = f.K;
  c.N = f.N;
  c.L = f.L;
  c.man_precoding = f.precoding;
  c.vu_shuffle = !f.no_shuffle;
  c.subpacketization_cap = subpack_cap();
  switch (c.kind) {
    case SchemeKind::kBaseline:
      if (!f.memory) throw InputError("baseline needs -M");
      c.memory = parse_rational(*f.memory);
      break;
    case SchemeKind::kMan:
      if (!f.t_prime) throw InputError("man needs --t-prime");
      c.t_prime = *f.t_prime;
      break;
    case SchemeKind::kVirtualUser:
    case SchemeKind::kMds:
      if (!f.t) throw InputError(f.scheme + " needs -t");
      c.t = *f.t;
      break;
    case SchemeKind::kCorner:
      break;
  }
  return make_scheme(c);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read demand file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<DemandMatrix> resolve_demands(const std::string& source, const Scheme& s, std::uint64_t seed) {
  if (source == "all") return enumerate_demand_matrices(s.K(), s.N(), s.L());
  if (source == "random") {
    Rng r(seed, kRandomDemandStream);
    return {random_demand_matrix(s.K(), s.N(), s.L(), r)};
  }
  const bool literal = !source.empty() && (source.front() == '[' || source.front() == '{');
  DemandMatrix d = parse_demand_matrix(literal ? source : slurp(source));
  validate_demands(d, s.K(), s.N(), s.L());
  return {d};
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw InputError("cannot write '" + path + "'");
  o << text << "\n";
}

std::string field_name(const Field& f) { return "GF(2^" + std::to_string(f.bits()) + ")"; }

// ------------------------------------------------------------- simulate

struct SimulateFlags {
  SchemeFlags scheme;
  std::uint64_t seed = 1;
  std::string demands = "random";
  std::string output;
  std::size_t symbols_per_unit = kDefaultSymbolsPerUnit;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  const auto scheme = build_scheme(f.scheme);
  const auto demands = resolve_demands(f.demands, *scheme, f.seed);
  const Simulation sim(*scheme, f.symbols_per_unit, f.seed);
  const auto info = sim.info();

  std::vector<CacheState> caches;
  for (int k = 1; k <= scheme->K(); ++k) caches.push_back(sim.cache(k));
  const Rational memory = sim.measured_memory(caches.front());

  out << "scheme " << scheme->description() << "\n";
  out << "field " << field_name(scheme->field()) << "\n";
  out << "memory " << to_string(memory) << "\n";
  out << "subpacketization " << scheme->subpacketization() << "\n";

  std::vector<std::uint64_t> user_ok(static_cast<std::size_t>(scheme->K()), 0);
  std::uint64_t all_ok = 0;
  std::optional<Rational> load;
  bool load_varies = false;
  std::size_t metadata = 0;
  std::size_t payload = 0;
  for (std::size_t j = 0; j < demands.size(); ++j) {
    const auto& d = demands[j];
    const Delivery del = sim.deliver(d, j);
    const Rational l = sim.measured_load(del.packet);
    if (load && *load != l) load_varies = true;
    if (!load || l > *load) load = l;
    metadata = std::max(metadata, del.packet.metadata_entries());
    payload = std::max(payload, del.packet.payload_symbols());
    bool ok = true;
    for (int k = 1; k <= scheme->K(); ++k) {
      auto rep = decode_user(k, caches[static_cast<std::size_t>(k - 1)], d.of(k), del.packet, info);
      if (verify_against(rep, sim.library())) {
        ++user_ok[static_cast<std::size_t>(k - 1)];
      } else {
        ok = false;
        for (const auto& fd : rep.files)
          if (!fd.success) err << "user " << k << " demands " << to_string(d) << ": " << fd.error << "\n";
      }
    }
    if (ok) ++all_ok;
  }
  if (demands.size() == 1) out << "demands " << nlohmann::json(demands.front().rows).dump() << "\n";
  out << "load " << to_string_with_denominator(*load, scheme->load_denominator())
      << (load_varies ? " (max over demands)" : "") << "\n";
  out << "metadata_entries " << metadata << " payload_symbols " << payload << "\n";
  if (metadata > payload) err << "warning: metadata entries exceed payload symbols\n";
  for (int k = 1; k <= scheme->K(); ++k)
    out << "user " << k << " decodes " << user_ok[static_cast<std::size_t>(k - 1)] << "/" << demands.size()
        << "\n";
  const bool success = all_ok == demands.size();
  out << "decodes " << all_ok << "/" << demands.size() << (success ? " OK" : " FAILED") << "\n";

  if (!f.output.empty()) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme->description();
    j["K"] = scheme->K();
    j["N"] = scheme->N();
    j["L"] = scheme->L();
    j["seed"] = f.seed;
    j["memory"] = to_string(memory);
    j["load"] = to_string(*load);
    j["subpacketization"] = scheme->subpacketization();
    j["demand_matrices"] = demands.size();
    j["decoded"] = all_ok;
    j["users_decoded"] = user_ok;
    write_output(f.output, j.dump());
  }
  return success ? kExitOk : kExitDecodeFailure;
}

// ------------------------------------------------------------- audit

struct AuditFlags {
  SchemeFlags scheme;
  std::string mode = "exact";
  std::uint64_t samples = 10'000;
  std::optional<double> threshold;
  int user = 1;
  std::uint64_t seed = 1;
  std::string key;
  std::string output;
};

int cmd_audit(const AuditFlags& f, std::ostream& out) {
  const auto scheme = build_scheme(f.scheme);
  AuditOptions o;
  o.samples = f.samples;
  o.threshold = f.threshold;
  o.seed = f.seed;
  if (f.key == "raw") o.key = ViewKey::kRaw;
  else if (f.key == "cache-first") o.key = ViewKey::kCacheFirst;
  else if (f.key == "orbit") o.key = ViewKey::kOrbit;
  else if (f.key == "invariant") o.key = ViewKey::kInvariant;
  else if (!f.key.empty()) throw InputError("unknown view key '" + f.key + "'");
  if (f.mode != "exact" && f.mode != "sample") throw InputError("--mode must be exact or sample");
  if (f.user < 1 || f.user > scheme->K()) throw InputError("--user out of range");

  out << "audit " << scheme->description() << " user " << f.user << " mode " << f.mode << "\n";
  Rational max_tv = 0;
  bool pass = true;
  auto reports = nlohmann::ordered_json::array();
  for (const auto& d : all_demand_vectors(scheme->N(), scheme->L())) {
    const AuditReport r = f.mode == "exact" ? audit_exact(*scheme, f.user, d, o) : audit_sampled(*scheme, f.user, d, o);
    out << "d_k " << to_string(d) << " pairs " << r.pairs.size() << " support " << r.support << " max_tv "
        << to_string(r.max_tv);
    if (r.mode == AuditMode::kSampled) out << " threshold " << r.threshold;
    out << (r.pass ? " pass" : " fail") << "\n";
    if (r.max_tv > max_tv) max_tv = r.max_tv;
    pass = pass && r.pass;
    reports.push_back(nlohmann::ordered_json::parse(to_json(r)));
  }
  out << "max_tv " << to_string(max_tv) << (pass ? " pass" : " fail") << "\n";
  if (!f.output.empty()) write_output(f.output, reports.dump());
  return pass ? kExitOk : kExitAuditFailure;
}

// ------------------------------------------------------------- tradeoff

struct TradeoffFlags {
  std::string schemes = "baseline,virtual-user,mds,man";
  int K = 0;
  int N = 0;
  int L = 1;
  std::optional<std::string> at_m;
  std::size_t points = 101;
  std::string output;
};

int cmd_tradeoff(const TradeoffFlags& f, std::ostream& out) {
  std::vector<TradeoffCurve> curves;
  std::stringstream list(f.schemes);
  std::string tag;
  while (std::getline(list, tag, ','))
    if (!tag.empty()) curves.push_back(corner_points(parse_scheme_kind(tag), f.K, f.N, f.L));
  if (curves.empty()) throw InputError("--schemes is empty");

  std::ostringstream text;
  if (f.at_m) {
    const Rational M = parse_rational(*f.at_m);
    if (M < 0 || M > f.N) throw InputError("--at-M outside [0, N]");
    for (const auto& c : curves) text << c.tag << " " << to_string(c.eval(M)) << "\n";
    text << "converse " << to_string(converse_cut(f.N, f.L, M)) << "\n";
  } else {
    text << csv_header() << "\n";
    const auto Ms = lattice(0, f.N, f.points);
    for (const auto& c : curves)
      for (const auto& M : Ms) text << csv_row(c.tag, f.K, f.N, f.L, M, c.eval(M)) << "\n";
    for (const auto& M : Ms) text << csv_row("converse", f.K, f.N, f.L, M, converse_cut(f.N, f.L, M)) << "\n";
  }
  if (f.output.empty())
    out << text.str();
  else
    write_output(f.output, text.str());
  return kExitOk;
}

// ------------------------------------------------------------- gap

struct GapFlags {
  std::vector<int> Ks{2, 3, 4, 5, 6};
  std::vector<int> Ns{2, 3, 4, 5, 6, 7, 8};
  std::vector<int> Ls{1, 2, 3};
  std::size_t points = 50;
  std::string output;
};

int cmd_gap(const GapFlags& f, std::ostream& out) {
  GapGrid g{f.Ks, f.Ns, f.Ls, f.points};
  const GapReport r = gap_report(g);
  bool ok = true;
  for (const ClaimCheck* c : {&r.factor_two, &r.cut_equality, &r.vu_corner_bound, &r.ratio_at_least_one}) {
    out << c->name << " checked " << c->checked << (c->holds() ? " holds" : " VIOLATED") << "\n";
    for (const auto& v : c->violations) out << "  " << v << "\n";
    ok = ok && c->holds();
  }
  std::map<std::string, std::size_t> regions;
  for (const auto& row : r.rows) ++regions[row.region.name];
  for (const auto& [name, n] : regions) out << "region " << name << " rows " << n << "\n";
  if (!f.output.empty()) write_output(f.output, to_json(r));
  return ok ? kExitOk : kExitAuditFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Demand-private coded caching laboratory"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "placement, delivery and decoding for given demands");
  add_scheme_flags(simulate, sim.scheme);
  simulate->add_option("--seed", sim.seed, "run seed");
  // A JSON literal starts with '[', which CLI11 would otherwise split as a list.
  simulate->add_option("--demands", sim.demands, "JSON matrix, path to a JSON file, 'random' or 'all'")
      ->allow_extra_args(false);
  simulate->add_option("--output", sim.output, "write a JSON report here");
  simulate->add_option("--symbols-per-unit", sim.symbols_per_unit, "field symbols per data unit");

  AuditFlags aud;
  auto* audit = app.add_subcommand("audit", "privacy audit of one user's view");
  add_scheme_flags(audit, aud.scheme);
  audit->add_option("--mode", aud.mode, "exact | sample");
  audit->add_option("--samples", aud.samples, "runs per demand matrix (sample mode)");
  audit->add_option("--threshold", aud.threshold, "pass threshold on TV (sample mode)");
  audit->add_option("--user", aud.user, "audited user");
  audit->add_option("--seed", aud.seed, "sampling seed");
  audit->add_option("--key", aud.key, "view key: raw | cache-first | orbit | invariant");
  audit->add_option("--output", aud.output, "write JSON reports here");

  TradeoffFlags tr;
  auto* tradeoff = app.add_subcommand("tradeoff", "memory-load envelopes as CSV");
  tradeoff->add_option("--schemes", tr.schemes, "comma separated scheme list");
  tradeoff->add_option("-K", tr.K, "number of users")->required();
  tradeoff->add_option("-N", tr.N, "number of files")->required();
  tradeoff->add_option("-L", tr.L, "files demanded per user");
  tradeoff->add_option("--at-M", tr.at_m, "print envelope values at this memory");
  tradeoff->add_option("--points", tr.points, "lattice points on [0, N]");
  tradeoff->add_option("--output", tr.output, "write CSV here");

  GapFlags gp;
  auto* gap = app.add_subcommand("gap", "order-optimality checks over a parameter grid");
  gap->add_option("--K", gp.Ks, "user counts")->delimiter(',');
  gap->add_option("--N", gp.Ns, "file counts")->delimiter(',');
  gap->add_option("--L", gp.Ls, "demand sizes")->delimiter(',');
  gap->add_option("--points", gp.points, "memory lattice points");
  gap->add_option("--output", gp.output, "write JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (audit->parsed()) return cmd_audit(aud, out);
    if (tradeoff->parsed()) return cmd_tradeoff(tr, out);
    if (gap->parsed()) return cmd_gap(gp, out);
  } catch (const GuardRailError& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuardRail;
  } catch (const FieldTooSmallError& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuardRail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"pcl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pcl
