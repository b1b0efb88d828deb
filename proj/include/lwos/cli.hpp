#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "lwos/bessel.hpp"
#include "lwos/branching.hpp"
#include "lwos/embed.hpp"
#include "lwos/exact.hpp"
#include "lwos/parallel.hpp"
#include "lwos/rng.hpp"
#include "lwos/suites.hpp"
#include "lwos/walk.hpp"

namespace lwos {

/// Bad command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

/// Numeric table written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// ---------------------------------------------------------------------------
// Formatting.

/// 17 significant digits with a '.' decimal point.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

/// RFC-4180 field: quoted when it contains a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

inline void write_csv(std::ostream& os, const Table& t) {
  write_csv_row(os, t.columns);
  std::vector<std::string> fields;
  for (const auto& row : t.rows) {
    fields.clear();
    for (double x : row) fields.push_back(format_double(x));
    write_csv_row(os, fields);
  }
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json j = nlohmann::json::object();
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double x : row) r.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline void write_table(std::ostream& os, const Table& t, OutputFormat f) {
  if (f == OutputFormat::csv) {
    write_csv(os, t);
  } else {
    os << to_json(t).dump(2) << "\n";
  }
}

inline void write_reports_csv(std::ostream& os, const VerifyResult& res) {
  write_csv_row(os, {"name", "statistic", "pvalue", "absError", "threshold", "pass", "replicas", "seed", "runtimeMs",
                     "note", "params"});
  auto opt = [](const std::optional<double>& x) { return x && std::isfinite(*x) ? format_double(*x) : std::string(); };
  for (const auto& s : res.suites) {
    for (const auto& r : s.reports) {
      write_csv_row(os, {r.name, format_double(r.statistic), opt(r.pvalue), opt(r.absError), format_double(r.threshold),
                         r.pass ? "true" : "false", std::to_string(r.replicas), std::to_string(r.seed),
                         opt(r.runtimeMs), r.note, r.params.dump()});
    }
  }
}

inline void write_reports(std::ostream& os, const VerifyResult& res, const RunConfig& cfg, OutputFormat f) {
  if (f == OutputFormat::csv) {
    write_reports_csv(os, res);
  } else {
    os << to_json(res, cfg).dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Parameter lists: "0.5", "0.5,1,2", "1..5", "0..2:0.5".

using Params = std::map<std::string, std::string>;

inline double parse_number(std::string_view s, std::string_view param) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError("--" + std::string(param) + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return x;
}

inline std::vector<double> parse_list(std::string_view s, std::string_view param) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string_view item = s.substr(pos, comma - pos);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number(item, param));
    } else {
      const std::size_t colon = item.find(':', dots);
      const double lo = parse_number(item.substr(0, dots), param);
      const double hi = parse_number(item.substr(dots + 2, colon == std::string_view::npos ? item.size() : colon - dots - 2), param);
      const double step = colon == std::string_view::npos ? 1.0 : parse_number(item.substr(colon + 1), param);
      if (!(step > 0.0) || !(hi >= lo) || (hi - lo) / step > 1e6) {
        throw UsageError("--" + std::string(param) + ": bad range '" + std::string(item) + "'");
      }
      const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
      for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    }
    pos = comma + 1;
  }
  return out;
}

inline std::vector<double> list_param(const Params& p, const std::string& name, std::optional<std::string> fallback = {}) {
  const auto it = p.find(name);
  if (it == p.end() || it->second.empty()) {
    if (fallback) return parse_list(*fallback, name);
    throw UsageError("missing --" + name);
  }
  return parse_list(it->second, name);
}

inline double scalar_param(const Params& p, const std::string& name, std::optional<double> fallback = {}) {
  const auto it = p.find(name);
  if (it == p.end() || it->second.empty()) {
    if (fallback) return *fallback;
    throw UsageError("missing --" + name);
  }
  const auto v = parse_list(it->second, name);
  if (v.size() != 1) throw UsageError("--" + name + " takes a single value");
  return v.front();
}

inline long integer(double x, const std::string& name) {
  if (!(std::fabs(x) < 9.0e15) || std::floor(x) != x) throw UsageError("--" + name + " must be an integer");
  return static_cast<long>(x);
}

inline std::vector<long> integer_list(const Params& p, const std::string& name, std::optional<std::string> fallback = {}) {
  std::vector<long> out;
  for (double x : list_param(p, name, std::move(fallback))) out.push_back(integer(x, name));
  return out;
}

inline std::size_t count_param(const Params& p, const std::string& name, std::optional<double> fallback, std::size_t minimum = 1) {
  const long v = integer(scalar_param(p, name, fallback), name);
  if (v < static_cast<long>(minimum)) throw UsageError("--" + name + " must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------
// Closed forms.

struct LawInfo {
  std::string name;
  std::string usage;
  std::function<Table(const Params&)> table;
};

inline const std::vector<LawInfo>& law_registry() {
  static const std::vector<LawInfo> laws = {
      {"tail_dk", "--k LIST --v LIST: P(D_k > v), k >= 1, v >= 0",
       [](const Params& p) {
         Table t{{"k", "v", "tail"}, {}};
         for (long k : integer_list(p, "k"))
           for (double v : list_param(p, "v")) t.rows.push_back({double(k), v, tail_dk(k, v)});
         return t;
       }},
      {"gap_tail_series", "--v LIST [--N 30]: coefficients P(D_k > v), k = 1..N+1, of the tail generating function",
       [](const Params& p) {
         Table t{{"k", "v", "coefficient"}, {}};
         const std::size_t N = count_param(p, "N", 30, 0);
         for (double v : list_param(p, "v")) {
           const auto s = gap_tail_series(v, N);
           for (std::size_t k = 0; k <= N; ++k) t.rows.push_back({double(k + 1), v, s[k]});
         }
         return t;
       }},
      {"limit_density", "--x LIST: density and CDF of the scaling limit, x > 0",
       [](const Params& p) {
         Table t{{"x", "density", "cdf"}, {}};
         for (double x : list_param(p, "x")) t.rows.push_back({x, limit_density(x), limit_cdf(x)});
         return t;
       }},
      {"mellin", "--s LIST: E X^s of the scaling limit, -1 < s < 3",
       [](const Params& p) {
         Table t{{"s", "mellin"}, {}};
         for (double s : list_param(p, "s")) t.rows.push_back({s, mellin_limit(s)});
         return t;
       }},
      {"ndes_pmf", "--v LIST [--N 20]: P(N_des(v) = n), n = 0..N",
       [](const Params& p) {
         Table t{{"n", "v", "probability"}, {}};
         const std::size_t N = count_param(p, "N", 20, 0);
         for (double v : list_param(p, "v")) {
           const auto s = ndes_pmf_series(v, N);
           for (std::size_t n = 0; n <= N; ++n) t.rows.push_back({double(n), v, s[n]});
         }
         return t;
       }},
      {"mk_tail", "--k LIST --v LIST: P(M_{k,inf} > v), k >= 0, v >= 0",
       [](const Params& p) {
         Table t{{"k", "v", "tail"}, {}};
         for (long k : integer_list(p, "k"))
           for (double v : list_param(p, "v")) t.rows.push_back({double(k), v, mk_tail(k, v)});
         return t;
       }},
      {"interval_pgf", "--u LIST --v LIST --z LIST: pgf of the count in (u, u+v], z in [0, 1]",
       [](const Params& p) {
         Table t{{"u", "v", "z", "pgf"}, {}};
         for (double u : list_param(p, "u"))
           for (double v : list_param(p, "v"))
             for (double z : list_param(p, "z")) t.rows.push_back({u, v, z, interval_pgf(u, v, z)});
         return t;
       }},
      {"cluster_pgf", "--lambda LIST --v LIST --z LIST: pgf of the Poisson cluster count on [0, v]",
       [](const Params& p) {
         Table t{{"lambda", "v", "z", "pgf"}, {}};
         for (double l : list_param(p, "lambda"))
           for (double v : list_param(p, "v"))
             for (double z : list_param(p, "z")) t.rows.push_back({l, v, z, cluster_pgf(l, v, z)});
         return t;
       }},
      {"max_mnu_tail", "--t LIST: P(M_nu > t) = 1/(2+t), t >= 0",
       [](const Params& p) {
         Table t{{"t", "tail"}, {}};
         for (double x : list_param(p, "t")) t.rows.push_back({x, max_mnu_tail(x)});
         return t;
       }},
      {"first_death_tail", "--t LIST: P(first death > t) from one particle, t >= 0",
       [](const Params& p) {
         Table t{{"t", "tail"}, {}};
         for (double x : list_param(p, "t")) t.rows.push_back({x, first_death_tail(x)});
         return t;
       }},
      {"expected_gap", "--k LIST --n LIST: E D_{k,n} = u_k + u_{n-k+1}, 1 <= k <= n",
       [](const Params& p) {
         Table t{{"k", "n", "expected", "limit"}, {}};
         for (long n : integer_list(p, "n"))
           for (long k : integer_list(p, "k")) t.rows.push_back({double(k), double(n), expected_gap(k, n), expected_gap_limit(k)});
         return t;
       }},
      {"agreement", "--v LIST --z LIST [--K 400]: truncated tail sum vs closed form, v > 0, |z| < 1",
       [](const Params& p) {
         Table t{{"v", "z", "K", "lhs", "rhs", "absError", "tailBound"}, {}};
         const long K = integer(scalar_param(p, "K", 400.0), "K");
         for (double v : list_param(p, "v"))
           for (double z : list_param(p, "z")) {
             const auto a = agreement_check(v, z, K);
             t.rows.push_back({v, z, double(K), a.lhs, a.rhs, a.absError, a.tailBound});
           }
         return t;
       }},
  };
  return laws;
}

inline const LawInfo& find_law(std::string_view name) {
  for (const auto& l : law_registry()) {
    if (l.name == name) return l;
  }
  std::string known;
  for (const auto& l : law_registry()) known += (known.empty() ? "" : ", ") + l.name;
  throw UsageError("unknown law '" + std::string(name) + "'; known laws: " + known);
}

/// Table for a closed form; domain errors become usage errors naming the domain.
inline Table cmd_exact(std::string_view law, const Params& p) {
  const LawInfo& info = find_law(law);
  try {
    return info.table(p);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string(e.what()) + " (usage: " + info.name + " " + info.usage + ")");
  } catch (const UsageError& e) {
    throw UsageError(std::string(e.what()) + " (usage: " + info.name + " " + info.usage + ")");
  }
}

// ---------------------------------------------------------------------------
// Samplers.

/// Rows produced by one replica.
using ReplicaRows = std::vector<std::vector<double>>;

struct SamplerInfo {
  std::string name;
  std::string usage;
  /// Column names for the given parameters.
  std::function<std::vector<std::string>(const Params&, const RunConfig&)> columns;
  std::function<ReplicaRows(std::size_t replica, Rng& g, const Params&, const RunConfig&)> sample;
};

namespace detail {

inline std::vector<std::string> numbered(const std::string& stem, std::size_t from, std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t k = from; k <= to; ++k) out.push_back(stem + std::to_string(k));
  return out;
}

inline ReplicaRows one_row(std::vector<double> r) { return {std::move(r)}; }

inline ReplicaRows long_rows(std::size_t replica, const std::vector<double>& values) {
  ReplicaRows rows;
  for (std::size_t k = 0; k < values.size(); ++k) rows.push_back({double(replica), double(k + 1), values[k]});
  return rows;
}

inline std::vector<std::string> long_columns(const Params&, const RunConfig&) { return {"replica", "index", "value"}; }

inline double grid_step_of(const RunConfig& cfg) { return cfg.gridStep.value_or(1e-3); }

}  // namespace detail

inline const std::vector<SamplerInfo>& sampler_registry() {
  using detail::long_columns;
  using detail::long_rows;
  using detail::numbered;
  using detail::one_row;
  auto K = [](const Params& p) { return count_param(p, "K", 10.0); };
  auto n = [](const Params& p) { return count_param(p, "n", 100.0); };
  static const std::vector<SamplerInfo> samplers = {
      {"stopped_walk", "levels S_1..S_nu of the walk before it goes negative (long format; levels <= 40 only)",
       long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig&) { return long_rows(i, sample_stopped_walk(g).path); }},
      {"stopped_walk_summary", "nu, first level, last level (censored at --level-cap)",
       [](const Params&, const RunConfig&) { return std::vector<std::string>{"nu", "first", "last"}; },
       [](std::size_t, Rng& g, const Params&, const RunConfig& cfg) {
         const auto s = detail::summarize_stopped(detail::StoppedSampler::walk, cfg.levelCap, 0, g);
         return one_row({double(s.count), s.first, s.last});
       }},
      {"marked_bd", "event times of the marked birth-death process up to --level-cap (long format)", long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig& cfg) {
         return long_rows(i, simulate_marked_bd(g, cfg.levelCap).points());
       }},
      {"geiger", "death times of critical binary branching from a geometric start, up to --level-cap (long format)",
       long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig& cfg) {
         return long_rows(i, simulate_geiger(g, cfg.levelCap).points());
       }},
      {"w_branching", "--K: W_1..W_K from the conditioned chain",
       [K](const Params& p, const RunConfig&) { return numbered("w_", 1, K(p)); },
       [K](std::size_t, Rng& g, const Params& p, const RunConfig&) { return one_row(sample_w_branching(K(p), g).points()); }},
      {"w_differences", "--K: W_k = T_{k+1} - T_1 for the BESQ_4 Cox points (--grid-step, default 1e-3)",
       [K](const Params& p, const RunConfig&) { return numbered("w_", 1, K(p)); },
       [K](std::size_t, Rng& g, const Params& p, const RunConfig& cfg) {
         return one_row(w_via_differences(K(p), g, detail::grid_step_of(cfg)).points());
       }},
      {"feller_w", "--K: W_1..W_K from two infinite-horizon Feller chains",
       [K](const Params& p, const RunConfig&) { return numbered("w_", 1, K(p)); },
       [K](std::size_t, Rng& g, const Params& p, const RunConfig&) { return one_row(sample_feller_w_limit(K(p), g)); }},
      {"feller_w_walk", "--K --n: W_1..W_K from the Feller chains of an n-step walk",
       [K](const Params& p, const RunConfig&) { return numbered("w_", 1, K(p)); },
       [K, n](std::size_t, Rng& g, const Params& p, const RunConfig&) {
         const std::size_t k = K(p);
         if (n(p) < k) throw UsageError("feller_w_walk: need --n >= --K");
         return one_row(feller_w(feller_chains(sample_laplace_walk(n(p), g)), k));
       }},
      {"mk_infty", "--K: M_{0,inf}..M_{K,inf} (--safety)",
       [K](const Params& p, const RunConfig&) { return numbered("m_", 0, K(p)); },
       [K](std::size_t, Rng& g, const Params& p, const RunConfig& cfg) {
         Bes3Options opt;
         opt.safety = cfg.safety;
         return one_row(sample_mk_infty(K(p), default_mk_target(K(p)), g, opt).points());
       }},
      {"bes3_poisson", "values <= --v-max of a Poisson-sampled 3D Bessel process (long format; --safety)", long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig& cfg) {
         Bes3Options opt;
         opt.safety = cfg.safety;
         return long_rows(i, sample_bes3_poisson(cfg.vMax, g, opt).points());
       }},
      {"ndes_bessel", "Cox points on [0, --v-max] driven by BESQ_0 from 2 gamma_1 (long format; --grid-step)", long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig& cfg) {
         BesselOptions opt;
         opt.gridStep = detail::grid_step_of(cfg);
         opt.vMax = cfg.vMax;
         return long_rows(i, simulate_ndes_bessel(g, opt).points);
       }},
      {"nw_bessel", "Cox points on [0, --v-max] driven by BESQ_4 from 2 gamma_2 (long format; --grid-step)", long_columns,
       [](std::size_t i, Rng& g, const Params&, const RunConfig& cfg) {
         BesselOptions opt;
         opt.gridStep = detail::grid_step_of(cfg);
         opt.vMax = cfg.vMax;
         return long_rows(i, simulate_nw_bessel(g, opt).points);
       }},
      {"q4_first", "Q_4(0, T_1) at the first Cox point (--grid-step)",
       [](const Params&, const RunConfig&) { return std::vector<std::string>{"value"}; },
       [](std::size_t, Rng& g, const Params&, const RunConfig& cfg) {
         return one_row({sample_q4_cox_times(1, g, detail::grid_step_of(cfg)).valueAtFirst});
       }},
      {"poisson_cluster", "--lambda: cluster points on [0, --v-max] (long format)", long_columns,
       [](std::size_t i, Rng& g, const Params& p, const RunConfig& cfg) {
         return long_rows(i, poisson_cluster(scalar_param(p, "lambda", 1.0), cfg.vMax, g).points);
       }},
      {"laplace_walk", "--n: S_0..S_n", [n](const Params& p, const RunConfig&) { return numbered("s_", 0, n(p)); },
       [n](std::size_t, Rng& g, const Params& p, const RunConfig&) { return one_row(sample_laplace_walk(n(p), g).sums); }},
      {"order_gaps", "--n: D_{1,n}..D_{n,n}", [n](const Params& p, const RunConfig&) { return numbered("d_", 1, n(p)); },
       [n](std::size_t, Rng& g, const Params& p, const RunConfig&) {
         return one_row(order_stats(sample_laplace_walk(n(p), g)).gaps);
       }},
      {"h_chain", "--K: Y_1..Y_K of the chain conditioned to survive",
       [K](const Params& p, const RunConfig&) { return numbered("y_", 1, K(p)); },
       [K](std::size_t, Rng& g, const Params& p, const RunConfig&) {
         std::vector<double> y;
         for (auto s : sample_h_chain(K(p), g).states) y.push_back(double(s));
         return one_row(std::move(y));
       }},
      {"walk_minimum_gap", "--n: M_{0,n} - M_{-,n} for the walk embedded in Brownian motion",
       [](const Params&, const RunConfig&) { return std::vector<std::string>{"gap"}; },
       [n](std::size_t, Rng& g, const Params& p, const RunConfig&) { return one_row({sample_walk_minimum_gap(n(p), g)}); }},
  };
  return samplers;
}

inline const SamplerInfo& find_sampler(std::string_view name) {
  for (const auto& s : sampler_registry()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& s : sampler_registry()) known += (known.empty() ? "" : ", ") + s.name;
  throw UsageError("unknown sampler '" + std::string(name) + "'; known samplers: " + known);
}

inline constexpr std::uint64_t kDefaultSimulateReplicas = 1000;

/// Replica i of sampler s uses stream (seed, "simulate/s", i); rows are
/// merged in replica order.
inline Table cmd_simulate(std::string_view sampler, const Params& p, const RunConfig& cfg) {
  cfg.validate();
  const SamplerInfo& info = find_sampler(sampler);
  const std::uint64_t n = cfg.replicas.value_or(kDefaultSimulateReplicas);
  const std::uint64_t sid = suite_id("simulate/" + info.name);
  Table t;
  t.columns = info.columns(p, cfg);
  auto parts = run_replicas(n, cfg.threads, [&](std::size_t i) {
    Rng g = replica_stream(cfg.seed, sid, i);
    return info.sample(i, g, p, cfg);
  });
  for (auto& rows : parts) {
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }
  return t;
}

/// Runs the named suite (or all); true when every check passed.
inline VerifyResult cmd_verify(std::string_view suite, const RunConfig& cfg,
                               const std::function<void(const SuiteOutcome&)>& onSuite = {}) {
  cfg.validate();
  std::vector<const SuiteInfo*> suites;
  try {
    suites = resolve_suites(suite);
  } catch (const std::invalid_argument& e) {
    std::string known = "all";
    for (const auto& s : suite_registry()) known += ", " + s.name;
    throw UsageError(std::string(e.what()) + "; known suites: " + known);
  }
  return verify(suite, cfg, onSuite);
}

}  // namespace lwos
