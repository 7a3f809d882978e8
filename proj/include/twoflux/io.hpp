#ifndef TWOFLUX_IO_HPP_
#define TWOFLUX_IO_HPP_

// Deterministic serialization: CSV snapshots/series, JSON event logs, and
// the FNV-1a config hash stamped into every output file header.
//
// CSV column conventions (fixed so downstream plots need no code):
//   profile:     x_break, value            (first row: -inf sentinel / wrap cell)
//   field:       x_center, value
//   diagnostics: time, tv, linf, l1, front_count, extremum_count,
//                min_plateau_width, restarts
//   ladder:      nu, distance, ratio, apriori_bound, flux_gap_estimate

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twoflux/profile.hpp"
#include "twoflux/semigroup.hpp"
#include "twoflux/tracker.hpp"
#include "twoflux/viscous.hpp"

namespace twoflux {
namespace io {

/// Shortest round-trip decimal for a double, locale-independent.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // try shorter representations that still round-trip
  for (int prec = 1; prec < 17; ++prec) {
    char cand[40];
    std::snprintf(cand, sizeof(cand), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(cand, "%lf", &back);
    if (back == v) return cand;
  }
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Canonical hash of a config: dumped with sorted keys (nlohmann default)
/// and no whitespace, then FNV-1a.
inline std::string config_hash(const nlohmann::json& config) {
  return hash_hex(fnv1a64(config.dump()));
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << body;
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline std::string csv_header(const std::string& hash, const std::string& columns) {
  return "# config_hash=" + hash + "\n" + columns + "\n";
}

inline std::string profile_csv(const Profile& p, const std::string& hash) {
  std::string s = csv_header(hash, "x_break,value");
  if (p.topology == Topology::line) {
    s += "-inf," + format_double(p.values[0]) + "\n";
    for (std::size_t i = 0; i < p.breakpoints.size(); ++i)
      s += format_double(p.breakpoints[i]) + "," + format_double(p.values[i + 1]) + "\n";
  } else {
    if (p.breakpoints.empty()) {
      s += "0," + format_double(p.values[0]) + "\n";
    } else {
      for (std::size_t i = 0; i < p.breakpoints.size(); ++i)
        s += format_double(p.breakpoints[i]) + "," + format_double(p.values[i]) + "\n";
    }
  }
  return s;
}

inline nlohmann::json profile_json(const Profile& p) {
  nlohmann::json j;
  j["topology"] = p.topology == Topology::periodic ? "periodic" : "line";
  j["breakpoints"] = p.breakpoints;
  j["values"] = p.values;
  return j;
}

inline Profile profile_from_json(const nlohmann::json& j) {
  Profile p;
  std::string topo = j.at("topology").get<std::string>();
  if (topo == "periodic")
    p.topology = Topology::periodic;
  else if (topo == "line")
    p.topology = Topology::line;
  else
    throw std::invalid_argument("profile_from_json: unknown topology " + topo);
  p.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  p.values = j.at("values").get<std::vector<double>>();
  p.validate();
  return p;
}

inline std::string diagnostics_csv(const std::vector<SampleDiagnostics>& series,
                                   const std::string& hash) {
  std::string s = csv_header(
      hash, "time,tv,linf,l1,front_count,extremum_count,min_plateau_width,restarts");
  for (const auto& d : series) {
    s += format_double(d.time) + "," + format_double(d.tv) + "," + format_double(d.linf) + "," +
         format_double(d.l1) + "," + std::to_string(d.front_count) + "," +
         std::to_string(d.extremum_count) + "," + format_double(d.min_plateau_width) + "," +
         std::to_string(d.restarts) + "\n";
  }
  return s;
}

inline std::string field_csv(const ViscousField& fld, const std::string& hash) {
  std::string s = csv_header(hash, "x_center,value");
  for (int j = 0; j < fld.n_cells(); ++j)
    s += format_double(fld.cell_center(j)) + "," + format_double(fld.values()[std::size_t(j)]) +
         "\n";
  return s;
}

inline std::string ladder_csv(const LadderReport& rep, const std::string& hash) {
  std::string s = csv_header(hash, "nu,distance,ratio,apriori_bound,flux_gap_estimate");
  for (std::size_t k = 0; k < rep.entries.size(); ++k) {
    const auto& e = rep.entries[k];
    std::string ratio = k < rep.ratios.size() ? format_double(rep.ratios[k]) : "";
    s += std::to_string(e.nu) + "," + format_double(e.distance) + "," + ratio + "," +
         format_double(e.apriori_bound) + "," + format_double(e.flux_gap_estimate) + "\n";
  }
  return s;
}

/// Event log as JSON lines: {"time":..., "kind":..., "location":...}.
inline std::string event_log_jsonl(const TrackerStats& stats) {
  std::string s;
  for (const auto& e : stats.events) {
    nlohmann::json j;
    j["time"] = e.time;
    j["kind"] = to_string(e.kind);
    j["location"] = e.location;
    s += j.dump() + "\n";
  }
  return s;
}

}  // namespace io
}  // namespace twoflux

#endif  // TWOFLUX_IO_HPP_
