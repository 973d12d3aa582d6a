#pragma once

// JSON serialization: probability tables (exact and counts variants) and
// analysis reports.

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfimdi/channel.hpp"
#include "rfimdi/key_rate.hpp"
#include "rfimdi/table.hpp"

namespace rfimdi {

inline const char* mode_name(Mode m) {
  return m == Mode::rfi ? "rfi" : "nonrfi";
}

inline const char* engine_name(Engine e) {
  return e == Engine::exact ? "exact" : "grid";
}

namespace detail {

inline nlohmann::json table_rows(const ProbabilityTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < t.size; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < t.size; ++j) row.push_back(t.p[i][j]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline ProbabilityTable table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw TableError("table file: top level must be an object");
  if (!j.contains("size") || !j["size"].is_number_integer()) {
    throw TableError("table file: missing integer field \"size\"");
  }
  const int size = j["size"].get<int>();
  if (size != 3 && size != 4) {
    throw TableError("table file: size must be 3 or 4");
  }

  const bool has_p = j.contains("p");
  const bool has_counts = j.contains("counts") || j.contains("shots");
  if (has_p == has_counts) {
    throw TableError(
        "table file: provide exactly one of \"p\" or \"shots\"+\"counts\"");
  }

  ProbabilityTable t;
  t.size = size;
  if (has_p) {
    const auto& rows = j["p"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != size) {
      throw TableError("table file: \"p\" must be an array of size rows");
    }
    for (int i = 0; i < size; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != size) {
        throw TableError("table file: \"p\" rows must have size entries");
      }
      for (int jj = 0; jj < size; ++jj) {
        if (!row[jj].is_number()) {
          throw TableError("table file: \"p\" entries must be numbers");
        }
        t.p[i][jj] = row[jj].get<double>();
      }
    }
  } else {
    if (!j.contains("shots") || !j["shots"].is_number_integer()) {
      throw TableError("table file: counts variant needs integer \"shots\"");
    }
    if (!j.contains("counts")) {
      throw TableError("table file: counts variant needs \"counts\"");
    }
    const std::int64_t shots = j["shots"].get<std::int64_t>();
    if (shots < 1) throw TableError("table file: shots must be >= 1");
    const auto& rows = j["counts"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != size) {
      throw TableError("table file: \"counts\" must be an array of size rows");
    }
    for (int i = 0; i < size; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != size) {
        throw TableError("table file: \"counts\" rows must have size entries");
      }
      for (int jj = 0; jj < size; ++jj) {
        if (!row[jj].is_number_integer()) {
          throw TableError("table file: counts must be integers");
        }
        const std::int64_t c = row[jj].get<std::int64_t>();
        if (c < 0 || c > shots) {
          throw TableError("table file: counts must lie in [0, shots]");
        }
        t.p[i][jj] = static_cast<double>(c) / static_cast<double>(shots);
      }
    }
  }
  return t;
}

inline ProbabilityTable read_table(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw TableError(std::string("table file: JSON parse failed: ") + e.what());
  }
  return table_from_json(j);
}

inline ProbabilityTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open table file: " + path);
  return read_table(in);
}

inline nlohmann::json table_to_json(const ProbabilityTable& t) {
  nlohmann::json j;
  j["size"] = t.size;
  j["p"] = detail::table_rows(t);
  return j;
}

inline nlohmann::json sampled_to_json(const SampledTable& s) {
  nlohmann::json j;
  j["size"] = s.table.size;
  j["shots"] = s.shots;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < s.table.size; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int jj = 0; jj < s.table.size; ++jj) row.push_back(s.counts[i][jj]);
    rows.push_back(row);
  }
  j["counts"] = rows;
  return j;
}

inline void write_table(std::ostream& out, const ProbabilityTable& t) {
  out << table_to_json(t).dump(2) << "\n";
}

inline void write_sampled(std::ostream& out, const SampledTable& s) {
  out << sampled_to_json(s).dump(2) << "\n";
}

inline nlohmann::json report_to_json(const KeyRateReport& r) {
  nlohmann::json j;
  j["mode"] = mode_name(r.mode);
  j["e_bit"] = r.e_bit;
  j["e_phase"] = r.e_phase;
  j["omega"] = r.omega;
  j["rate"] = r.rate;

  static const char* kPairNames[4] = {"22", "23", "32", "33"};
  nlohmann::json intervals;
  for (int i = 0; i < 4; ++i) {
    intervals[kPairNames[i]] = {r.intervals[i].lower, r.intervals[i].upper};
  }
  j["intervals"] = intervals;

  nlohmann::json witness;
  witness["r"] = r.witness.r;
  witness["A"] = r.witness.phase_a();
  witness["B"] = r.witness.phase_b();
  witness["C"] = r.witness.phase_c();
  j["witness"] = witness;

  nlohmann::json diag;
  diag["delta"] = r.delta;
  diag["s_total"] = r.s_total;
  diag["raw_rate"] = r.raw_rate;
  diag["delta_degenerate"] = r.delta_degenerate;
  diag["cap_hit"] = r.cap_hit;
  nlohmann::json pairs;
  for (int i = 0; i < r.pair_count && i < 4; ++i) {
    nlohmann::json p;
    p["a_at_lower"] = {r.pair_diag[i].a_at_lower.a0,
                       r.pair_diag[i].a_at_lower.a1};
    p["b_at_lower"] = {r.pair_diag[i].b_at_lower.a0,
                       r.pair_diag[i].b_at_lower.a1};
    p["a_at_upper"] = {r.pair_diag[i].a_at_upper.a0,
                       r.pair_diag[i].a_at_upper.a1};
    p["b_at_upper"] = {r.pair_diag[i].b_at_upper.a0,
                       r.pair_diag[i].b_at_upper.a1};
    p["raw_lower"] = r.pair_diag[i].raw_lower;
    p["raw_upper"] = r.pair_diag[i].raw_upper;
    p["cap_hit"] = r.pair_diag[i].cap_hit;
    pairs[kPairNames[i]] = p;
  }
  diag["pairs"] = pairs;
  j["diagnostics"] = diag;

  nlohmann::json settings;
  settings["mode"] = mode_name(r.settings.mode);
  settings["engine"] = engine_name(r.settings.engine);
  settings["grid_coeff"] = r.settings.grid_coeff;
  settings["r_step"] = r.settings.r_step;
  settings["angle_step_deg"] = r.settings.angle_step_deg;
  settings["eps"] = r.settings.eps;
  j["settings"] = settings;
  return j;
}

inline void write_report(std::ostream& out, const KeyRateReport& r) {
  out << report_to_json(r).dump(2) << "\n";
}

}  // namespace rfimdi
