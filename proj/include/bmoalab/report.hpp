#pragma once

// JSON report assembly and CSV profile emission for the batch front end.
// Reports carry the tool version, the fully-expanded config echo (defaults
// written in, never implied), wall time, a results object, and warnings.
// Profiles are flattened to RFC-4180-style CSV with a fixed header and
// 17-significant-digit scientific notation so runs diff cleanly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bmoalab/core.hpp"
#include "bmoalab/profile.hpp"
#include "bmoalab/semigroup.hpp"
#include "bmoalab/spaces.hpp"
#include "bmoalab/volterra.hpp"

namespace bmoalab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON builders
// ---------------------------------------------------------------------------

[[nodiscard]] inline Json to_json(Complex z) {
  return Json::array({z.real(), z.imag()});
}

[[nodiscard]] inline Json to_json(const VanishingProfile& profile) {
  Json points = Json::array();
  for (const ProfilePoint& pt : profile.points) {
    points.push_back(Json{{"param", pt.param}, {"value", pt.value}});
  }
  return Json{{"verdict", to_string(profile.verdict)},
              {"slope", profile.slope},
              {"points", std::move(points)},
              {"notes", profile.notes}};
}

[[nodiscard]] inline Json to_json(const NormEstimate& est) {
  return Json{{"value", est.value},
              {"error_estimate", est.error_estimate},
              {"witness", to_json(est.witness)},
              {"warnings", est.warnings}};
}

[[nodiscard]] inline Json to_json(const FlowResult& flow) {
  Json samples = Json::array();
  for (const auto& [t, w] : flow.samples) {
    samples.push_back(Json{{"t", t}, {"point", to_json(w)}});
  }
  return Json{{"final_point", to_json(flow.final_point)},
              {"steps", flow.steps},
              {"max_abs", flow.max_abs},
              {"samples", std::move(samples)}};
}

[[nodiscard]] inline Json to_json(const ContinuityResult& cont) {
  return Json{{"profile", to_json(cont.profile)},
              {"error_estimates", cont.error_estimates},
              {"excluded_nodes", cont.excluded_nodes}};
}

[[nodiscard]] inline Json to_json(const Cond2Result& c2) {
  return Json{{"profile", to_json(c2.profile)}, {"bounded", c2.bounded}};
}

[[nodiscard]] inline Json to_json(const CarlesonResult& car) {
  Json per_center = Json::array();
  for (const auto& [angle, profile] : car.per_center) {
    per_center.push_back(
        Json{{"center_angle", angle}, {"profile", to_json(profile)}});
  }
  return Json{{"sup_constant", car.sup_constant},
              {"worst_center", car.worst_center},
              {"worst", to_json(car.worst)},
              {"per_center", std::move(per_center)}};
}

[[nodiscard]] inline Json to_json(const TgLowerBound& lb) {
  return Json{{"value", lb.value},
              {"witness", to_json(lb.witness)},
              {"unbounded", lb.unbounded},
              {"profile", to_json(lb.profile)},
              {"warnings", lb.warnings}};
}

// ---------------------------------------------------------------------------
// CSV profiles
// ---------------------------------------------------------------------------

struct ProfileCsvRow {
  double center_angle = 0.0;
  int k = 0;
  double param = 0.0;
  double value = 0.0;
};

/// Scientific notation with 17 significant digits ("%.16e").
[[nodiscard]] inline std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

/// Flatten one profile into CSV rows; point i gets ladder index k_min + i.
inline void append_profile_rows(std::vector<ProfileCsvRow>& rows,
                                double center_angle, int k_min,
                                const VanishingProfile& profile) {
  for (std::size_t i = 0; i < profile.points.size(); ++i) {
    rows.push_back(ProfileCsvRow{center_angle, k_min + static_cast<int>(i),
                                 profile.points[i].param,
                                 profile.points[i].value});
  }
}

inline void write_profile_csv(const std::filesystem::path& path,
                              const std::vector<ProfileCsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path.string());
  out << "center_angle,k,param,value\r\n";
  for (const ProfileCsvRow& row : rows) {
    out << format_sci(row.center_angle) << ',' << row.k << ','
        << format_sci(row.param) << ',' << format_sci(row.value) << "\r\n";
  }
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

struct Report {
  std::string command;
  Json config = Json::object();   ///< echo with every default written in
  Json results = Json::object();
  std::vector<std::string> warnings;
  double wall_time_seconds = 0.0;

  [[nodiscard]] Json to_json() const {
    return Json{{"tool_version", kToolVersion},
                {"command", command},
                {"config", config},
                {"wall_time_seconds", wall_time_seconds},
                {"results", results},
                {"warnings", warnings}};
  }
};

inline void write_report(const std::filesystem::path& path,
                         const Report& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path.string());
  out << report.to_json().dump(2) << '\n';
}

}  // namespace bmoalab
