#pragma once

#include "luorbit/io.hpp"
#include "luorbit/stabilizer.hpp"
#include "luorbit/states.hpp"

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace luorbit {

/// Per-dimension-vector statistics over random samples.
struct SurveyResult {
  PartyDims dims;
  int samples = 0;
  std::uint64_t seed = 0;
  int rank = 0;
  std::map<int, int> orbit_dim_histogram;
  int max_observed = 0;
  double generic_fraction = 0.0;
  int gap_warnings = 0;
};

/// One witness check against the d_1^2+...+d_k^2-k formula.
struct TheoremRow {
  PartyDims dims;
  int expected_orbit_dim = 0;
  int witness_orbit_dim = 0;
  int witness_stab_dim = 0;
  bool center_only = false;
  double sv_gap = std::numeric_limits<double>::infinity();
  bool gap_warning = false;
  bool candidate_failed = false;
  bool pass = false;
};

struct Theorem2Result {
  TheoremRow witness_row;
  SurveyResult survey;
  bool pass = false;
};

/// Per-sample seed: the splitmix64 output stream at step index+1, started
/// from the master seed. Samples decorrelate without sharing generator state.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Orbit-dimension statistics over `samples` i.i.d. Hilbert-Schmidt states.
/// rank < 0 means full rank (D).
inline SurveyResult survey(const PartyDims& dims, int samples, std::uint64_t seed, int rank = -1,
                           const TolerancePolicy& tol = {}) {
  dims.validate();
  if (samples < 1) throw std::invalid_argument("survey: need at least one sample");
  const Eigen::Index d = dims.total();
  const Eigen::Index r = rank < 0 ? d : rank;

  SurveyResult out;
  out.dims = dims;
  out.samples = samples;
  out.seed = seed;
  out.rank = static_cast<int>(r);
  for (int s = 0; s < samples; ++s) {
    const DensityMatrix rho = random_density(dims, r, split_seed(seed, s));
    const StabilizerReport rep = stabilize(rho, tol);
    ++out.orbit_dim_histogram[rep.orbit_dim];
    out.max_observed = std::max(out.max_observed, rep.orbit_dim);
    if (rep.gap_warning) ++out.gap_warnings;
  }
  const int generic_dim = dims.sum_squares() - dims.parties();
  const auto it = out.orbit_dim_histogram.find(generic_dim);
  out.generic_fraction = it == out.orbit_dim_histogram.end()
                             ? 0.0
                             : double(it->second) / double(samples);
  return out;
}

namespace detail {

inline TheoremRow witness_theorem_row(const PartyDims& dims, const TolerancePolicy& tol) {
  TheoremRow row;
  row.dims = dims;
  row.expected_orbit_dim = dims.sum_squares() - dims.parties();
  try {
    const DensityMatrix state = special_state(SpecialStateKind::witness, dims);
    const StabilizerReport rep = stabilize(state, tol);
    row.witness_orbit_dim = rep.orbit_dim;
    row.witness_stab_dim = rep.stabilizer_dim;
    row.center_only = rep.center_only;
    row.sv_gap = rep.sv_gap;
    row.gap_warning = rep.gap_warning;
    row.pass = row.witness_orbit_dim == row.expected_orbit_dim &&
               row.witness_stab_dim == dims.parties() && row.center_only;
    // The k > 2 construction is a candidate, not a theorem: a contract miss
    // is reported, never fatal.
    row.candidate_failed = dims.parties() > 2 && !row.pass;
  } catch (const std::exception&) {
    row.candidate_failed = true;
    row.pass = false;
  }
  return row;
}

}  // namespace detail

/// One row per (m, n) with 2 <= m <= n <= n_max, m <= m_max, checking the
/// witness state against orbit dim m^2+n^2-2 and a center-only stabilizer.
inline std::vector<TheoremRow> verify_theorem1(int m_max, int n_max,
                                               const TolerancePolicy& tol = {}) {
  if (!(2 <= m_max && m_max <= n_max)) {
    throw std::invalid_argument("verify_theorem1: need 2 <= m_max <= n_max");
  }
  std::vector<TheoremRow> rows;
  for (int m = 2; m <= m_max; ++m) {
    for (int n = m; n <= n_max; ++n) {
      rows.push_back(detail::witness_theorem_row(PartyDims{m, n}, tol));
    }
  }
  return rows;
}

/// Witness candidate plus random survey for one dimension vector. The
/// theorem check passes when the survey's max observed orbit dimension hits
/// sum(d_i^2) - k; a failed candidate is excluded from pass accounting.
inline Theorem2Result verify_theorem2(const PartyDims& dims, int samples, std::uint64_t seed,
                                      const TolerancePolicy& tol = {}) {
  dims.validate();
  if (dims.parties() < 2) throw std::invalid_argument("verify_theorem2: need k >= 2");
  Theorem2Result res;
  res.witness_row = detail::witness_theorem_row(dims, tol);
  res.survey = survey(dims, samples, seed, -1, tol);
  const int expected = dims.sum_squares() - dims.parties();
  res.pass = res.survey.max_observed == expected &&
             (res.witness_row.candidate_failed || res.witness_row.pass);
  return res;
}

enum class ReportFormat { json, csv, text };

inline ReportFormat parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown report format '" + std::string(s) + "'");
}

namespace detail {

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

/// Compact form for text tables; CSV/JSON keep full round-trip precision.
inline std::string format_double_compact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

inline Json theorem_row_to_json(const TheoremRow& r) {
  Json j;
  j["dims"] = r.dims.dims;
  j["expected_orbit_dim"] = r.expected_orbit_dim;
  j["witness_orbit_dim"] = r.witness_orbit_dim;
  j["witness_stab_dim"] = r.witness_stab_dim;
  j["center_only"] = r.center_only;
  j["sv_gap"] = json_gap(r.sv_gap);
  j["candidate_failed"] = r.candidate_failed;
  j["pass"] = r.pass;
  return j;
}

inline Json survey_to_json(const SurveyResult& s) {
  Json hist = Json::array();
  for (const auto& [dim, count] : s.orbit_dim_histogram) {
    hist.push_back(Json{{"orbit_dim", dim}, {"count", count}});
  }
  Json j;
  j["dims"] = s.dims.dims;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["rank"] = s.rank;
  j["histogram"] = std::move(hist);
  j["max_observed"] = s.max_observed;
  j["generic_fraction"] = s.generic_fraction;
  j["gap_warnings"] = s.gap_warnings;
  return j;
}

inline constexpr const char* kTheoremCsvHeader =
    "dims,expected_orbit_dim,witness_orbit_dim,witness_stab_dim,center_only,sv_gap,"
    "candidate_failed,pass";

inline std::string theorem_row_to_csv(const TheoremRow& r) {
  std::string line = r.dims.to_string();
  line += ',' + std::to_string(r.expected_orbit_dim);
  line += ',' + std::to_string(r.witness_orbit_dim);
  line += ',' + std::to_string(r.witness_stab_dim);
  line += ',' + bool_str(r.center_only);
  line += ',' + format_double(r.sv_gap);
  line += ',' + bool_str(r.candidate_failed);
  line += ',' + bool_str(r.pass);
  return line;
}

inline constexpr const char* kSurveyCsvHeader =
    "dims,samples,seed,rank,orbit_dim,count,max_observed,generic_fraction,gap_warnings";

inline std::string survey_to_csv(const SurveyResult& s) {
  std::string out = std::string(kSurveyCsvHeader) + '\n';
  const std::string prefix = s.dims.to_string() + ',' + std::to_string(s.samples) + ',' +
                             std::to_string(s.seed) + ',' + std::to_string(s.rank) + ',';
  const std::string suffix = ',' + std::to_string(s.max_observed) + ',' +
                             format_double(s.generic_fraction) + ',' +
                             std::to_string(s.gap_warnings);
  for (const auto& [dim, count] : s.orbit_dim_histogram) {
    out += prefix + std::to_string(dim) + ',' + std::to_string(count) + suffix + '\n';
  }
  return out;
}

inline std::string theorem_rows_to_text(const std::vector<TheoremRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "dims" << std::setw(10) << "expected" << std::setw(8)
     << "orbit" << std::setw(6) << "stab" << std::setw(13) << "center_only" << std::setw(12)
     << "sv_gap" << std::setw(11) << "candidate" << "pass" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << r.dims.to_string() << std::setw(10)
       << r.expected_orbit_dim << std::setw(8) << r.witness_orbit_dim << std::setw(6)
       << r.witness_stab_dim << std::setw(13) << bool_str(r.center_only) << std::setw(12)
       << format_double_compact(r.sv_gap) << std::setw(11)
       << (r.candidate_failed ? "failed" : "ok") << bool_str(r.pass) << '\n';
  }
  return os.str();
}

inline std::string survey_to_text(const SurveyResult& s) {
  std::ostringstream os;
  os << "survey dims=" << s.dims.to_string() << " samples=" << s.samples << " seed=" << s.seed
     << " rank=" << s.rank << '\n';
  os << std::left << std::setw(11) << "orbit_dim" << "count" << '\n';
  for (const auto& [dim, count] : s.orbit_dim_histogram) {
    os << std::left << std::setw(11) << dim << count << '\n';
  }
  os << "max_observed=" << s.max_observed
     << " generic_fraction=" << format_double(s.generic_fraction)
     << " gap_warnings=" << s.gap_warnings << '\n';
  return os.str();
}

}  // namespace detail

/// Deterministic byte output: identical input yields identical bytes.
inline std::string emit_report(const std::vector<TheoremRow>& rows, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: {
      std::string out = std::string(detail::kTheoremCsvHeader) + '\n';
      for (const auto& r : rows) out += detail::theorem_row_to_csv(r) + '\n';
      return out;
    }
    case ReportFormat::json: {
      Json arr = Json::array();
      for (const auto& r : rows) arr.push_back(detail::theorem_row_to_json(r));
      return arr.dump(2) + '\n';
    }
    case ReportFormat::text:
      return detail::theorem_rows_to_text(rows);
  }
  throw std::invalid_argument("emit_report: unknown format");
}

inline std::string emit_report(const SurveyResult& s, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return detail::survey_to_csv(s);
    case ReportFormat::json:
      return detail::survey_to_json(s).dump(2) + '\n';
    case ReportFormat::text:
      return detail::survey_to_text(s);
  }
  throw std::invalid_argument("emit_report: unknown format");
}

inline std::string emit_report(const Theorem2Result& res, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return emit_report(std::vector<TheoremRow>{res.witness_row}, format) + '\n' +
             emit_report(res.survey, format);
    case ReportFormat::json: {
      Json j;
      j["witness"] = detail::theorem_row_to_json(res.witness_row);
      j["survey"] = detail::survey_to_json(res.survey);
      j["pass"] = res.pass;
      return j.dump(2) + '\n';
    }
    case ReportFormat::text:
      return emit_report(std::vector<TheoremRow>{res.witness_row}, format) + '\n' +
             emit_report(res.survey, format) + "pass=" + detail::bool_str(res.pass) + '\n';
  }
  throw std::invalid_argument("emit_report: unknown format");
}

inline std::string emit_report(const StabilizerReport& rep, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: {
      std::string out =
          "dims,orbit_dim,stabilizer_dim,sv_gap,center_only,classification,residual_max\n";
      out += rep.dims.to_string() + ',' + std::to_string(rep.orbit_dim) + ',' +
             std::to_string(rep.stabilizer_dim) + ',' + detail::format_double(rep.sv_gap) + ',' +
             detail::bool_str(rep.center_only) + ',' + to_string(rep.classification) + ',' +
             detail::format_double(rep.residual_max) + '\n';
      return out;
    }
    case ReportFormat::json:
      return stabilizer_report_to_json(rep).dump(2) + '\n';
    case ReportFormat::text: {
      std::ostringstream os;
      os << "dims=" << rep.dims.to_string() << " orbit_dim=" << rep.orbit_dim
         << " stabilizer_dim=" << rep.stabilizer_dim
         << " sv_gap=" << detail::format_double_compact(rep.sv_gap)
         << " center_only=" << detail::bool_str(rep.center_only)
         << " classification=" << to_string(rep.classification)
         << " residual_max=" << detail::format_double_compact(rep.residual_max) << '\n';
      return os.str();
    }
  }
  throw std::invalid_argument("emit_report: unknown format");
}

}  // namespace luorbit
