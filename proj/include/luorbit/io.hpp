#pragma once

#include "luorbit/stabilizer.hpp"
#include "luorbit/states.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace luorbit {

using Json = nlohmann::json;

namespace detail {

inline Json matrix_part_to_json(const ComplexMatrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& re, const Json& im) {
  if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty()) {
    throw std::invalid_argument("matrix JSON: re/im must be equal-size non-empty 2D arrays");
  }
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& rre = re.at(i);
    const auto& rim = im.at(i);
    if (static_cast<Eigen::Index>(rre.size()) != cols ||
        static_cast<Eigen::Index>(rim.size()) != cols) {
      throw std::invalid_argument("matrix JSON: ragged rows");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Complex(rre.at(j).get<double>(), rim.at(j).get<double>());
    }
  }
  return m;
}

/// Infinite gaps serialize as the string "inf" (JSON has no infinity).
inline Json json_gap(double gap) {
  if (std::isfinite(gap)) return gap;
  return "inf";
}

}  // namespace detail

inline Json density_to_json(const DensityMatrix& rho) {
  Json j;
  j["dims"] = rho.dims.dims;
  j["re"] = detail::matrix_part_to_json(rho.matrix, false);
  j["im"] = detail::matrix_part_to_json(rho.matrix, true);
  return j;
}

inline DensityMatrix density_from_json(const Json& j) {
  if (!j.contains("dims") || !j.contains("re") || !j.contains("im")) {
    throw std::invalid_argument("density JSON: need dims, re, im");
  }
  DensityMatrix rho{PartyDims{j.at("dims").get<std::vector<int>>()},
                    detail::matrix_from_json(j.at("re"), j.at("im"))};
  rho.validate();
  return rho;
}

inline Json stabilizer_report_to_json(const StabilizerReport& rep) {
  Json j;
  j["dims"] = rep.dims.dims;
  j["orbit_dim"] = rep.orbit_dim;
  j["stabilizer_dim"] = rep.stabilizer_dim;
  j["sv_gap"] = detail::json_gap(rep.sv_gap);
  j["center_only"] = rep.center_only;
  j["classification"] = to_string(rep.classification);
  j["residual_max"] = rep.residual_max;
  return j;
}

/// JSON file holding a list of per-party unitaries, each {re: [[..]], im: [[..]]}.
inline std::vector<ComplexMatrix> unitaries_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("unitaries JSON: expected a non-empty array");
  }
  std::vector<ComplexMatrix> us;
  for (const auto& entry : j) {
    if (!entry.contains("re") || !entry.contains("im")) {
      throw std::invalid_argument("unitaries JSON: each entry needs re and im");
    }
    us.push_back(detail::matrix_from_json(entry.at("re"), entry.at("im")));
  }
  return us;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
  Json j;
  in >> j;
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
  out << content;
}

}  // namespace luorbit
