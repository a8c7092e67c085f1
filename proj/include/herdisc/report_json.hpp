#pragma once

#include <string>

#include <json.hpp>

#include "herdisc/approx.hpp"

namespace herdisc {

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json report_to_json(const BoundsReport& r);
nlohmann::json verification_to_json(const Verification& v);

// Rows for the bound-comparison table. Columns, in order:
// family,m,n,seed,alpha,mu,det_lb,vecdisc,disc,herdisc,
// guarantee_ratio_vec,guarantee_ratio_disc. Over-cap oracle entries are
// left blank.
std::string compare_csv_header();

struct CompareRow {
  std::string family;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<double> alpha, mu, det_lb, vecdisc, disc, herdisc;
  std::optional<double> guarantee_ratio_vec, guarantee_ratio_disc;
  std::string error;  // annotation when the instance failed; other cells blank
};

std::string compare_csv_row(const CompareRow& row);

// %.17g, the shortest form guaranteed to round-trip a double.
std::string format_real(double v);

}  // namespace herdisc
