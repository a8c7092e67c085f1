#include "herdisc/report_json.hpp"

#include <cmath>
#include <cstdio>

namespace herdisc {

using nlohmann::json;

namespace {

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return finite_or_null(*v);
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json report_to_json(const BoundsReport& r) {
  json extraction{
      {"tail", r.extraction.tail},
      {"chosen_k", r.extraction.chosen_k},
      {"tau", r.extraction.tau},
      {"bucket_rank", r.extraction.bucket_rank},
      {"projector_basis", matrix_to_json(r.extraction.projector_basis)},
      {"epsilon", r.extraction.epsilon},
      {"selected", r.extraction.selected},
      {"selected_sigma_min", r.extraction.selected_sigma_min},
      {"nuclear_value", r.extraction.nuclear_value},
  };
  json buckets = json::object();
  for (const auto& [k, idx] : r.extraction.buckets) buckets[std::to_string(k)] = idx;
  extraction["buckets"] = std::move(buckets);

  return json{
      {"mu", r.mu},
      {"alpha", r.alpha},
      {"ellipsoid",
       {{"shape", matrix_to_json(r.ellipsoid.shape)},
        {"factor", matrix_to_json(r.ellipsoid.factor)},
        {"linf_width", r.ellipsoid.linf_width}}},
      {"dual_witness",
       {{"row_weights", vector_to_json(r.dual_witness.row_weights.w)},
        {"col_weights", vector_to_json(r.dual_witness.col_weights.w)},
        {"value", r.dual_witness.value}}},
      {"subset_witness",
       {{"subset", r.subset_witness.subset},
        {"row_weights", vector_to_json(r.subset_witness.row_weights.w)},
        {"value", r.subset_witness.value}}},
      {"extraction", std::move(extraction)},
      {"relative_gap", r.relative_gap},
      {"guarantee_ratio_vec", finite_or_null(r.guarantee_ratio_vec)},
      {"guarantee_ratio_disc", finite_or_null(r.guarantee_ratio_disc)},
      {"oracle_values",
       {{"disc", optional_to_json(r.oracle_values.disc)},
        {"herdisc", optional_to_json(r.oracle_values.herdisc)},
        {"vecdisc", optional_to_json(r.oracle_values.vecdisc)},
        {"subset_vecdisc", optional_to_json(r.oracle_values.subset_vecdisc)}}},
      {"diagnostics",
       {{"iterations", r.diagnostics.iterations},
        {"primal_value", r.diagnostics.primal_value},
        {"dual_value", r.diagnostics.dual_value},
        {"relative_gap", r.diagnostics.relative_gap},
        {"converged", r.diagnostics.converged},
        {"max_weak_duality_violation", r.diagnostics.max_weak_duality_violation}}},
      {"delta", r.delta},
  };
}

json verification_to_json(const Verification& v) {
  json checks = json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"magnitude", c.magnitude}});
  return json{{"all_passed", v.all_passed()}, {"checks", std::move(checks)}};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string compare_csv_header() {
  return "family,m,n,seed,alpha,mu,det_lb,vecdisc,disc,herdisc,"
         "guarantee_ratio_vec,guarantee_ratio_disc";
}

std::string compare_csv_row(const CompareRow& row) {
  auto cell = [](const std::optional<double>& v) {
    return v && std::isfinite(*v) ? format_real(*v) : std::string();
  };
  std::string out = row.family + "," + std::to_string(row.m) + "," +
                    std::to_string(row.n) + "," + std::to_string(row.seed);
  if (!row.error.empty()) {
    // Annotate the failure in the first value column; leave the rest blank.
    out += ",ERROR: " + row.error + ",,,,,,,";
    return out;
  }
  for (const auto* v : {&row.alpha, &row.mu, &row.det_lb, &row.vecdisc, &row.disc,
                        &row.herdisc, &row.guarantee_ratio_vec,
                        &row.guarantee_ratio_disc})
    out += "," + cell(*v);
  return out;
}

}  // namespace herdisc
