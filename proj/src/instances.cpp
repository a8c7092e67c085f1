#include "herdisc/instances.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace herdisc {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double next_uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; avoids std::normal_distribution, whose output is
// implementation-defined across standard libraries.
double next_gaussian(std::mt19937_64& rng, bool& have_spare, double& spare) {
  if (have_spare) {
    have_spare = false;
    return spare;
  }
  double u1 = next_uniform01(rng);
  while (u1 <= 0.0) u1 = next_uniform01(rng);
  const double u2 = next_uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare = r * std::sin(theta);
  have_spare = true;
  return r * std::cos(theta);
}

Matrix sylvester_hadamard(int n) {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  while (h.rows() < n) {
    const int k = static_cast<int>(h.rows());
    Matrix next(2 * k, 2 * k);
    next.topLeftCorner(k, k) = h;
    next.topRightCorner(k, k) = h;
    next.bottomLeftCorner(k, k) = h;
    next.bottomRightCorner(k, k) = -h;
    h = next;
  }
  return h;
}

}  // namespace

Family family_from_string(const std::string& name) {
  if (name == "identity") return Family::kIdentity;
  if (name == "hadamard") return Family::kHadamard;
  if (name == "intervals") return Family::kIntervals;
  if (name == "three_copy_hadamard") return Family::kThreeCopyHadamard;
  if (name == "random_pm1") return Family::kRandomPm1;
  if (name == "random_gaussian") return Family::kRandomGaussian;
  if (name == "random_unit_columns") return Family::kRandomUnitColumns;
  if (name == "csv") return Family::kCsv;
  throw InvalidSpec("unknown instance family: " + name);
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::kIdentity: return "identity";
    case Family::kHadamard: return "hadamard";
    case Family::kIntervals: return "intervals";
    case Family::kThreeCopyHadamard: return "three_copy_hadamard";
    case Family::kRandomPm1: return "random_pm1";
    case Family::kRandomGaussian: return "random_gaussian";
    case Family::kRandomUnitColumns: return "random_unit_columns";
    case Family::kCsv: return "csv";
  }
  return "?";
}

std::string InstanceSpec::describe() const {
  std::ostringstream os;
  os << family_to_string(family) << "(m=" << m << ",n=" << n << ",seed=" << seed
     << ")";
  return os.str();
}

Matrix generate(const InstanceSpec& spec) {
  const int n = spec.n;
  switch (spec.family) {
    case Family::kIdentity: {
      if (n <= 0) throw InvalidSpec("identity: n must be positive");
      return Matrix::Identity(n, n);
    }
    case Family::kHadamard: {
      if (!is_power_of_two(n)) throw InvalidSpec("hadamard: n must be a power of 2");
      return sylvester_hadamard(n);
    }
    case Family::kIntervals: {
      if (n <= 0) throw InvalidSpec("intervals: n must be positive");
      Matrix a = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = 1.0;
      return a;
    }
    case Family::kThreeCopyHadamard: {
      if (!is_power_of_two(n))
        throw InvalidSpec("three_copy_hadamard: n must be a power of 2");
      Matrix h = sylvester_hadamard(n);
      Matrix a(n, 3 * n);
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < 3; ++c) a.col(3 * j + c) = h.col(j);
      return a;
    }
    case Family::kRandomPm1: {
      if (spec.m <= 0 || n <= 0) throw InvalidSpec("random_pm1: m,n must be positive");
      std::mt19937_64 rng(spec.seed);
      Matrix a(spec.m, n);
      for (int i = 0; i < spec.m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = (rng() & 1) ? 1.0 : -1.0;
      return a;
    }
    case Family::kRandomGaussian: {
      if (spec.m <= 0 || n <= 0)
        throw InvalidSpec("random_gaussian: m,n must be positive");
      std::mt19937_64 rng(spec.seed);
      bool have_spare = false;
      double spare = 0.0;
      Matrix a(spec.m, n);
      for (int i = 0; i < spec.m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = next_gaussian(rng, have_spare, spare);
      return a;
    }
    case Family::kRandomUnitColumns: {
      InstanceSpec g = spec;
      g.family = Family::kRandomGaussian;
      Matrix a = generate(g);
      for (int j = 0; j < a.cols(); ++j) {
        double norm = a.col(j).norm();
        if (norm == 0.0) {
          a(0, j) = 1.0;
          norm = 1.0;
        }
        a.col(j) /= norm;
      }
      return a;
    }
    case Family::kCsv:
      return load_matrix_csv(spec.csv_path);
  }
  throw InvalidSpec("unhandled family");
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;
    std::vector<double> row;
    std::size_t start = 0;
    int col = 0;
    while (true) {
      ++col;
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
        throw ParseError(path + ": cannot parse '" + field + "' at row " +
                             std::to_string(lineno) + " col " + std::to_string(col),
                         lineno, col);
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(path + ": ragged row " + std::to_string(lineno) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path + ": empty matrix");
  Matrix a(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  return a;
}

void save_matrix_csv(const Matrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char buf[64];
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace herdisc
