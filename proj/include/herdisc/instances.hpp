#pragma once

#include <cstdint>
#include <string>

#include "herdisc/linalg.hpp"

namespace herdisc {

enum class Family {
  kIdentity,
  kHadamard,
  kIntervals,
  kThreeCopyHadamard,
  kRandomPm1,
  kRandomGaussian,
  kRandomUnitColumns,
  kCsv,
};

Family family_from_string(const std::string& name);
std::string family_to_string(Family f);

// Generator families used by the test suite. Random families are driven
// by mt19937_64 with hand-rolled uniform/Gaussian transforms, so a given
// (family, m, n, seed) produces the same matrix on every platform.
struct InstanceSpec {
  Family family = Family::kIdentity;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string csv_path;  // only for Family::kCsv

  std::string describe() const;
};

Matrix generate(const InstanceSpec& spec);

// CSV matrix format: comma-separated decimal reals, one row per line,
// no header, LF line endings.
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const Matrix& a, const std::string& path);

}  // namespace herdisc
