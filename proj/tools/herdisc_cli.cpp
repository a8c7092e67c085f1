// Command-line front end: certified discrepancy bounds, enumeration
// oracles, bound-family comparison tables, and instance generation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "herdisc/approx.hpp"
#include "herdisc/instances.hpp"
#include "herdisc/report_json.hpp"

namespace {

using namespace herdisc;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitOverCap = 3;

struct CommonOpts {
  std::string family = "identity";
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  std::string format = "json";
  double tol = 1e-4;
  int max_iters = 50000;
  double delta = 0.0;
  int oracle_max_n = 20;
  int herdisc_oracle_max_n = 14;
  long long ncap = 1LL << 16;
  bool verify = false;
  bool herdisc_cap_from_flag = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--family", o->family,
                  "identity|hadamard|intervals|three_copy_hadamard|random_pm1|"
                  "random_gaussian|random_unit_columns");
  cmd->add_option("--m", o->m, "rows (random families)");
  cmd->add_option("--n", o->n, "columns");
  cmd->add_option("--seed", o->seed, "seed for random families and solvers (default 0)");
  cmd->add_option("--input", o->input, "matrix CSV path (overrides --family)");
  cmd->add_option("--output", o->output, "output path (default stdout)");
  cmd->add_option("--format", o->format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--tol", o->tol, "solver tolerance");
  cmd->add_option("--max-iters", o->max_iters, "dual ascent iteration cap");
  cmd->add_option("--delta", o->delta, "rank-repair perturbation (0 = auto)");
  cmd->add_option("--oracle-max-n", o->oracle_max_n, "coloring enumeration cap");
  cmd->add_option("--herdisc-oracle-max-n", o->herdisc_oracle_max_n,
                  "hereditary enumeration cap");
  cmd->add_option("--ncap", o->ncap, "weight rationalization denominator");
  cmd->add_flag("--verify", o->verify, "recheck every certificate, fail on mismatch");
}

// Flag beats environment beats default.
void apply_env_cap(const CLI::App* cmd, CommonOpts* o) {
  if (cmd->count("--herdisc-oracle-max-n") > 0) return;
  if (const char* env = std::getenv("HERDISC_ORACLE_MAX_N")) {
    try {
      o->herdisc_oracle_max_n = std::stoi(env);
    } catch (const std::exception&) {
      throw InvalidParameter(std::string("HERDISC_ORACLE_MAX_N is not an integer: ") +
                             env);
    }
  }
}

InstanceSpec spec_from(const CommonOpts& o) {
  InstanceSpec spec;
  if (!o.input.empty()) {
    spec.family = Family::kCsv;
    spec.csv_path = o.input;
    return spec;
  }
  spec.family = family_from_string(o.family);
  spec.m = o.m;
  spec.n = o.n;
  spec.seed = o.seed;
  return spec;
}

AlgorithmOptions algorithm_options(const CommonOpts& o) {
  AlgorithmOptions opts;
  opts.tol = o.tol;
  opts.max_iters = o.max_iters;
  opts.delta = o.delta;
  opts.disc_oracle_max_n = o.oracle_max_n;
  opts.herdisc_oracle_max_n = o.herdisc_oracle_max_n;
  opts.seed = o.seed;
  opts.n_cap = o.ncap;
  return opts;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failure on " + path);
}

int cmd_bound(const CommonOpts& o) {
  const Matrix a = generate(spec_from(o));
  const BoundsReport report = approximate_herdisc(a, algorithm_options(o));
  nlohmann::json doc = report_to_json(report);
  bool verify_failed = false;
  if (o.verify) {
    const Verification v = verify_report(a, report);
    doc["verification"] = verification_to_json(v);
    verify_failed = !v.all_passed();
  }
  write_text(o.output, doc.dump(2) + "\n");
  if (verify_failed) {
    std::cerr << "verification failed\n";
    return kExitInputError;
  }
  return report.diagnostics.converged ? kExitOk : kExitNotConverged;
}

int cmd_oracle(const CommonOpts& o) {
  const Matrix a = generate(spec_from(o));
  const int n = static_cast<int>(a.cols());
  if (n > o.herdisc_oracle_max_n)
    throw OracleTooLarge("n = " + std::to_string(n) +
                         " exceeds hereditary oracle cap " +
                         std::to_string(o.herdisc_oracle_max_n));
  const DiscResult disc = disc_exact(a, o.oracle_max_n);
  const HerdiscResult herdisc = herdisc_exact(a, o.herdisc_oracle_max_n);
  SdpOptions sdp;
  sdp.tol = o.tol;
  sdp.seed = o.seed;
  const double vecdisc = vecdisc_solve(a, sdp).value;
  const double det_lb = det_lb_exact(a);

  if (o.format == "csv") {
    std::ostringstream os;
    os << "m,n,disc,herdisc,vecdisc,det_lb\n"
       << a.rows() << ',' << n << ',' << format_real(disc.value) << ','
       << format_real(herdisc.value) << ',' << format_real(vecdisc) << ','
       << format_real(det_lb) << '\n';
    write_text(o.output, os.str());
  } else {
    nlohmann::json doc{
        {"m", a.rows()},
        {"n", n},
        {"disc", {{"value", disc.value}, {"coloring", disc.coloring.signs}}},
        {"herdisc", {{"value", herdisc.value}, {"subset", herdisc.subset}}},
        {"vecdisc", vecdisc},
        {"det_lb", det_lb},
    };
    write_text(o.output, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// Spec lines for compare: family,m,n,seed (no header).
std::vector<InstanceSpec> read_spec_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<InstanceSpec> specs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string family, field;
    InstanceSpec spec;
    if (!std::getline(is, family, ',')) continue;
    spec.family = family_from_string(family);
    try {
      if (std::getline(is, field, ',')) spec.m = std::stoi(field);
      if (std::getline(is, field, ',')) spec.n = std::stoi(field);
      if (std::getline(is, field, ',')) spec.seed = std::stoull(field);
    } catch (const std::exception&) {
      throw FormatError(path + ": bad spec line " + std::to_string(lineno) + ": " +
                        line);
    }
    specs.push_back(std::move(spec));
  }
  if (specs.empty()) throw FormatError(path + ": no instance specs");
  return specs;
}

int cmd_compare(const CommonOpts& o) {
  std::vector<InstanceSpec> specs;
  if (!o.input.empty()) {
    specs = read_spec_list(o.input);
  } else {
    specs.push_back(spec_from(o));
  }

  std::ostringstream os;
  os << compare_csv_header() << '\n';
  int succeeded = 0;
  for (const InstanceSpec& spec : specs) {
    CompareRow row;
    row.family = family_to_string(spec.family);
    row.m = spec.m;
    row.n = spec.n;
    row.seed = spec.seed;
    try {
      const Matrix a = generate(spec);
      row.m = static_cast<int>(a.rows());
      row.n = static_cast<int>(a.cols());
      AlgorithmOptions opts = algorithm_options(o);
      const BoundsReport r = approximate_herdisc(a, opts);
      row.alpha = r.alpha;
      row.mu = r.mu;
      row.vecdisc = r.oracle_values.vecdisc;
      row.disc = r.oracle_values.disc;
      row.herdisc = r.oracle_values.herdisc;
      row.guarantee_ratio_vec = r.guarantee_ratio_vec;
      row.guarantee_ratio_disc = r.guarantee_ratio_disc;
      try {
        row.det_lb = det_lb_exact(a);
      } catch (const OracleTooLarge&) {
      }
      ++succeeded;
    } catch (const Error& e) {
      row.error = e.what();
    }
    os << compare_csv_row(row) << '\n';
  }
  write_text(o.output, os.str());
  return succeeded > 0 ? kExitOk : kExitInputError;
}

int cmd_generate(const CommonOpts& o) {
  const Matrix a = generate(spec_from(o));
  if (o.output.empty()) {
    std::ostringstream os;
    char buf[64];
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
        if (j) os << ',';
        os << buf;
      }
      os << '\n';
    }
    std::cout << os.str();
  } else {
    save_matrix_csv(a, o.output);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified hereditary discrepancy bounds via minimum-width "
               "enclosing ellipsoids"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* bound = app.add_subcommand("bound", "two-sided bounds report (JSON)");
  CLI::App* oracle = app.add_subcommand("oracle", "exact values by enumeration");
  CLI::App* compare = app.add_subcommand("compare", "bound families side by side (CSV)");
  CLI::App* generate = app.add_subcommand("generate", "write an instance matrix CSV");
  for (CLI::App* cmd : {bound, oracle, compare, generate}) add_common_flags(cmd, &opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_env_cap(cmd, &opts);
    if (cmd == bound) return cmd_bound(opts);
    if (cmd == oracle) return cmd_oracle(opts);
    if (cmd == compare) return cmd_compare(opts);
    return cmd_generate(opts);
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOverCap;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
