#ifndef OFFPOLICY_CSV_HPP_
#define OFFPOLICY_CSV_HPP_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "offpolicy/collision.hpp"
#include "offpolicy/errors.hpp"
#include "offpolicy/grid.hpp"
#include "offpolicy/harness.hpp"

namespace offpolicy {

inline constexpr const char* kSummaryHeader =
    "algorithm,alpha,lambda,eta,beta,zeta,auc_mean,auc_stderr,final5_mean,final5_stderr,unstable,diverged_runs";
inline constexpr const char* kRawHeader = "run,step,rve";
inline constexpr const char* kRerunIndexHeader =
    "algorithm,alpha,lambda,eta,beta,zeta,criterion,original_value,auc_mean,auc_stderr,final5_mean,final5_stderr,file";

/// One line of summary.csv.
struct SummaryRow {
  InstanceSpec spec;
  double auc_mean = 0.0;
  double auc_stderr = 0.0;
  double final5_mean = 0.0;
  double final5_stderr = 0.0;
  bool unstable = false;
  std::size_t diverged_runs = 0;

  static SummaryRow from(const InstanceSpec& spec, const AggregateResult& agg) {
    return SummaryRow{spec, agg.auc, agg.auc_stderr, agg.final5_mean, agg.final5_stderr, agg.unstable,
                      agg.diverged_runs};
  }
};

namespace csv {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("malformed number '" + s + "'");
  return x;
}

inline std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_real(s);
}

inline std::string optional_field(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

/// Reads data lines after the header, skipping '#' comment lines.
inline std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path, const std::string& header) {
  auto in = open_in(path);
  std::string line;
  while (std::getline(in, line) && !line.empty() && line.front() == '#') {
  }
  if (line != header) throw IoError(path.string() + ": unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(split(line));
  }
  return rows;
}

}  // namespace csv

inline void write_summary_row(std::ostream& out, const SummaryRow& r) {
  const auto& s = r.spec;
  out << algorithm_name(s.algorithm) << ',' << format_real(s.alpha) << ',' << csv::optional_field(s.lambda) << ','
      << csv::optional_field(s.eta) << ',' << csv::optional_field(s.beta) << ',' << csv::optional_field(s.zeta) << ','
      << format_real(r.auc_mean) << ',' << format_real(r.auc_stderr) << ',' << format_real(r.final5_mean) << ','
      << format_real(r.final5_stderr) << ',' << (r.unstable ? 1 : 0) << ',' << r.diverged_runs << '\n';
}

inline void write_summary(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  auto out = csv::open_out(path);
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) write_summary_row(out, r);
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::vector<SummaryRow> read_summary(const std::filesystem::path& path, const AbtdBounds& abtd = {}) {
  std::vector<SummaryRow> rows;
  for (const auto& f : csv::read_table(path, kSummaryHeader)) {
    if (f.size() != 12) throw IoError(path.string() + ": expected 12 columns");
    SummaryRow r;
    r.spec.algorithm = parse_algorithm(f[0]);
    r.spec.alpha = csv::parse_real(f[1]);
    r.spec.lambda = csv::parse_optional(f[2]);
    r.spec.eta = csv::parse_optional(f[3]);
    r.spec.beta = csv::parse_optional(f[4]);
    r.spec.zeta = csv::parse_optional(f[5]);
    r.spec.abtd = abtd;
    if (r.spec.algorithm == Algorithm::kTdrc) r.spec.tdrc_reg = 1.0;
    r.auc_mean = csv::parse_real(f[6]);
    r.auc_stderr = csv::parse_real(f[7]);
    r.final5_mean = csv::parse_real(f[8]);
    r.final5_stderr = csv::parse_real(f[9]);
    r.unstable = f[10] == "1";
    r.diverged_runs = static_cast<std::size_t>(csv::parse_real(f[11]));
    rows.push_back(r);
  }
  return rows;
}

/// Per-run curves, columns run,step,rve.
inline void write_raw(const std::filesystem::path& path, std::span<const RunResult> runs) {
  auto out = csv::open_out(path);
  out << kRawHeader << '\n';
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.rve.size(); ++i) {
      out << r.run_index << ',' << i << ',' << format_real(r.rve[i]) << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

/// Inverse of write_raw. The diverged flag is not stored and reads back false.
inline std::vector<RunResult> read_raw(const std::filesystem::path& path) {
  std::vector<RunResult> runs;
  for (const auto& f : csv::read_table(path, kRawHeader)) {
    if (f.size() != 3) throw IoError(path.string() + ": expected 3 columns");
    const auto run = static_cast<std::size_t>(csv::parse_real(f[0]));
    const auto step = static_cast<std::size_t>(csv::parse_real(f[1]));
    if (runs.empty() || runs.back().run_index != run) {
      runs.push_back(RunResult{{}, false, run});
    }
    if (runs.back().rve.size() != step) throw IoError(path.string() + ": steps out of order");
    runs.back().rve.push_back(csv::parse_real(f[2]));
  }
  return runs;
}

inline void write_feature_map_csv(const std::filesystem::path& path, const FeatureMap& fm) {
  auto out = csv::open_out(path);
  out << "state";
  for (Eigen::Index j = 0; j < fm.dim(); ++j) out << ",x" << j;
  out << '\n';
  for (Eigen::Index s = 0; s < fm.num_states(); ++s) {
    out << s + 1;
    for (Eigen::Index j = 0; j < fm.dim(); ++j) out << ',' << fm.matrix()(s, j);
    out << '\n';
  }
}

inline FeatureMap read_feature_map_csv(const std::filesystem::path& path) {
  auto in = csv::open_in(path);
  std::string line;
  std::getline(in, line);
  const auto header = csv::split(line);
  if (header.empty() || header[0] != "state") throw IoError(path.string() + ": not a feature map");
  const auto d = static_cast<Eigen::Index>(header.size() - 1);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (static_cast<Eigen::Index>(f.size()) != d + 1) throw IoError(path.string() + ": ragged row");
    std::vector<double> r;
    for (std::size_t j = 1; j < f.size(); ++j) r.push_back(csv::parse_real(f[j]));
    rows.push_back(std::move(r));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    for (Eigen::Index j = 0; j < d; ++j) m(static_cast<Eigen::Index>(s), j) = rows[s][static_cast<std::size_t>(j)];
  }
  const int ones = m.rows() > 0 ? static_cast<int>(m.row(0).sum()) : 0;
  return FeatureMap(std::move(m), ones);
}

inline void write_distribution_csv(const std::filesystem::path& path, const StateDistribution& mu) {
  auto out = csv::open_out(path);
  out << "state,mu\n";
  for (Eigen::Index s = 0; s < mu.weights.size(); ++s) out << s + 1 << ',' << format_real(mu.weights(s)) << '\n';
}

inline StateDistribution read_distribution_csv(const std::filesystem::path& path) {
  const auto rows = csv::read_table(path, "state,mu");
  StateDistribution mu{Vector(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (rows[s].size() != 2) throw IoError(path.string() + ": expected 2 columns");
    mu.weights(static_cast<Eigen::Index>(s)) = csv::parse_real(rows[s][1]);
  }
  return mu;
}

}  // namespace offpolicy

#endif  // OFFPOLICY_CSV_HPP_
