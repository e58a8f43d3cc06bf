#ifndef OFFPOLICY_REPORT_HPP_
#define OFFPOLICY_REPORT_HPP_

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "offpolicy/csv.hpp"
#include "offpolicy/harness.hpp"

namespace offpolicy {

enum class ReportKind { kSensitivity, kLearningCurve, kWaterfall, kEmphaticBeta, kGradientEta };

inline ReportKind parse_report_kind(const std::string& s) {
  if (s == "sensitivity") return ReportKind::kSensitivity;
  if (s == "learning-curve") return ReportKind::kLearningCurve;
  if (s == "waterfall") return ReportKind::kWaterfall;
  if (s == "emphatic-beta") return ReportKind::kEmphaticBeta;
  if (s == "gradient-eta") return ReportKind::kGradientEta;
  throw ConfigError("unknown report kind '" + s + "'");
}

/// Unstable instances are drawn at this error in waterfall plots.
inline constexpr double kWaterfallCeiling = 0.8;

inline constexpr const char* kSensitivityHeader = "algorithm,lambda,eta,beta,zeta,alpha,auc_mean,auc_stderr";
inline constexpr const char* kLearningCurveHeader = "algorithm,lambda,eta,beta,zeta,alpha,step,mean,stderr";
inline constexpr const char* kWaterfallHeader =
    "algorithm,alpha,lambda,eta,beta,zeta,auc_mean,unstable,display_error";

namespace detail {

// Sort key: algorithm, lambda|zeta, eta|beta, alpha.
inline auto report_key(const InstanceSpec& s) {
  const double extra = s.beta ? *s.beta : (s.algorithm == Algorithm::kTdrc ? 0.0 : s.eta.value_or(0.0));
  return std::make_tuple(static_cast<int>(s.algorithm), trace_parameter(s), extra, s.alpha);
}

inline void sort_rows(std::vector<SummaryRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) { return report_key(a.spec) < report_key(b.spec); });
}

inline void write_params(std::ostream& out, const InstanceSpec& s) {
  out << algorithm_name(s.algorithm) << ',' << csv::optional_field(s.lambda) << ',' << csv::optional_field(s.eta)
      << ',' << csv::optional_field(s.beta) << ',' << csv::optional_field(s.zeta) << ',' << format_real(s.alpha);
}

inline void write_sensitivity_rows(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSensitivityHeader << '\n';
  for (const auto& r : rows) {
    write_params(out, r.spec);
    out << ',' << format_real(r.auc_mean) << ',' << format_real(r.auc_stderr) << '\n';
  }
}

/// Keeps, per (algorithm, lambda|zeta), only the eta/beta whose best alpha has the lowest AUC.
inline std::vector<SummaryRow> best_secondary_per_trace(std::vector<SummaryRow> rows) {
  sort_rows(rows);
  using Group = std::pair<int, double>;
  std::map<Group, std::pair<double, double>> best;  // group -> (auc, extra)
  for (const auto& r : rows) {
    const auto [alg, trace, extra, alpha] = report_key(r.spec);
    const Group g{alg, trace};
    auto it = best.find(g);
    if (it == best.end() || r.auc_mean < it->second.first ||
        (r.auc_mean == it->second.first && extra < it->second.second)) {
      best[g] = {r.auc_mean, extra};
    }
  }
  std::vector<SummaryRow> out;
  for (const auto& r : rows) {
    const auto [alg, trace, extra, alpha] = report_key(r.spec);
    if (best.at({alg, trace}).second == extra) out.push_back(r);
  }
  return out;
}

inline std::vector<SummaryRow> load_summary(const std::filesystem::path& in_dir) {
  const auto path = in_dir / "summary.csv";
  if (!std::filesystem::exists(path)) throw IoError("missing " + path.string());
  return read_summary(path);
}

}  // namespace detail

/// One row per alpha for each (algorithm, lambda|zeta), at the best eta/beta for that trace value.
inline void report_sensitivity(const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  const auto rows = detail::best_secondary_per_trace(detail::load_summary(in_dir));
  auto out = csv::open_out(out_file);
  detail::write_sensitivity_rows(out, rows);
}

/// Every (lambda, beta, alpha) of ETD(lambda, beta).
inline void report_emphatic_beta(const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  auto rows = detail::load_summary(in_dir);
  std::erase_if(rows, [](const SummaryRow& r) { return r.spec.algorithm != Algorithm::kEtdBeta; });
  if (rows.empty()) throw IoError(in_dir.string() + ": summary has no etd_beta rows");
  detail::sort_rows(rows);
  auto out = csv::open_out(out_file);
  detail::write_sensitivity_rows(out, rows);
}

/// Every (lambda, eta, alpha) of the algorithms with a secondary step size.
inline void report_gradient_eta(const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  auto rows = detail::load_summary(in_dir);
  std::erase_if(rows, [](const SummaryRow& r) { return !uses_eta(r.spec.algorithm); });
  if (rows.empty()) throw IoError(in_dir.string() + ": summary has no rows with an eta parameter");
  detail::sort_rows(rows);
  auto out = csv::open_out(out_file);
  detail::write_sensitivity_rows(out, rows);
}

inline void report_waterfall(const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  auto rows = detail::load_summary(in_dir);
  detail::sort_rows(rows);
  std::map<int, std::pair<std::size_t, std::size_t>> counts;  // algorithm -> (unstable, total)
  for (const auto& r : rows) {
    auto& c = counts[static_cast<int>(r.spec.algorithm)];
    c.first += r.unstable ? 1 : 0;
    ++c.second;
  }
  auto out = csv::open_out(out_file);
  for (const auto& [alg, c] : counts) {
    const double pct = 100.0 * static_cast<double>(c.first) / static_cast<double>(c.second);
    out << "# unstable_pct," << algorithm_name(static_cast<Algorithm>(alg)) << ',' << format_real(pct) << '\n';
  }
  out << kWaterfallHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.spec;
    out << algorithm_name(s.algorithm) << ',' << format_real(s.alpha) << ',' << csv::optional_field(s.lambda) << ','
        << csv::optional_field(s.eta) << ',' << csv::optional_field(s.beta) << ',' << csv::optional_field(s.zeta)
        << ',' << format_real(r.auc_mean) << ',' << (r.unstable ? 1 : 0) << ','
        << format_real(r.unstable ? kWaterfallCeiling : r.auc_mean) << '\n';
  }
}

/// Mean and standard error per step for every re-run best instance listed in reruns/index.csv.
inline void report_learning_curve(const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  const auto dir = in_dir / "reruns";
  const auto index_path = dir / "index.csv";
  if (!std::filesystem::exists(index_path)) throw IoError("missing " + index_path.string());
  const auto index = csv::read_table(index_path, kRerunIndexHeader);
  auto out = csv::open_out(out_file);
  out << kLearningCurveHeader << '\n';
  for (const auto& f : index) {
    if (f.size() != 13) throw IoError(index_path.string() + ": expected 13 columns");
    InstanceSpec s;
    s.algorithm = parse_algorithm(f[0]);
    s.alpha = csv::parse_real(f[1]);
    s.lambda = csv::parse_optional(f[2]);
    s.eta = csv::parse_optional(f[3]);
    s.beta = csv::parse_optional(f[4]);
    s.zeta = csv::parse_optional(f[5]);
    const auto runs = read_raw(dir / f[12]);
    if (runs.empty()) throw IoError((dir / f[12]).string() + ": no runs");
    const auto agg = aggregate(runs);
    for (std::size_t i = 0; i < agg.mean.size(); ++i) {
      detail::write_params(out, s);
      out << ',' << i << ',' << format_real(agg.mean[i]) << ',' << format_real(agg.stderr_curve[i]) << '\n';
    }
  }
}

inline void write_report(ReportKind kind, const std::filesystem::path& in_dir, const std::filesystem::path& out_file) {
  if (!std::filesystem::is_directory(in_dir)) throw IoError("input directory " + in_dir.string() + " does not exist");
  switch (kind) {
    case ReportKind::kSensitivity: return report_sensitivity(in_dir, out_file);
    case ReportKind::kLearningCurve: return report_learning_curve(in_dir, out_file);
    case ReportKind::kWaterfall: return report_waterfall(in_dir, out_file);
    case ReportKind::kEmphaticBeta: return report_emphatic_beta(in_dir, out_file);
    case ReportKind::kGradientEta: return report_gradient_eta(in_dir, out_file);
  }
}

}  // namespace offpolicy

#endif  // OFFPOLICY_REPORT_HPP_
