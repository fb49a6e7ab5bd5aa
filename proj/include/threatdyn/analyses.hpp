#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "threatdyn/analytics.hpp"
#include "threatdyn/experiment.hpp"

namespace threatdyn {

// Engagements in the order social, financial, contagion, natural, predation.
const std::vector<std::string>& engagement_predictors();

// The 24 predictors of the anti-immigrant-sentiment table, ending with
// nationalism_level.
const std::vector<std::string>& sentiment_predictors();

// sentiment_predictors() without nationalism_level.
const std::vector<std::string>& nationalism_predictors();

// Columns shown in the correlation matrix: everything except run_id.
std::vector<std::string> correlation_columns();

// Columns summarised by histograms.
const std::vector<std::string>& distribution_columns();

inline constexpr int kHistogramBins = 50;

RegressionResult<double> full_regression(const Table& t);
RegressionResult<double> sentiment_regression(const Table& t);
RegressionResult<double> nationalism_regression(const Table& t);

// Sentiment regressions on the full sample and the lowest / highest quartile
// of `column`.
std::vector<NamedModel> subset_models(const Table& t, const std::string& column);

struct DistributionSummary {
  std::string column;
  double median = 0;
  double skewness = 0;
  int modes = 0;
  Histogram hist;
};

std::vector<DistributionSummary> distributions(const Table& t);

// Analysis names accepted by run_analysis.
const std::vector<std::string>& analysis_names();

// Plain-text rendering of one named analysis; SchemaError on unknown names.
std::string run_analysis(const Table& t, std::string_view name);

// Writes every table (text and CSV) plus figure-input CSVs into dir.
// Returns the files written.
std::vector<std::filesystem::path> write_report(const SweepResult& sweep,
                                                const std::filesystem::path& dir);

}  // namespace threatdyn
