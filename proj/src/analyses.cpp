#include "threatdyn/analyses.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace threatdyn {

const std::vector<std::string>& engagement_predictors() {
  static const std::vector<std::string> v = {"engagement_5", "engagement_2",
                                             "engagement_1", "engagement_3",
                                             "engagement_4"};
  return v;
}

const std::vector<std::string>& sentiment_predictors() {
  static const std::vector<std::string> v = {
      "tvMediaUse",
      "ThreatPctOfMedia",
      "socialMediaUse",
      "Rel_frequency",
      "Initial_concern_5",
      "Initial_concern_2",
      "Initial_concern_1",
      "Initial_concern_4",
      "Hazard_intensity_contagion",
      "Hazard_intensity_financial",
      "Hazard_intensity_natural",
      "Hazard_intensity_predation",
      "Hazard_intensity_social",
      "habituationRate",
      "energyDecay",
      "Big_5_openness",
      "Big_5_conscientiousness",
      "Big_5_agreeableness",
      "hazard_event_count_contagion",
      "hazard_event_count_financial",
      "hazard_event_count_natural",
      "hazard_event_count_predation",
      "hazard_event_count_social",
      "nationalism_level",
  };
  return v;
}

const std::vector<std::string>& nationalism_predictors() {
  static const std::vector<std::string> v(sentiment_predictors().begin(),
                                          sentiment_predictors().end() - 1);
  return v;
}

std::vector<std::string> correlation_columns() {
  const auto& all = record_columns();
  return {all.begin() + 1, all.end()};
}

const std::vector<std::string>& distribution_columns() {
  static const std::vector<std::string> v = {
      "anthropomorphic_promiscuity", "engagement_1", "engagement_2",
      "engagement_3", "engagement_4", "engagement_5"};
  return v;
}

RegressionResult<double> full_regression(const Table& t) {
  return regress(t, "anti_immigrant_sentiment", engagement_predictors());
}

RegressionResult<double> sentiment_regression(const Table& t) {
  return regress(t, "anti_immigrant_sentiment", sentiment_predictors());
}

RegressionResult<double> nationalism_regression(const Table& t) {
  return regress(t, "nationalism_level", nationalism_predictors());
}

std::vector<NamedModel> subset_models(const Table& t, const std::string& column) {
  std::vector<NamedModel> models;
  models.emplace_back("(1) full sample", sentiment_regression(t));
  models.emplace_back("(2) low " + column,
                      sentiment_regression(quartile_subset(t, {column, SubsetRule::lowest_quartile})));
  models.emplace_back("(3) high " + column,
                      sentiment_regression(quartile_subset(t, {column, SubsetRule::highest_quartile})));
  return models;
}

std::vector<DistributionSummary> distributions(const Table& t) {
  std::vector<DistributionSummary> out;
  for (const auto& c : distribution_columns()) {
    const Eigen::VectorXd v = t.column(c);
    DistributionSummary s;
    s.column = c;
    s.median = median(v);
    s.skewness = skewness(v);
    s.hist = histogram(v, kHistogramBins);
    s.modes = count_modes(s.hist);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct SubsetAnalysis {
  const char* name;
  const char* column;
  SubsetRule rule;
};

constexpr SubsetAnalysis kSubsetAnalyses[] = {
    {"low-nationalism", "nationalism_level", SubsetRule::lowest_quartile},
    {"high-nationalism", "nationalism_level", SubsetRule::highest_quartile},
    {"low-prudery", "sociographic_prudery", SubsetRule::lowest_quartile},
    {"high-prudery", "sociographic_prudery", SubsetRule::highest_quartile},
    {"low-ap", "anthropomorphic_promiscuity", SubsetRule::lowest_quartile},
    {"high-ap", "anthropomorphic_promiscuity", SubsetRule::highest_quartile},
};

std::string distribution_text(const std::vector<DistributionSummary>& ds) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %12s %10s %6s\n", "column", "median",
                "skewness", "modes");
  out << buf;
  for (const auto& d : ds) {
    std::snprintf(buf, sizeof buf, "%-28s %12.5g %10.4f %6d\n", d.column.c_str(),
                  d.median, d.skewness, d.modes);
    out << buf;
  }
  for (const auto& d : ds) {
    out << '\n' << d.column << " (" << kHistogramBins << " bins)\n";
    for (std::size_t b = 0; b < d.hist.counts.size(); ++b) {
      std::snprintf(buf, sizeof buf, "  [%11.5g, %11.5g) %7lld\n", d.hist.edges[b],
                    d.hist.edges[b + 1], static_cast<long long>(d.hist.counts[b]));
      out << buf;
    }
  }
  return out.str();
}

void write_distribution_csv(const std::vector<DistributionSummary>& ds, std::ostream& out) {
  out << "column,median,skewness,modes\n";
  char buf[128];
  for (const auto& d : ds) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d\n", d.column.c_str(), d.median,
                  d.skewness, d.modes);
    out << buf;
  }
}

class ReportWriter {
 public:
  explicit ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  template <typename Fn>
  void file(const std::string& name, Fn&& fill) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    fill(out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
    written_.push_back(path);
  }

  std::vector<std::filesystem::path> written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

SweepResult subset_records(const SweepResult& sweep, const Table& subset) {
  std::map<std::int64_t, std::size_t> by_id;
  for (std::size_t i = 0; i < sweep.records.size(); ++i) by_id[sweep.records[i].run_id] = i;
  SweepResult out;
  out.meta = sweep.meta;
  out.meta.n = static_cast<std::int64_t>(subset.run_ids.size());
  for (auto id : subset.run_ids) out.records.push_back(sweep.records[by_id.at(id)]);
  return out;
}

}  // namespace

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> names = {"full-regression", "full-sample"};
    for (const auto& s : kSubsetAnalyses) names.emplace_back(s.name);
    names.emplace_back("nationalism");
    names.emplace_back("correlations");
    names.emplace_back("histograms");
    return names;
  }();
  return v;
}

std::string run_analysis(const Table& t, std::string_view name) {
  if (name == "full-regression") {
    return format_regression_table({{"full sample", full_regression(t)}},
                                   "anti_immigrant_sentiment");
  }
  if (name == "full-sample") {
    return format_regression_table({{"full sample", sentiment_regression(t)}},
                                   "anti_immigrant_sentiment");
  }
  for (const auto& s : kSubsetAnalyses) {
    if (name == s.name) {
      const auto sub = quartile_subset(t, {s.column, s.rule});
      return format_regression_table({{s.name, sentiment_regression(sub)}},
                                     "anti_immigrant_sentiment");
    }
  }
  if (name == "nationalism") {
    return format_regression_table({{"full sample", nationalism_regression(t)}},
                                   "nationalism_level");
  }
  if (name == "correlations") {
    return format_correlation_table(pearson_matrix(t, correlation_columns()));
  }
  if (name == "histograms") return distribution_text(distributions(t));
  std::string msg = "unknown analysis '" + std::string(name) + "'; expected one of:";
  for (const auto& n : analysis_names()) msg += " " + n;
  throw SchemaError(msg);
}

std::vector<std::filesystem::path> write_report(const SweepResult& sweep,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const Table t = make_table(sweep.records);
  ReportWriter w(dir);

  auto regression_pair = [&](const std::string& stem, const std::vector<NamedModel>& models,
                             const char* response) {
    w.file(stem + ".txt", [&](std::ostream& o) { o << format_regression_table(models, response); });
    w.file(stem + ".csv", [&](std::ostream& o) { write_regression_csv(models, o); });
  };

  regression_pair("full_regression", {{"full sample", full_regression(t)}},
                  "anti_immigrant_sentiment");
  regression_pair("nationalism_subsets", subset_models(t, "nationalism_level"),
                  "anti_immigrant_sentiment");
  regression_pair("prudery_subsets", subset_models(t, "sociographic_prudery"),
                  "anti_immigrant_sentiment");
  regression_pair("ap_subsets", subset_models(t, "anthropomorphic_promiscuity"),
                  "anti_immigrant_sentiment");
  regression_pair("nationalism", {{"full sample", nationalism_regression(t)}},
                  "nationalism_level");

  const auto corr = pearson_matrix(t, correlation_columns());
  w.file("correlations.txt", [&](std::ostream& o) { o << format_correlation_table(corr); });
  w.file("correlations.csv", [&](std::ostream& o) { write_correlation_csv(corr, o); });

  const auto ds = distributions(t);
  w.file("distributions.txt", [&](std::ostream& o) { o << distribution_text(ds); });
  w.file("distributions.csv", [&](std::ostream& o) { write_distribution_csv(ds, o); });
  std::vector<std::pair<std::string, Histogram>> hists;
  for (const auto& d : ds) hists.emplace_back(d.column, d.hist);
  w.file("histograms.csv", [&](std::ostream& o) { write_histogram_csv(hists, o); });

  // Subsets in the sweep schema, for the quadrant scatters.
  const std::pair<const char*, SubsetFilter> subsets[] = {
      {"subset_low_nationalism.csv", {"nationalism_level", SubsetRule::lowest_quartile}},
      {"subset_high_nationalism.csv", {"nationalism_level", SubsetRule::highest_quartile}},
      {"subset_low_social_media.csv", {"socialMediaUse", SubsetRule::lowest_quartile}},
      {"subset_high_social_media.csv", {"socialMediaUse", SubsetRule::highest_quartile}},
  };
  for (const auto& [name, filter] : subsets) {
    const auto part = subset_records(sweep, quartile_subset(t, filter));
    w.file(name, [&](std::ostream& o) { write_records_csv(part, o); });
  }
  return w.written();
}

}  // namespace threatdyn
