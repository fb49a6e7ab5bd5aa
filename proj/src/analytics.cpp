#include "threatdyn/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace threatdyn {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 100000;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kBetaTolerance) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

std::string fmt(double v, const char* spec = "%.4g") {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

std::string csv_real(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_pvalue(double t, double df) {
  if (!(df >= 1.0)) throw DomainError("t_pvalue needs df >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double f_pvalue(double f, double df_model, double df_residual) {
  if (!(df_model > 0.0) || !(df_residual > 0.0)) {
    throw DomainError("f_pvalue needs positive degrees of freedom");
  }
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = df_residual / (df_residual + df_model * f);
  return std::clamp(incomplete_beta(0.5 * df_residual, 0.5 * df_model, x), 0.0, 1.0);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

// --- tables ----------------------------------------------------------------

Eigen::Index Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw SchemaError("no column named '" + std::string(name) + "'");
}

Eigen::VectorXd Table::column(std::string_view name) const {
  return data.col(column_index(name));
}

Table make_table(const std::vector<RunRecord>& records) {
  Table t;
  t.names = record_columns();
  t.data.resize(static_cast<Eigen::Index>(records.size()),
                static_cast<Eigen::Index>(t.names.size()));
  t.run_ids.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto values = record_values(records[i]);
    for (std::size_t j = 0; j < values.size(); ++j) {
      t.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[j];
    }
    t.run_ids.push_back(records[i].run_id);
  }
  return t;
}

Table quartile_subset(const Table& table, const SubsetFilter& filter) {
  const Eigen::Index col = table.column_index(filter.column);
  const Eigen::Index n = table.rows();
  if (n == 0) throw InsufficientDataError("cannot subset an empty table");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const bool descending = filter.rule == SubsetRule::highest_quartile ||
                          filter.rule == SubsetRule::above_median;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double va = table.data(a, col);
    const double vb = table.data(b, col);
    if (va != vb) return descending ? va > vb : va < vb;
    return table.run_ids[a] < table.run_ids[b];
  });
  const bool quartile = filter.rule == SubsetRule::lowest_quartile ||
                        filter.rule == SubsetRule::highest_quartile;
  const std::size_t keep = static_cast<std::size_t>(quartile ? n / 4 : n / 2);
  order.resize(keep);
  std::sort(order.begin(), order.end());

  Table out;
  out.names = table.names;
  out.data.resize(static_cast<Eigen::Index>(keep), table.data.cols());
  out.run_ids.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.data.row(static_cast<Eigen::Index>(i)) = table.data.row(order[i]);
    out.run_ids.push_back(table.run_ids[order[i]]);
  }
  return out;
}

RegressionResult<double> regress(const Table& table, std::string_view response,
                                 const std::vector<std::string>& predictors) {
  const Eigen::Index n = table.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(predictors.size()) + 1;
  Eigen::MatrixXd X(n, k);
  std::vector<std::string> names = predictors;
  for (Eigen::Index j = 0; j + 1 < k; ++j) {
    X.col(j) = table.data.col(table.column_index(predictors[j]));
  }
  X.col(k - 1).setOnes();
  names.emplace_back("Constant");
  return ols_fit(X, table.column(response), names);
}

// --- correlation, distributions --------------------------------------------

CorrelationMatrix pearson_matrix(const Eigen::MatrixXd& data,
                                 const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != data.cols()) {
    throw SchemaError("labels do not match the data columns");
  }
  if (data.rows() < 2) throw InsufficientDataError("correlation needs at least 2 rows");
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const Eigen::VectorXd norms = centered.colwise().norm().transpose();
  const Eigen::Index k = data.cols();

  CorrelationMatrix m;
  m.labels = labels;
  m.r.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      double r = std::numeric_limits<double>::quiet_NaN();
      if (norms(i) > 0.0 && norms(j) > 0.0) {
        r = i == j ? 1.0
                   : std::clamp(centered.col(i).dot(centered.col(j)) /
                                    (norms(i) * norms(j)),
                                -1.0, 1.0);
      }
      m.r(i, j) = r;
      m.r(j, i) = r;
    }
  }
  return m;
}

CorrelationMatrix pearson_matrix(const Table& table,
                                 const std::vector<std::string>& columns) {
  Eigen::MatrixXd data(table.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    data.col(static_cast<Eigen::Index>(j)) = table.column(columns[j]);
  }
  return pearson_matrix(data, columns);
}

Histogram histogram(const Eigen::VectorXd& values, int n_bins) {
  if (n_bins < 1) throw DomainError("histogram needs at least one bin");
  if (values.size() == 0) throw InsufficientDataError("histogram of an empty column");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = (hi - lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.edges[i] = lo + width * i;
  h.edges.back() = hi;
  for (double v : values) {
    int bin = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
    bin = std::clamp(bin, 0, n_bins - 1);
    ++h.counts[bin];
  }
  return h;
}

double skewness(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw InsufficientDataError("skewness of an empty column");
  const Eigen::ArrayXd c = values.array() - values.mean();
  const double m2 = c.square().mean();
  const double m3 = c.cube().mean();
  if (m2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return m3 / std::pow(m2, 1.5);
}

double median(Eigen::VectorXd values) {
  if (values.size() == 0) throw InsufficientDataError("median of an empty column");
  std::sort(values.begin(), values.end());
  const Eigen::Index n = values.size();
  return n % 2 ? values(n / 2) : 0.5 * (values(n / 2 - 1) + values(n / 2));
}

int count_modes(const Histogram& h, double min_fraction) {
  // Collapse plateaus, then keep peaks whose topographic prominence is at
  // least min_fraction of the tallest bin.
  std::vector<double> c;
  for (auto v : h.counts) {
    if (c.empty() || c.back() != static_cast<double>(v)) c.push_back(static_cast<double>(v));
  }
  const std::size_t n = c.size();
  if (n == 0) return 0;
  const double top = *std::max_element(c.begin(), c.end());
  if (top <= 0.0) return 0;
  int modes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || c[i] > c[i - 1];
    const bool right = i + 1 == n || c[i] > c[i + 1];
    if (!(left && right)) continue;
    double left_min = c[i];
    bool left_higher = false;
    for (std::size_t j = i; j-- > 0;) {
      if (c[j] > c[i]) { left_higher = true; break; }
      left_min = std::min(left_min, c[j]);
    }
    double right_min = c[i];
    bool right_higher = false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (c[j] > c[i]) { right_higher = true; break; }
      right_min = std::min(right_min, c[j]);
    }
    double base = 0.0;
    if (left_higher && right_higher) base = std::max(left_min, right_min);
    else if (left_higher) base = left_min;
    else if (right_higher) base = right_min;
    if (c[i] - base >= min_fraction * top) ++modes;
  }
  return modes;
}

SignReport sign_check(const RegressionResult<double>& reg,
                      const std::vector<std::pair<std::string, Sign>>& expected,
                      double alpha) {
  SignReport report;
  report.pass = true;
  for (const auto& [name, sign] : expected) {
    const Eigen::Index i = reg.index_of(name);
    SignVerdict v;
    v.name = name;
    v.expected = sign;
    v.coefficient = reg.coefficients(i);
    v.p_value = reg.p_values(i);
    const bool sign_ok = sign == Sign::any ||
                         (sign == Sign::positive && v.coefficient > 0.0) ||
                         (sign == Sign::negative && v.coefficient < 0.0);
    v.pass = sign_ok && v.p_value < alpha;
    report.pass = report.pass && v.pass;
    report.verdicts.push_back(v);
  }
  return report;
}

// --- output ----------------------------------------------------------------

std::string format_regression_table(const std::vector<NamedModel>& models,
                                    std::string_view response) {
  std::vector<std::string> terms;
  for (const auto& [label, m] : models) {
    for (const auto& name : m.names) {
      if (std::find(terms.begin(), terms.end(), name) == terms.end()) {
        terms.push_back(name);
      }
    }
  }
  // Constant goes last.
  auto c = std::find(terms.begin(), terms.end(), "Constant");
  if (c != terms.end()) std::rotate(c, c + 1, terms.end());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Dependent variable: " + std::string(response)};
  for (const auto& [label, m] : models) header.push_back(label);
  rows.push_back(header);
  for (const auto& term : terms) {
    std::vector<std::string> row{term};
    for (const auto& [label, m] : models) {
      const auto it = std::find(m.names.begin(), m.names.end(), term);
      if (it == m.names.end()) {
        row.emplace_back();
        continue;
      }
      const auto i = it - m.names.begin();
      row.push_back(fmt(m.coefficients(i)) + m.stars[i] + " (" +
                    fmt(m.standard_errors(i)) + ")");
    }
    rows.push_back(row);
  }
  auto fit_row = [&](const std::string& name, auto cell) {
    std::vector<std::string> row{name};
    for (const auto& [label, m] : models) row.push_back(cell(m));
    rows.push_back(row);
  };
  using R = RegressionResult<double>;
  fit_row("Observations", [](const R& m) { return std::to_string(m.n_obs); });
  fit_row("R2", [](const R& m) { return fmt(m.r_squared, "%.3f"); });
  fit_row("Adjusted R2", [](const R& m) { return fmt(m.adj_r_squared, "%.3f"); });
  fit_row("Residual Std. Error", [](const R& m) {
    return fmt(m.residual_std_error) + " (df = " + std::to_string(m.df_residual) + ")";
  });
  fit_row("F Statistic", [](const R& m) {
    return fmt(m.f_statistic) + significance_stars(m.f_pvalue) + " (df = " +
           std::to_string(m.df_model) + "; " + std::to_string(m.df_residual) + ")";
  });

  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  const std::string rule(total, '-');

  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 || r == 1 || r == rows.size() - 5) out << rule << '\n';
    for (std::size_t j = 0; j < rows[r].size(); ++j) {
      out << pad(rows[r][j], width[j], j == 0) << "  ";
    }
    out << '\n';
  }
  out << rule << '\n' << "Note: *p<0.1; **p<0.05; ***p<0.01\n";
  return out.str();
}

void write_regression_csv(const std::vector<NamedModel>& models, std::ostream& out) {
  out << "model,term,estimate,std_error,t_stat,p_value,stars\n";
  for (const auto& [label, m] : models) {
    for (std::size_t i = 0; i < m.names.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      out << label << ',' << m.names[i] << ',' << csv_real(m.coefficients(k)) << ','
          << csv_real(m.standard_errors(k)) << ',' << csv_real(m.t_stats(k)) << ','
          << csv_real(m.p_values(k)) << ',' << m.stars[i] << '\n';
    }
    auto fit = [&](const char* name, double v) {
      out << label << ',' << name << ',' << csv_real(v) << ",,,,\n";
    };
    fit("n_obs", static_cast<double>(m.n_obs));
    fit("r_squared", m.r_squared);
    fit("adj_r_squared", m.adj_r_squared);
    fit("residual_std_error", m.residual_std_error);
    fit("f_statistic", m.f_statistic);
    fit("f_pvalue", m.f_pvalue);
  }
}

std::string format_correlation_table(const CorrelationMatrix& m) {
  std::size_t label_width = 0;
  for (const auto& l : m.labels) label_width = std::max(label_width, l.size());
  std::ostringstream out;
  out << pad("", label_width, true);
  for (std::size_t j = 0; j < m.labels.size(); ++j) out << ' ' << pad(std::to_string(j + 1), 6, false);
  out << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << pad(std::to_string(i + 1) + " " + m.labels[i], label_width + 3, true);
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      out << ' '
          << pad(fmt(m.r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), "%.2f"),
                 6, false);
    }
    out << '\n';
  }
  return out.str();
}

void write_correlation_csv(const CorrelationMatrix& m, std::ostream& out) {
  out << "variable";
  for (const auto& l : m.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << m.labels[i];
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      out << ',' << csv_real(m.r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

void write_histogram_csv(
    const std::vector<std::pair<std::string, Histogram>>& histograms,
    std::ostream& out) {
  out << "column,bin,lower,upper,count\n";
  for (const auto& [name, h] : histograms) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << name << ',' << b << ',' << csv_real(h.edges[b]) << ','
          << csv_real(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
  }
}

}  // namespace threatdyn
