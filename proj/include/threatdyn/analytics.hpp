#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "threatdyn/errors.hpp"
#include "threatdyn/experiment.hpp"

namespace threatdyn {

// --- special functions -----------------------------------------------------

// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz)
// with 1e-12 relative tolerance.
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with df degrees of freedom.
double t_pvalue(double t, double df);

// Upper tail probability of the F distribution.
double f_pvalue(double f, double df_model, double df_residual);

// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1.
std::string significance_stars(double p);

// --- regression ------------------------------------------------------------

template <typename Scalar>
struct RegressionResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<std::string> names;
  Vector coefficients;
  Vector standard_errors;
  Vector t_stats;
  Vector p_values;
  std::vector<std::string> stars;
  Scalar r_squared = 0;
  Scalar adj_r_squared = 0;
  Scalar f_statistic = 0;
  Scalar f_pvalue = 1;
  Scalar residual_std_error = 0;
  std::int64_t n_obs = 0;
  std::int64_t df_model = 0;
  std::int64_t df_residual = 0;

  // Index of a named coefficient; SchemaError if absent.
  Eigen::Index index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<Eigen::Index>(i);
    }
    throw SchemaError("no coefficient named '" + std::string(name) + "'");
  }
  Scalar coefficient(std::string_view name) const {
    return coefficients(index_of(name));
  }
  Scalar p_value(std::string_view name) const { return p_values(index_of(name)); }
};

// Ordinary least squares. X must already contain the intercept column when
// one is wanted; names label the columns of X. Columns are equilibrated to
// unit norm before a column-pivoted QR, so the rank test is scale free.
template <typename DerivedX, typename DerivedY>
RegressionResult<typename DerivedX::Scalar> ols_fit(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
    const std::vector<std::string>& names) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) throw SchemaError("X and y have different row counts");
  if (static_cast<Eigen::Index>(names.size()) != k) {
    throw SchemaError("names do not match the columns of X");
  }
  if (k == 0) throw SchemaError("design has no columns");
  if (n <= k) {
    throw InsufficientDataError("need more observations (" + std::to_string(n) +
                                ") than coefficients (" + std::to_string(k) +
                                ")");
  }

  Vector scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (scale(j) == Scalar(0)) scale(j) = Scalar(1);
  }
  const Matrix Xs = X * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Matrix> qr(Xs);
  qr.setThreshold(Scalar(1e-10));
  if (qr.rank() < k) {
    std::vector<std::string> dependent;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < k; ++i) dependent.push_back(names[perm(i)]);
    std::string msg = "design matrix is rank deficient; collinear columns:";
    for (const auto& d : dependent) msg += " " + d;
    throw SingularDesignError(msg, dependent);
  }

  const Vector beta_s = qr.solve(y.derived().template cast<Scalar>());
  const Vector beta = beta_s.cwiseQuotient(scale);
  const Vector fitted = X * beta;
  const Vector resid = y - fitted;
  const Scalar ssr = resid.squaredNorm();
  const Scalar df_res = static_cast<Scalar>(n - k);
  const Scalar sigma2 = ssr / df_res;

  // (Xs^T Xs)^-1 = P R^-1 R^-T P^T
  const Matrix R = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Matrix Rinv = R.template triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Vector diag_perm = Rinv.rowwise().squaredNorm();
  Vector diag(k);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < k; ++i) diag(perm(i)) = diag_perm(i);

  RegressionResult<Scalar> r;
  r.names = names;
  r.coefficients = beta;
  r.standard_errors = (sigma2 * diag).cwiseSqrt().cwiseQuotient(scale);
  r.t_stats = beta.cwiseQuotient(r.standard_errors);
  r.p_values.resize(k);
  r.stars.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    r.p_values(i) = static_cast<Scalar>(
        t_pvalue(static_cast<double>(r.t_stats(i)), static_cast<double>(df_res)));
    r.stars[i] = significance_stars(static_cast<double>(r.p_values(i)));
  }

  // An intercept is present when some column is constant and nonzero.
  bool has_intercept = false;
  for (Eigen::Index j = 0; j < k && !has_intercept; ++j) {
    has_intercept = X(0, j) != Scalar(0) &&
                    (X.col(j).array() == X(0, j)).all();
  }
  const Scalar tss = has_intercept
                         ? (y.array() - y.mean()).matrix().squaredNorm()
                         : y.squaredNorm();
  const Eigen::Index df_model = has_intercept ? k - 1 : k;
  r.n_obs = n;
  r.df_model = df_model;
  r.df_residual = n - k;
  r.r_squared = tss > Scalar(0) ? Scalar(1) - ssr / tss : Scalar(1);
  if (r.r_squared < Scalar(0)) r.r_squared = Scalar(0);
  const Scalar df_tot = has_intercept ? Scalar(n - 1) : Scalar(n);
  r.adj_r_squared = Scalar(1) - (Scalar(1) - r.r_squared) * df_tot / df_res;
  r.residual_std_error = std::sqrt(sigma2);
  if (df_model > 0) {
    r.f_statistic = ((tss - ssr) / static_cast<Scalar>(df_model)) / sigma2;
    r.f_pvalue = static_cast<Scalar>(
        f_pvalue(static_cast<double>(r.f_statistic),
                 static_cast<double>(df_model), static_cast<double>(df_res)));
  }
  return r;
}

// --- tables ----------------------------------------------------------------

// Column-major numeric view of sweep records.
struct Table {
  std::vector<std::string> names;
  Eigen::MatrixXd data;  // rows x names.size()
  std::vector<std::int64_t> run_ids;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index column_index(std::string_view name) const;  // SchemaError
  Eigen::VectorXd column(std::string_view name) const;
};

Table make_table(const std::vector<RunRecord>& records);

enum class SubsetRule { lowest_quartile, highest_quartile, below_median, above_median };

struct SubsetFilter {
  std::string column;
  SubsetRule rule = SubsetRule::lowest_quartile;
};

// Quartile rules keep floor(n/4) rows, median rules floor(n/2). Ties are
// broken by ascending run_id. Rows keep their original order.
Table quartile_subset(const Table& table, const SubsetFilter& filter);

// OLS of `response` on `predictors` plus a trailing "Constant" column.
RegressionResult<double> regress(const Table& table, std::string_view response,
                                 const std::vector<std::string>& predictors);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd r;  // NaN where a column is constant
};

CorrelationMatrix pearson_matrix(const Eigen::MatrixXd& data,
                                 const std::vector<std::string>& labels);
CorrelationMatrix pearson_matrix(const Table& table,
                                 const std::vector<std::string>& columns);

struct Histogram {
  std::vector<double> edges;  // n_bins + 1
  std::vector<std::int64_t> counts;
};

Histogram histogram(const Eigen::VectorXd& values, int n_bins);

// Population moments: m3 / m2^1.5.
double skewness(const Eigen::VectorXd& values);

double median(Eigen::VectorXd values);

// Number of local maxima in the histogram after merging plateaus, ignoring
// bumps whose count is below min_fraction of the tallest bin.
int count_modes(const Histogram& h, double min_fraction = 0.05);

enum class Sign { positive, negative, any };

struct SignVerdict {
  std::string name;
  Sign expected = Sign::any;
  double coefficient = 0;
  double p_value = 1;
  bool pass = false;
};

struct SignReport {
  std::vector<SignVerdict> verdicts;
  bool pass = false;
};

SignReport sign_check(const RegressionResult<double>& reg,
                      const std::vector<std::pair<std::string, Sign>>& expected,
                      double alpha);

// --- output ----------------------------------------------------------------

using NamedModel = std::pair<std::string, RegressionResult<double>>;

// Aligned plain-text regression table: coefficient with stars, SE in
// parentheses, one column per model, followed by fit statistics.
std::string format_regression_table(const std::vector<NamedModel>& models,
                                    std::string_view response);

// Long format: model,term,estimate,std_error,t_stat,p_value,stars followed by
// fit rows (n_obs, r_squared, adj_r_squared, residual_std_error, f_statistic,
// f_pvalue) with the value in the estimate column.
void write_regression_csv(const std::vector<NamedModel>& models,
                          std::ostream& out);

std::string format_correlation_table(const CorrelationMatrix& m);
void write_correlation_csv(const CorrelationMatrix& m, std::ostream& out);

// column,bin,lower,upper,count
void write_histogram_csv(
    const std::vector<std::pair<std::string, Histogram>>& histograms,
    std::ostream& out);

}  // namespace threatdyn
