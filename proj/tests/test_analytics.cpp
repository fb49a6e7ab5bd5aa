#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "threatdyn/analyses.hpp"
#include "threatdyn/analytics.hpp"
#include "threatdyn/errors.hpp"

using namespace threatdyn;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = z(rng);
  return m;
}

std::vector<std::string> labels(Eigen::Index k) {
  std::vector<std::string> v;
  for (Eigen::Index j = 0; j < k; ++j) v.push_back("x" + std::to_string(j));
  return v;
}

Table table_of(const std::vector<double>& v) {
  Table t;
  t.names = {"v", "w"};
  t.data.resize(static_cast<Eigen::Index>(v.size()), 2);
  for (std::size_t i = 0; i < v.size(); ++i) {
    t.data(static_cast<Eigen::Index>(i), 0) = v[i];
    t.data(static_cast<Eigen::Index>(i), 1) = static_cast<double>(i);
    t.run_ids.push_back(static_cast<std::int64_t>(i));
  }
  return t;
}

}  // namespace

TEST_CASE("ols: three-point hand case") {
  Eigen::MatrixXd X(3, 2);
  X << 0, 1, 1, 1, 2, 1;
  Eigen::VectorXd y(3);
  y << 0, 2, 2;
  const auto r = ols_fit(X, y, {"x", "Constant"});
  CHECK(r.coefficient("x") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.coefficient("Constant") == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(r.standard_errors(0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.standard_errors(1) == doctest::Approx(std::sqrt(5.0) / 3).epsilon(1e-12));
  CHECK(r.t_stats(0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  // One residual degree of freedom: p = 1 - (2/pi) atan|t|.
  CHECK(r.p_value("x") == doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(r.p_value("Constant") ==
        doctest::Approx(1.0 - 2.0 / std::numbers::pi * std::atan(1.0 / std::sqrt(5.0))).epsilon(1e-10));
  CHECK(r.r_squared == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.adj_r_squared == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.f_statistic == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.f_pvalue == doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(r.residual_std_error == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-12));
  CHECK(r.n_obs == 3);
  CHECK(r.df_model == 1);
  CHECK(r.df_residual == 1);
  CHECK(r.stars[0].empty());
  CHECK_THROWS_AS(r.coefficient("z"), SchemaError);
}

TEST_CASE("ols: exact fit and scalar type") {
  Eigen::MatrixXf X(4, 2);
  X << 1, 1, 2, 1, 3, 1, 5, 1;
  Eigen::VectorXf y = 2.0f * X.col(0) + Eigen::VectorXf::Constant(4, 3.0f);
  const auto r = ols_fit(X, y, {"x", "c"});
  static_assert(std::is_same_v<decltype(r.r_squared), float>);
  CHECK(r.coefficients(0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(r.coefficients(1) == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("ols: error cases") {
  Eigen::MatrixXd X(5, 3);
  X << 1, 2, 1, 2, 4, 1, 3, 6, 1, 4, 8, 1, 5, 10.5, 1;
  X(4, 1) = 10.0;  // second column is exactly twice the first
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(5, 0, 1);
  try {
    ols_fit(X, y, {"a", "b", "c"});
    FAIL("expected a singular design");
  } catch (const SingularDesignError& e) {
    REQUIRE(e.columns().size() == 1);
    CHECK((e.columns()[0] == "a" || e.columns()[0] == "b"));
  }
  CHECK_THROWS_AS(ols_fit(X.topRows(3), y.head(3), {"a", "b", "c"}), InsufficientDataError);
  CHECK_THROWS_AS(ols_fit(X, y.head(4), {"a", "b", "c"}), SchemaError);
  CHECK_THROWS_AS(ols_fit(X, y, {"a", "b"}), SchemaError);
}

TEST_CASE("ols: agrees with the normal equations") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 30 + trial, k = 1 + trial % 8;
    Eigen::MatrixXd X = random_matrix(rng, n, k);
    X.col(k - 1).setOnes();
    const Eigen::VectorXd y = random_matrix(rng, n, 1);
    const auto r = ols_fit(X, y, labels(k));

    const Eigen::MatrixXd xtx = X.transpose() * X;
    const Eigen::VectorXd beta = xtx.fullPivLu().solve(X.transpose() * y);
    const Eigen::VectorXd resid = y - X * beta;
    const double sigma2 = resid.squaredNorm() / static_cast<double>(n - k);
    const Eigen::VectorXd se = (sigma2 * xtx.inverse().diagonal()).cwiseSqrt();
    for (Eigen::Index j = 0; j < k; ++j) {
      CHECK(r.coefficients(j) == doctest::Approx(beta(j)).epsilon(1e-10));
      CHECK(r.standard_errors(j) == doctest::Approx(se(j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: ols is scale equivariant and permutation invariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 40, k = 5;
    Eigen::MatrixXd X = random_matrix(rng, n, k);
    X.col(k - 1).setOnes();
    const Eigen::VectorXd y = random_matrix(rng, n, 1);
    const auto base = ols_fit(X, y, labels(k));

    Eigen::MatrixXd scaled = X;
    scaled.col(0) *= 1e6;
    scaled.col(1) *= 1e-4;
    const auto s = ols_fit(scaled, y, labels(k));
    CHECK(s.coefficients(0) * 1e6 == doctest::Approx(base.coefficients(0)).epsilon(1e-9));
    CHECK(s.coefficients(1) * 1e-4 == doctest::Approx(base.coefficients(1)).epsilon(1e-9));
    for (Eigen::Index j = 0; j < k; ++j) {
      CHECK(s.t_stats(j) == doctest::Approx(base.t_stats(j)).epsilon(1e-9));
    }

    Eigen::MatrixXd permuted(n, k);
    std::vector<std::string> names(k);
    const std::vector<Eigen::Index> order = {3, 0, 4, 2, 1};
    for (Eigen::Index j = 0; j < k; ++j) {
      permuted.col(j) = X.col(order[j]);
      names[j] = labels(k)[order[j]];
    }
    const auto p = ols_fit(permuted, y, names);
    for (const auto& name : labels(k)) {
      CHECK(p.coefficient(name) == doctest::Approx(base.coefficient(name)).epsilon(1e-10));
      CHECK(p.p_value(name) == doctest::Approx(base.p_value(name)).epsilon(1e-8));
    }
    CHECK(p.r_squared == doctest::Approx(base.r_squared).epsilon(1e-12));
  }
}

TEST_CASE("incomplete beta identities") {
  for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    for (double a : {0.5, 1.0, 2.5, 40.0}) {
      CHECK(incomplete_beta(a, 1.0, x) == doctest::Approx(std::pow(x, a)).epsilon(1e-12));
      CHECK(incomplete_beta(1.0, a, x) == doctest::Approx(1.0 - std::pow(1.0 - x, a)).epsilon(1e-12));
      for (double b : {0.5, 3.0, 1000.0}) {
        CHECK(incomplete_beta(a, b, x) ==
              doctest::Approx(1.0 - incomplete_beta(b, a, 1.0 - x)).epsilon(1e-11));
      }
    }
  }
  for (double a : {0.5, 3.0, 70.0}) CHECK(incomplete_beta(a, a, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
  CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("t distribution p-values") {
  CHECK(t_pvalue(0.0, 10) == doctest::Approx(1.0));
  for (double t : {0.1, 1.0, 2.0, 6.3}) {
    CHECK(t_pvalue(t, 1) == doctest::Approx(1.0 - 2.0 / std::numbers::pi * std::atan(t)).epsilon(1e-12));
    CHECK(t_pvalue(t, 2) == doctest::Approx(1.0 - t / std::sqrt(t * t + 2.0)).epsilon(1e-12));
    CHECK(t_pvalue(-t, 7) == t_pvalue(t, 7));
  }
  // Large df approaches the normal: P(|Z| > 1.959964) = 0.05.
  CHECK(t_pvalue(1.959963984540054, 1e9) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(t_pvalue(2.575829303548901, 1e9) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(t_pvalue(12.36, 2000) < 1e-30);
  CHECK(t_pvalue(INFINITY, 5) == 0.0);
  double previous = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double p = t_pvalue(0.1 * i, 12);
    CHECK(p < previous);
    previous = p;
  }
  CHECK_THROWS_AS(t_pvalue(1.0, 0.5), DomainError);
}

TEST_CASE("F p-value of t squared equals the two-sided t p-value") {
  for (double df : {1.0, 3.0, 17.0, 500.0}) {
    for (double t : {0.3, 1.7, 4.0}) {
      CHECK(f_pvalue(t * t, 1, df) == doctest::Approx(t_pvalue(t, df)).epsilon(1e-11));
    }
  }
  CHECK(f_pvalue(0.0, 2, 3) == 1.0);
  // F(2, d): survival is (1 + 2f/d)^(-d/2).
  CHECK(f_pvalue(1.5, 2, 8) == doctest::Approx(std::pow(1 + 2 * 1.5 / 8, -4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(f_pvalue(1.0, 0, 3), DomainError);
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(0.0) == "***");
  CHECK(significance_stars(0.0099) == "***");
  CHECK(significance_stars(0.01) == "**");
  CHECK(significance_stars(0.0499) == "**");
  CHECK(significance_stars(0.05) == "*");
  CHECK(significance_stars(0.0999) == "*");
  CHECK(significance_stars(0.1) == "");
  CHECK(significance_stars(0.9) == "");
}

TEST_CASE("pearson correlation") {
  Eigen::MatrixXd d(5, 3);
  d << 1, 2, 7, 2, 4, 7, 3, 5, 7, 4, 4, 7, 5, 5, 7;
  const auto m = pearson_matrix(d, {"x", "y", "c"});
  CHECK(m.r(0, 1) == doctest::Approx(6.0 / std::sqrt(60.0)).epsilon(1e-12));
  CHECK(m.r(1, 0) == m.r(0, 1));
  CHECK(m.r(0, 0) == 1.0);
  CHECK(std::isnan(m.r(0, 2)));
  CHECK(std::isnan(m.r(2, 2)));

  Eigen::MatrixXd exact(4, 2);
  exact << 1, -2, 2, -4, 3, -6, 4, -8;
  CHECK(pearson_matrix(exact, {"a", "b"}).r(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));

  CHECK_THROWS_AS(pearson_matrix(d.topRows(1), {"x", "y", "c"}), InsufficientDataError);
  CHECK_THROWS_AS(pearson_matrix(d, {"x"}), SchemaError);

  std::ostringstream csv;
  Eigen::MatrixXd orthogonal(4, 2);
  orthogonal << 1, 1, -1, 1, 1, -1, -1, -1;
  write_correlation_csv(pearson_matrix(orthogonal, {"a", "b"}), csv);
  CHECK(csv.str() == "variable,a,b\na,1,0\nb,0,1\n");
}

TEST_CASE("quartile and median subsets") {
  const auto t = table_of({5, 1, 4, 1, 3, 9, 2, 8});
  auto low = quartile_subset(t, {"v", SubsetRule::lowest_quartile});
  CHECK(low.run_ids == std::vector<std::int64_t>{1, 3});
  auto high = quartile_subset(t, {"v", SubsetRule::highest_quartile});
  CHECK(high.run_ids == std::vector<std::int64_t>{5, 7});
  CHECK(high.column("v")(0) == 9.0);
  auto below = quartile_subset(t, {"v", SubsetRule::below_median});
  CHECK(below.run_ids == std::vector<std::int64_t>{1, 3, 4, 6});
  auto above = quartile_subset(t, {"v", SubsetRule::above_median});
  CHECK(above.run_ids == std::vector<std::int64_t>{0, 2, 5, 7});

  // Ties resolve by run id, so 9 rows keep floor(9/4) = 2.
  const auto ties = table_of({1, 1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(quartile_subset(ties, {"v", SubsetRule::lowest_quartile}).run_ids ==
        std::vector<std::int64_t>{0, 1});
  CHECK(quartile_subset(ties, {"v", SubsetRule::highest_quartile}).run_ids ==
        std::vector<std::int64_t>{0, 1});
  CHECK(quartile_subset(table_of({3}), {"v", SubsetRule::lowest_quartile}).rows() == 0);
  CHECK_THROWS_AS(quartile_subset(t, {"nope", SubsetRule::lowest_quartile}), SchemaError);
}

TEST_CASE("property: quartile subsets bound the rest of the column") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> u(0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(4 + trial);
    for (auto& x : v) x = u(rng);
    const auto t = table_of(v);
    const auto low = quartile_subset(t, {"v", SubsetRule::lowest_quartile});
    const auto high = quartile_subset(t, {"v", SubsetRule::highest_quartile});
    CHECK(low.rows() == static_cast<Eigen::Index>(v.size() / 4));
    CHECK(std::is_sorted(low.run_ids.begin(), low.run_ids.end()));
    const double low_max = low.column("v").maxCoeff();
    const double high_min = high.column("v").minCoeff();
    int below = 0, above = 0;
    for (double x : v) {
      below += x < low_max;
      above += x > high_min;
    }
    CHECK(below < low.rows());
    CHECK(above < high.rows());
  }
}

TEST_CASE("histogram, skewness, median") {
  Eigen::VectorXd v(6);
  v << 0, 1, 2, 3, 4, 10;
  const auto h = histogram(v, 5);
  CHECK(h.edges.size() == 6);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 10.0);
  CHECK(h.counts == std::vector<std::int64_t>{2, 2, 1, 0, 1});

  Eigen::VectorXd same = Eigen::VectorXd::Constant(4, 2.0);
  CHECK(histogram(same, 3).counts == std::vector<std::int64_t>{4, 0, 0});
  CHECK_THROWS_AS(histogram(Eigen::VectorXd(0), 3), InsufficientDataError);

  Eigen::VectorXd s(3);
  s << 0, 0, 1;
  CHECK(skewness(s) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  s << 1, 2, 3;
  CHECK(skewness(s) == doctest::Approx(0.0));
  CHECK(std::isnan(skewness(same)));

  CHECK(median(s) == 2.0);
  Eigen::VectorXd e(4);
  e << 4, 1, 3, 2;
  CHECK(median(e) == 2.5);
  CHECK_THROWS_AS(median(Eigen::VectorXd(0)), InsufficientDataError);
}

TEST_CASE("mode counting") {
  auto modes = [](std::vector<std::int64_t> counts, double frac = 0.05) {
    Histogram h;
    h.counts = std::move(counts);
    h.edges.assign(h.counts.size() + 1, 0.0);
    return count_modes(h, frac);
  };
  CHECK(modes({1, 3, 8, 3, 1}) == 1);
  CHECK(modes({8, 5, 3, 2}) == 1);
  CHECK(modes({1, 9, 2, 9, 1}) == 2);
  CHECK(modes({5, 9, 9, 9, 5}) == 1);
  CHECK(modes({0, 0, 0}) == 0);
  // A one-count ripple on a tall peak is not a mode.
  CHECK(modes({10, 40, 100, 60, 61, 30}) == 1);
  CHECK(modes({10, 40, 100, 40, 61, 30}) == 2);
  CHECK(modes({10, 40, 100, 40, 61, 30}, 0.25) == 1);
}

TEST_CASE("sign checks") {
  Eigen::MatrixXd X(6, 3);
  X << 1, 0, 1, 2, 1, 1, 3, 0, 1, 4, 1, 1, 5, 0, 1, 6, 1, 1;
  Eigen::VectorXd y(6);
  y << 1.1, -1.9, 3.0, 0.1, 5.1, 2.0;
  const auto r = ols_fit(X, y, {"up", "down", "Constant"});
  CHECK(r.coefficient("up") > 0);
  CHECK(r.coefficient("down") < 0);
  auto ok = sign_check(r, {{"up", Sign::positive}, {"down", Sign::negative}}, 0.05);
  CHECK(ok.pass);
  CHECK(ok.verdicts.size() == 2);
  auto wrong = sign_check(r, {{"up", Sign::negative}, {"down", Sign::negative}}, 0.05);
  CHECK_FALSE(wrong.pass);
  CHECK_FALSE(wrong.verdicts[0].pass);
  CHECK(wrong.verdicts[1].pass);
  CHECK_FALSE(sign_check(r, {{"up", Sign::any}}, 1e-300).pass);
  CHECK_THROWS_AS(sign_check(r, {{"missing", Sign::any}}, 0.05), SchemaError);
}

TEST_CASE("regression output formats") {
  Eigen::MatrixXd X(3, 2);
  X << 0, 1, 1, 1, 2, 1;
  Eigen::VectorXd y(3);
  y << 0, 2, 2;
  const std::vector<NamedModel> models = {{"(1) full sample", ols_fit(X, y, {"x", "Constant"})}};

  std::ostringstream csv;
  write_regression_csv(models, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "model,term,estimate,std_error,t_stat,p_value,stars");
  std::getline(lines, line);
  CHECK(line.rfind("(1) full sample,x,1", 0) == 0);
  int rows = 2;
  bool has_r2 = false;
  while (std::getline(lines, line)) {
    ++rows;
    has_r2 = has_r2 || line.rfind("(1) full sample,r_squared,0.75", 0) == 0;
  }
  CHECK(rows == 1 + 2 + 6);
  CHECK(has_r2);

  const auto text = format_regression_table(models, "y");
  CHECK(text.find("(1) full sample") != std::string::npos);
  CHECK(text.find("Constant") != std::string::npos);
  CHECK(text.find("R2") != std::string::npos);

  std::ostringstream hist;
  Eigen::VectorXd v(4);
  v << 0, 1, 2, 3;
  write_histogram_csv({{"v", histogram(v, 2)}}, hist);
  CHECK(hist.str() == "column,bin,lower,upper,count\nv,0,0,1.5,2\nv,1,1.5,3,2\n");
}

TEST_CASE("predictor sets") {
  CHECK(engagement_predictors() ==
        std::vector<std::string>{"engagement_5", "engagement_2", "engagement_1", "engagement_3",
                                 "engagement_4"});
  CHECK(sentiment_predictors().size() == 24);
  CHECK(sentiment_predictors().back() == "nationalism_level");
  CHECK(nationalism_predictors().size() == 23);
  for (const auto& p : nationalism_predictors()) CHECK(p != "nationalism_level");
  CHECK(analysis_names().size() == 11);
  CHECK_THROWS_AS(run_analysis(table_of({1, 2, 3, 4}), "bogus"), SchemaError);
}
