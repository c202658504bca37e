#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../oracles/oracles.hpp"
#include "coinpulse/econometrics/adf.hpp"
#include "coinpulse/econometrics/correlation.hpp"
#include "coinpulse/econometrics/granger.hpp"
#include "coinpulse/econometrics/ols.hpp"
#include "coinpulse/econometrics/special.hpp"
#include "coinpulse/econometrics/xcorr.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"
#include "helpers.hpp"

using namespace coinpulse;
using testing::normals;

namespace {

std::vector<double> ar1(std::mt19937_64& rng, std::size_t n, double phi) {
  const auto e = normals(rng, n);
  std::vector<double> y(n);
  y[0] = e[0];
  for (std::size_t t = 1; t < n; ++t) y[t] = phi * y[t - 1] + e[t];
  return y;
}

std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n) {
  auto e = normals(rng, n);
  std::partial_sum(e.begin(), e.end(), e.begin());
  return e;
}

/// y_t = 0.5 y_{t-1} + b x_{t-lag} + e_t with x white noise.
std::pair<std::vector<double>, std::vector<double>> planted(std::mt19937_64& rng, std::size_t n, double b,
                                                            std::size_t lag) {
  const auto x = normals(rng, n);
  const auto e = normals(rng, n);
  std::vector<double> y(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    y[t] = e[t];
    if (t >= 1) y[t] += 0.5 * y[t - 1];
    if (t >= lag) y[t] += b * x[t - lag];
  }
  return {x, y};
}

}  // namespace

TEST_SUITE("econometrics") {
  TEST_CASE("ols exact line") {
    Eigen::MatrixXd X(10, 2);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = i;
      y(i) = 3.0 + 2.0 * i;
    }
    const auto fit = ols_fit(y, X);
    CHECK(fit.coefficients(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.coefficients(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.ssr < 1e-20);
    CHECK(fit.dof() == 8);
  }

  TEST_CASE("ols orthogonal regressor has zero slope") {
    Eigen::MatrixXd X(4, 2);
    Eigen::VectorXd y(4);
    X << 1, -1, 1, 1, 1, -1, 1, 1;
    y << 1, 2, -1, -2;  // centered, orthogonal to the second column
    const auto fit = ols_fit(y, X);
    CHECK(std::fabs(fit.coefficients(1)) < 1e-15);
  }

  TEST_CASE("ols matches extended-precision normal equations") {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> n01;
    Eigen::MatrixXd X(50, 4);
    Eigen::VectorXd y(50);
    std::vector<std::vector<double>> rows(50, std::vector<double>(4));
    std::vector<double> yy(50);
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 4; ++j) X(i, j) = rows[i][j] = j == 0 ? 1.0 : n01(rng);
      y(i) = yy[i] = 0.3 - 1.2 * X(i, 1) + 0.7 * X(i, 3) + n01(rng);
    }
    const auto fit = ols_fit(y, X);
    const auto beta = oracle::normal_equations(rows, yy);
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(fit.coefficients(j) - static_cast<double>(beta[j])) < 1e-9);
    CHECK(std::fabs(fit.ssr - static_cast<double>(oracle::ssr(rows, yy, beta))) < 1e-9);
  }

  TEST_CASE("ols reports the collinear column") {
    Eigen::MatrixXd X(6, 3);
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(6, 0, 5);
    for (int i = 0; i < 6; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = i * i;
      X(i, 2) = 2.0 * i * i + 1.0;
    }
    try {
      ols_fit(y, X);
      FAIL("expected collinearity");
    } catch (const CollinearError& e) {
      CHECK(e.column() == 2);
      CHECK(std::string(e.what()).find("collinear regressors") != std::string::npos);
    }
    CHECK_THROWS_AS(ols_fit(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Ones(2, 2)), InputError);
  }

  TEST_CASE("f_pvalue examples") {
    CHECK(f_pvalue(0.0, 3, 7) == 1.0);
    CHECK(f_pvalue(1e12, 5, 5) <= 1e-10);
    CHECK(std::fabs(f_pvalue(1.0, 10, 10) - 0.5) < 1e-12);
    CHECK(f_pvalue(std::numeric_limits<double>::infinity(), 2, 9) == 0.0);
    CHECK_THROWS_AS(f_pvalue(-1.0, 2, 3), NumericError);
    CHECK_THROWS_AS(f_pvalue(1.0, 0, 3), NumericError);
  }

  TEST_CASE("f_pvalue against quadrature and monotone in f") {
    for (const int d1 : {1, 2, 5, 24}) {
      for (const int d2 : {3, 30, 1000}) {
        double prev = 1.0;
        for (const double f : {0.05, 0.5, 1.0, 2.0, 4.0, 10.0}) {
          const double p = f_pvalue(f, d1, d2);
          CHECK(std::fabs(p - static_cast<double>(oracle::f_upper_tail(f, d1, d2))) < 1e-10);
          CHECK(p < prev);
          prev = p;
        }
      }
    }
  }

  TEST_CASE("t and pearson p-values") {
    CHECK(std::fabs(t_pvalue_two_sided(2.0, 10) - static_cast<double>(oracle::t_two_sided(2.0, 10))) < 1e-12);
    CHECK(t_pvalue_two_sided(0.0, 4) == doctest::Approx(1.0));
    CHECK(pearson_pvalue(1.0, 10) == 0.0);
    CHECK(pearson_pvalue(0.0, 10) == doctest::Approx(1.0));
    CHECK_THROWS(pearson_pvalue(0.5, 2));
  }

  TEST_CASE("incomplete beta identities") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x; I_x(a, 1) = x^a.
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(2.5, 1.0, 0.4) == doctest::Approx(std::pow(0.4, 2.5)).epsilon(1e-13));
    CHECK(regularized_incomplete_beta(4.0, 6.0, 0.35) + regularized_incomplete_beta(6.0, 4.0, 0.65) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("pearson basics") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 6, 8, 10};
    const std::vector<double> z{5, 4, 3, 2, 1};
    CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pearson(x, std::vector<double>(5, 1.0)), NumericError);
  }

  TEST_CASE("adf examples") {
    std::mt19937_64 rng(404);
    CHECK_FALSE(adf_test(random_walk(rng, 500)).reject_5);
    CHECK(adf_test(ar1(rng, 500, 0.5)).reject_5);
    CHECK_THROWS_AS(adf_test(std::vector<double>(100, 3.0)), NumericError);
    CHECK_THROWS_AS(adf_test(std::vector<double>(10, 3.0)), InputError);
  }

  TEST_CASE("adf statistic matches the normal-equation oracle at the chosen lag") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 5; ++rep) {
      const auto y = ar1(rng, 300, 0.7);
      for (const std::size_t cap : {0u, 3u, 8u}) {
        const auto r = adf_test(y, cap);
        CHECK(r.chosen_lag <= cap);
        CHECK(std::fabs(r.statistic - static_cast<double>(oracle::adf_statistic(y, r.chosen_lag))) < 1e-8);
        CHECK(r.n_obs == y.size() - 1 - r.chosen_lag);
      }
    }
  }

  TEST_CASE("adf critical values are ordered and approach the asymptotic table") {
    const auto big = adf_critical_values(1000000);
    CHECK(big.one == doctest::Approx(-3.43035).epsilon(1e-5));
    CHECK(big.five == doctest::Approx(-2.86154).epsilon(1e-5));
    CHECK(big.ten == doctest::Approx(-2.56677).epsilon(1e-5));
    for (const std::size_t n : {25u, 100u, 500u}) {
      const auto c = adf_critical_values(n);
      CHECK(c.one < c.five);
      CHECK(c.five < c.ten);
    }
    CHECK(adf_default_max_lag(100) == 12);
  }

  TEST_CASE("adf statistic is invariant to positive scaling") {
    std::mt19937_64 rng(21);
    auto y = ar1(rng, 400, 0.3);
    const auto a = adf_test(y);
    for (auto& v : y) v *= 123.5;
    const auto b = adf_test(y);
    CHECK(a.chosen_lag == b.chosen_lag);
    CHECK(std::fabs(a.statistic - b.statistic) < 1e-8);
  }

  TEST_CASE("var fit recovers an exact system") {
    std::mt19937_64 rng(31);
    const auto x = normals(rng, 200);
    std::vector<double> y(200, 0.0);
    for (std::size_t t = 1; t < 200; ++t) y[t] = 1.0 + 0.5 * y[t - 1] + 0.3 * x[t - 1];
    const auto model = fit_var_pair(x, y, 1);
    CHECK(std::fabs(model.equation_y.intercept - 1.0) < 1e-8);
    CHECK(std::fabs(model.equation_y.own[0] - 0.5) < 1e-8);
    CHECK(std::fabs(model.equation_y.cross[0] - 0.3) < 1e-8);
    CHECK(model.n_obs == 199);
  }

  TEST_CASE("var fit on independent noise has insignificant cross terms") {
    std::mt19937_64 rng(32);
    const auto x = normals(rng, 2000);
    const auto y = normals(rng, 2000);
    const auto model = fit_var_pair(x, y, 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::fabs(model.equation_y.cross[i]) < 3.0 * model.equation_y.cross_se[i]);
      CHECK(std::fabs(model.equation_x.cross[i]) < 3.0 * model.equation_x.cross_se[i]);
    }
  }

  TEST_CASE("var and granger preconditions") {
    std::vector<double> x(6, 1.0), y(6, 2.0);
    CHECK_THROWS_AS(fit_var_pair(x, y, 2), InputError);  // n = 3k
    CHECK_THROWS_AS(granger_test(x, y, 2), InputError);
    CHECK_THROWS_AS(fit_var_pair(x, std::vector<double>(7, 1.0), 1), InputError);
    CHECK_THROWS_AS(fit_var_pair(x, y, 0), InputError);
  }

  TEST_CASE("granger detects a planted effect and matches the oracle") {
    std::mt19937_64 rng(7);
    const auto [x, y] = planted(rng, 2000, 0.8, 2);
    const auto g = granger_test(x, y, 2);
    CHECK(g.p_value < 0.01);
    const auto o = oracle::granger(x, y, 2);
    CHECK(std::fabs(g.f_statistic - static_cast<double>(o.f)) < 1e-6 * static_cast<double>(o.f));
    const auto back = granger_test(y, x, 2);
    const auto ob = oracle::granger(y, x, 2);
    CHECK(std::fabs(back.f_statistic - static_cast<double>(ob.f)) < 1e-8);
    CHECK(std::fabs(back.p_value - static_cast<double>(ob.p)) < 1e-8);
    CHECK(g.n_obs == 1998);
  }

  TEST_CASE("granger is affine invariant") {
    std::mt19937_64 rng(8);
    auto [x, y] = planted(rng, 600, 0.2, 1);
    const auto a = granger_test(x, y, 3);
    for (auto& v : x) v = 2.5 * v - 7.0;
    for (auto& v : y) v = 0.01 * v + 100.0;
    const auto b = granger_test(x, y, 3);
    CHECK(std::fabs(a.f_statistic - b.f_statistic) < 1e-8);
    CHECK(std::fabs(a.p_value - b.p_value) < 1e-8);
  }

  TEST_CASE("granger flags a noise-free fit") {
    std::mt19937_64 rng(10);
    const auto x = normals(rng, 100);
    std::vector<double> y(100, 0.0);
    for (std::size_t t = 1; t < 100; ++t) y[t] = 0.4 * y[t - 1] + x[t - 1];
    const auto g = granger_test(x, y, 1);
    CHECK(g.degenerate);
    CHECK(std::isinf(g.f_statistic));
    CHECK(g.p_value == 0.0);
  }

  TEST_CASE("restricted ssr dominates, so F >= 0") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 30; ++rep) {
      const auto x = normals(rng, 120);
      const auto y = normals(rng, 120);
      for (std::size_t k = 1; k <= 4; ++k) CHECK(granger_test(x, y, k).f_statistic >= 0.0);
    }
  }

  TEST_CASE("granger scan: planted lag 3 is significant from k = 3") {
    std::mt19937_64 rng(13);
    const auto [x, y] = planted(rng, 3000, 0.6, 3);
    const auto rows = granger_scan(x, y, 8);
    REQUIRE(rows.size() == 8);
    for (const auto& r : rows) {
      REQUIRE(r.result);
      CHECK(r.lag == static_cast<std::size_t>(&r - rows.data()) + 1);
      if (r.lag >= 3) CHECK(r.result->p_value < 0.01);
    }
  }

  TEST_CASE("granger scan parallel equals serial and records per-lag errors") {
    std::mt19937_64 rng(14);
    const auto x = normals(rng, 40);
    const auto y = normals(rng, 40);
    for (const int w : {1, 3}) {
      set_worker_count(w);
      const auto par = granger_scan(x, y, 14);
      const auto ser = serial::granger_scan(x, y, 14);
      REQUIRE(par.size() == ser.size());
      for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].lag == ser[i].lag);
        CHECK(par[i].error == ser[i].error);
        CHECK(par[i].result.has_value() == ser[i].result.has_value());
        if (par[i].result) CHECK(par[i].result->f_statistic == ser[i].result->f_statistic);
      }
      CHECK_FALSE(par.back().result.has_value());  // 40 < 3 * 14 + 3
      CHECK_FALSE(par.back().error.empty());
    }
    set_worker_count(0);
  }

  TEST_CASE("cross correlation examples") {
    std::mt19937_64 rng(15);
    const auto x = normals(rng, 64);
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    CHECK(cross_correlation(x, x, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cross_correlation(x, neg, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(cross_correlation(x, neg, 0) == pearson(x, neg));
    CHECK_THROWS_AS(cross_correlation(x, x, 62), InputError);
  }

  TEST_CASE("cross correlation at lag 0 is pearson exactly") {
    std::mt19937_64 rng(16);
    for (int rep = 0; rep < 50; ++rep) {
      const auto x = normals(rng, 33);
      const auto y = normals(rng, 33);
      CHECK(cross_correlation(x, y, 0) == pearson(x, y));
    }
  }

  TEST_CASE("shifted sine recovers lag 2") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<double> base(102);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = std::sin(0.3 * static_cast<double>(i)) + noise(rng);
    // y leads x by two steps: y_i = x_{i+2}.
    std::vector<double> x(base.begin(), base.begin() + 100);
    std::vector<double> y(100);
    for (std::size_t i = 0; i < 100; ++i) y[i] = i + 2 < 100 ? x[i + 2] : base[i + 2];
    const auto scan = cross_correlation_scan(x, y, 10);
    const auto best = best_lag_index(scan);
    REQUIRE(best);
    CHECK(scan[*best].lag == 2);
    for (std::size_t k = 0; k <= 10; ++k) {
      CHECK(std::fabs(*scan[k].gamma - static_cast<double>(oracle::cross_correlation(x, y, k))) < 1e-12);
    }
  }

  TEST_CASE("cross correlation bounds and affine invariance") {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> x(40), y(40);
      for (auto& v : x) v = u(rng) * u(rng);
      for (auto& v : y) v = u(rng) + (rep % 2 ? 0.0 : 5.0);
      for (std::size_t k = 0; k <= 20; k += 5) {
        const double g = cross_correlation(x, y, k);
        CHECK(std::fabs(g) <= 1.0);
        CHECK(std::fabs(cross_correlation(x, y, k, MeanMode::global)) <= 1.0);
        std::vector<double> xs(x), ys(y);
        for (auto& v : xs) v = 4.0 * v + 1.0;
        for (auto& v : ys) v = 0.5 * v - 2.0;
        CHECK(std::fabs(cross_correlation(xs, ys, k) - g) < 1e-12);
      }
    }
  }

  TEST_CASE("global-mean variant matches its own oracle") {
    std::mt19937_64 rng(19);
    const auto x = normals(rng, 80);
    const auto y = normals(rng, 80);
    for (std::size_t k = 0; k <= 12; ++k) {
      CHECK(std::fabs(cross_correlation(x, y, k, MeanMode::global) -
                      static_cast<double>(oracle::cross_correlation(x, y, k, true))) < 1e-12);
    }
  }

  TEST_CASE("best lag scan") {
    std::mt19937_64 rng(20);
    const auto p = normals(rng, 300);
    const auto pd = normals(rng, 30);
    const auto same = best_lag_scan(p, p, pd, pd, 24, 7);
    REQUIRE(same.best);
    CHECK(same.best->lag == 0);
    CHECK(same.best->resolution == Resolution::hourly);
    CHECK(same.best->gamma == doctest::Approx(1.0));
    CHECK(same.hourly.size() == 25);
    CHECK(same.daily.size() == 8);

    // Signal is the price moved forward two hours: price_t = signal_{t-2}.
    std::vector<double> signal(300);
    for (std::size_t t = 0; t < 300; ++t) signal[t] = t + 2 < 300 ? p[t + 2] : 0.0;
    const auto shifted = best_lag_scan(p, signal, pd, normals(rng, 30), 24, 7);
    REQUIRE(shifted.best);
    CHECK(shifted.best->lag == 2);
    CHECK(shifted.best->resolution == Resolution::hourly);
  }

  TEST_CASE("xcorr scan parallel equals serial") {
    std::mt19937_64 rng(22);
    const auto x = normals(rng, 256);
    const auto y = normals(rng, 256);
    set_worker_count(4);
    const auto a = cross_correlation_scan(x, y, 24);
    const auto b = serial::cross_correlation_scan(x, y, 24);
    set_worker_count(0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].gamma == b[i].gamma);
  }

  TEST_CASE("return correlation matrix") {
    std::mt19937_64 rng(23);
    const auto origin = testing::at("2024-01-01T01:00:00Z");
    const auto worigin = testing::at("2024-01-08T00:00:00Z");
    std::vector<AlignedSeries> hourly, weekly;
    const std::vector<std::string> ids{"AAA", "BBB", "CCC", "DDD"};
    for (const auto& id : ids) {
      hourly.push_back({id, origin, ar1(rng, 600, 0.1)});
      weekly.push_back({id, worigin, ar1(rng, 60, 0.1)});
    }
    hourly[3].values = hourly[2].values;  // DDD mirrors CCC
    weekly[3].values = weekly[2].values;
    const std::vector<std::string> order{"DDD", "AAA", "CCC", "BBB"};
    const auto m = return_correlation_matrix(hourly, weekly, order);
    CHECK(m.coins == order);
    auto find = [&](const std::string& id) -> const AlignedSeries* {
      for (const auto& s : hourly)
        if (s.id == id) return &s;
      return nullptr;
    };
    auto findw = [&](const std::string& id) -> const AlignedSeries* {
      for (const auto& s : weekly)
        if (s.id == id) return &s;
      return nullptr;
    };
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(m.values(i, i) == 1.0);
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j) continue;
        const auto& a = i > j ? find(order[i])->values : findw(order[i])->values;
        const auto& b = i > j ? find(order[j])->values : findw(order[j])->values;
        CHECK(std::fabs(m.values(i, j) - static_cast<double>(oracle::pearson(a, b))) < 1e-12);
        CHECK(std::fabs(m.values(i, j)) <= 1.0);
      }
    }
    CHECK(m.values(2, 0) == doctest::Approx(1.0));  // CCC vs DDD, hourly
    CHECK(m.values(0, 2) == doctest::Approx(1.0));  // weekly
    CHECK(m.hourly_n == 600);
    CHECK(m.weekly_n == 60);

    const auto s = serial::return_correlation_matrix(hourly, weekly, order);
    CHECK(s.values == m.values);
    CHECK(s.p_values == m.p_values);
  }

  TEST_CASE("return correlation matrix needs stationary, aligned inputs") {
    std::mt19937_64 rng(24);
    const auto origin = testing::at("2024-01-01T01:00:00Z");
    std::vector<AlignedSeries> hourly{{"A", origin, random_walk(rng, 400)}, {"B", origin, ar1(rng, 400, 0.2)}};
    std::vector<AlignedSeries> weekly{{"A", origin, ar1(rng, 50, 0.1)}, {"B", origin, ar1(rng, 50, 0.1)}};
    CHECK_THROWS_AS(return_correlation_matrix(hourly, weekly, {"A", "B"}), NumericError);
    const auto m = return_correlation_matrix(hourly, weekly, {"A", "B"}, true);
    CHECK(m.adf_override);
    bool flagged = false;
    for (const auto& a : m.adf) flagged = flagged || (a.coin == "A" && a.resolution == Resolution::hourly && !a.stationary());
    CHECK(flagged);

    hourly[1].origin += Hours{1};
    CHECK_THROWS_AS(return_correlation_matrix(hourly, weekly, {"A", "B"}, true), InputError);
  }
}
