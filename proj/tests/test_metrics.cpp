#include "test_util.hpp"

#include <sstream>

using namespace cdfs;

TEST_CASE("encodable-dimension rate") {
  CHECK(d_df(2, 1) == 0.0);  // one DF state holds no qubit
  CHECK(d_df(4, 2) == Catch::Approx(0.25).epsilon(1e-14));

  // ln dim V(k) via the closed form vs exact integer dimensions
  for (int n : {20, 60, 100}) {
    const int k = n / 2;
    using u128 = unsigned __int128;
    const auto c = [n](int kk) {
      u128 r = 1;
      for (int i = 1; i <= kk; ++i) r = r * static_cast<u128>(n - kk + i) / static_cast<u128>(i);
      return r;
    };
    const long double dim = static_cast<long double>(c(k)) - static_cast<long double>(c(k - 1));
    const double exact = static_cast<double>(std::log(dim)) / (n * std::numbers::ln2);
    CHECK(d_df(n, k) == Catch::Approx(exact).margin(1e-12));
  }

  CHECK_THROWS_AS(df_dimension_ln(4, 3), std::domain_error);

  // asymptotic rate is the binary entropy of the excitation fraction
  CHECK(d_df_asymptotic(0.5) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(d_df_asymptotic(2.0 / 9.0) == Catch::Approx(0.7642045).margin(1e-6));
  CHECK_THROWS_AS(d_df_asymptotic(0.0), std::domain_error);
  CHECK_THROWS_AS(d_df_asymptotic(0.6), std::domain_error);

  for (double r : {0.1, 0.25, 0.5}) {
    double prev = 1.0;
    for (int n : {20, 100, 500}) {
      const int k = static_cast<int>(std::lround(r * n));
      const double gap = std::abs(d_df(n, k) - d_df_asymptotic(r));
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev <= 0.06);  // already close by n = 500
  }
}

TEST_CASE("DF fraction of the sector") {
  CHECK(p_df(4, 1) == Catch::Approx(0.75).epsilon(1e-14));
  CHECK(p_df(3, 1) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p_df(100, 50) == Catch::Approx(1.0 / 51.0).epsilon(1e-12));

  CHECK(p_df_asymptotic(0.0) == 1.0);
  CHECK(p_df_asymptotic(0.5) == 0.0);
  CHECK(p_df_asymptotic(0.25) == Catch::Approx(2.0 / 3.0).epsilon(1e-14));

  // finite-n fraction matches the closed ratio at a quarter filling
  for (int n : {10, 40, 200, 2000}) {
    const int k = n / 4;
    CHECK(p_df(n, k) == Catch::Approx((n - 2 * k + 1.0) / (n - k + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("rate-fraction product peaks near r = 2/9") {
  const double r = product_optimum();
  CHECK(r >= 0.21);
  CHECK(r <= 0.24);
  CHECK(r == Catch::Approx(0.224048).margin(5e-6));
  CHECK(encoding_product(r) == Catch::Approx(0.545886).margin(5e-6));

  // interior maximum: beats both shoulders
  CHECK(encoding_product(r) > encoding_product(r - 0.05));
  CHECK(encoding_product(r) > encoding_product(r + 0.05));
}

TEST_CASE("total-spin multiplicities") {
  CHECK(static_cast<long long>(irrep_multiplicity_exact(4, 0)) == 2);
  CHECK(static_cast<long long>(irrep_multiplicity_exact(4, 1)) == 3);
  CHECK(static_cast<long long>(irrep_multiplicity_exact(4, 2)) == 1);

  for (int n = 2; n <= 60; n += 2) {
    unsigned __int128 weighted = 0;
    unsigned __int128 plain = 0;
    for (int j = 0; j <= n / 2; ++j) {
      const unsigned __int128 m = irrep_multiplicity_exact(n, j);
      CHECK(m == irrep_multiplicity_summand(n, j));
      weighted += m * static_cast<unsigned __int128>(2 * j + 1);
      plain += m;
    }
    // states: sum over towers of their length; seeds: central binomial
    CHECK(weighted == (static_cast<unsigned __int128>(1) << n));
    unsigned __int128 central = 1;
    for (int i = 1; i <= n / 2; ++i)
      central = central * static_cast<unsigned __int128>(n / 2 + i) / static_cast<unsigned __int128>(i);
    CHECK(plain == central);
  }
}

TEST_CASE("DF fraction under a total-spin cutoff") {
  CHECK(p_df_jtot(4, 1) == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p_df_jtot(4, 2) == Catch::Approx(0.5).epsilon(1e-12));

  for (int n : {4, 8, 20, 60, 120})
    for (int j = 1; j <= n / 2; j = 2 * j + 1)
      CHECK(p_df_jtot(n, j) == Catch::Approx(p_df_jtot_exact(n, j)).epsilon(1e-12));

  // tightening the cutoff can only help.  The denominator grows by at least
  // one irrep per step, but for n = 500 the late multiplicities fall ~140
  // orders of magnitude below the running sum, so in doubles the tail is a
  // plateau: strict decrease is only checkable while the terms resolve.
  for (int n : {20, 500}) {
    const int strict_until = n <= 20 ? n / 2 : 50;
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= n / 2; ++j) {
      const double p = p_df_jtot(n, j);
      if (j <= strict_until)
        CHECK(p < prev);
      else
        CHECK(p <= prev);
      CHECK(p > 0.0);
      prev = p;
    }
  }

  // no cutoff at all: DF states against everything else in the tower count
  for (int n : {4, 12, 40, 60}) {
    const long double m0 = static_cast<long double>(irrep_multiplicity_exact(n, 0));
    long double rest = 0;
    for (int j = 1; j <= n / 2; ++j)
      rest += static_cast<long double>(irrep_multiplicity_exact(n, j));
    CHECK(p_df_jtot(n, n / 2) == Catch::Approx(static_cast<double>(m0 / rest)).epsilon(1e-12));
  }

  CHECK(p_df_jtot(500, 1) == Catch::Approx(0.336).epsilon(1e-12));
  CHECK(p_df_jtot(500, 250) == Catch::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("figure series are deterministic and well-formed") {
  std::ostringstream a, b;
  write_fig1_csv(a);
  write_fig1_csv(b);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,d_df,p_df,product");
  std::getline(in, line);
  CHECK(line == "0,0,1,0");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 501);

  std::ostringstream f2;
  write_fig2_csv(f2);
  std::istringstream in2(f2.str());
  std::getline(in2, line);
  CHECK(line == "j_tot,p_df_jtot");
  rows = 0;
  while (std::getline(in2, line)) ++rows;
  CHECK(rows == 250);
}
