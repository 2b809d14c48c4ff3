#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hammerstein/errors.hpp"
#include "hammerstein/estimators.hpp"
#include "hammerstein/metrics.hpp"
#include "hammerstein/model.hpp"
#include "oracles.hpp"

using namespace hammerstein;

TEST_SUITE("model") {
  TEST_CASE("legendre values") {
    CHECK(legendre_eval(0, 3.7) == 1.0);
    CHECK(legendre_eval(1, 0.5) == 0.5);
    CHECK(legendre_eval(2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(legendre_eval(2, 0.0) == -0.5);
    CHECK_THROWS_AS(legendre_eval(11, 0.0), InvalidArgument);
    CHECK_THROWS_AS(legendre_eval(-1, 0.0), InvalidArgument);

    const std::vector<double> p4{3.0 / 8.0, 0.0, -30.0 / 8.0, 0.0, 35.0 / 8.0};
    CHECK(legendre_coefficients(4) == p4);
  }

  TEST_CASE("legendre recurrence and independent evaluation") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double u = d(rng);
      for (int i = 1; i < kMaxLegendreDegree; ++i) {
        const double lhs = (i + 1) * legendre_eval(i + 1, u);
        const double rhs = (2 * i + 1) * u * legendre_eval(i, u) - i * legendre_eval(i - 1, u);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
      }
      for (int i = 0; i <= kMaxLegendreDegree; ++i)
        REQUIRE(std::abs(legendre_eval(i, u) - oracle::legendre(i, u)) <= 1e-12 * std::max(1.0, std::abs(oracle::legendre(i, u))));
    }
  }

  TEST_CASE("basis_matrix") {
    Vector u(1);
    u << 0.0;
    Matrix expect(1, 3);
    expect << 1, 0, -0.5;
    CHECK(basis_matrix(u, BasisSet{3}) == expect);

    std::mt19937_64 rng(32);
    const Vector v = oracle::random_vector(rng, 25);
    CHECK(basis_matrix(v, BasisSet{1}) == Matrix::Ones(25, 1));
    const Matrix F = basis_matrix(v, BasisSet{4});
    const Matrix Phi = toeplitz_mat(F, 6);
    CHECK(Phi.rows() == 25);
    CHECK(Phi.cols() == 24);
  }

  TEST_CASE("simulate pass-through and model identity") {
    std::mt19937_64 rng(33);
    const Vector u = oracle::random_vector(rng, 50);
    HammersteinSystem sys;
    sys.g = Vector::Zero(4);
    sys.g[0] = 1.0;
    sys.c = Vector::Zero(3);
    sys.c[1] = 1.0;  // f(u) = P_1(u) = u
    Rng sim_rng(0);
    const Dataset d = simulate(sys, u, 0.0, sim_rng);
    // y_t = u_{t-1}: entry k of y is y_{k+1}.
    CHECK(d.y == u);

    sys.c = Vector::Zero(3);
    sys.c[0] = 1.0;  // f = P_0 = 1
    CHECK(simulate(sys, u, 0.0, sim_rng).y == Vector::Ones(50));

    Rng r2 = substream(5, 1);
    const HammersteinSystem rnd = random_system(r2, 8, 4);
    const Vector y = simulate(rnd, u, 0.0, sim_rng).y;
    const Vector dense = oracle::block_toeplitz(oracle::legendre_matrix(u, 4), 8) * oracle::dense_kron(rnd.g, rnd.c);
    CHECK(oracle::rel_diff(y, dense) < 1e-12);
  }

  TEST_CASE("simulate determinism and noise") {
    Rng sys_rng = substream(9, 0);
    const HammersteinSystem sys = random_system(sys_rng, 10, 3);
    Rng in_rng = substream(9, 1);
    const Vector u = gaussian_input(in_rng, 200);
    Rng a = substream(9, 2), b = substream(9, 2);
    const Dataset da = simulate(sys, u, 0.3, a);
    const Dataset db = simulate(sys, u, 0.3, b);
    CHECK(da.y == db.y);
    CHECK(da.sigma2 == doctest::Approx(0.09));
    CHECK(da.y != noiseless_output(sys, u));
    CHECK_THROWS_AS(simulate(sys, u, -1.0, a), InvalidArgument);
  }

  TEST_CASE("substreams are keyed, not sequential") {
    Rng a = substream(1, 2, 3);
    Rng b = substream(1, 2, 3);
    Rng c = substream(1, 3, 2);
    CHECK(a() == b());
    Rng a2 = substream(1, 2, 3);
    CHECK(a2() != c());
  }

  TEST_CASE("random_system conventions") {
    std::vector<double> tails;
    for (std::uint64_t k = 0; k < 200; ++k) {
      Rng rng = substream(77, k);
      const HammersteinSystem sys = random_system(rng, 30, 5);
      REQUIRE(std::abs(sys.g.norm() - 1.0) < 1e-12);
      REQUIRE(sys.g[first_significant(sys.g)] > 0.0);
      REQUIRE(sys.poles.size() == 4);
      REQUIRE(sys.zeros.size() == 4);
      for (const auto& z : sys.poles) {
        REQUIRE(std::abs(z) <= 0.95 + 1e-15);
        REQUIRE(std::abs(z) >= 0.5 - 1e-15);
      }
      for (double ci : std::vector<double>(sys.c.data(), sys.c.data() + sys.c.size())) REQUIRE(std::abs(ci) <= 1.0);
      tails.push_back(sys.tail_energy);
    }
    std::nth_element(tails.begin(), tails.begin() + 100, tails.end());
    CHECK(tails[100] < 0.05);
  }

  TEST_CASE("snr_to_sigma2") {
    Rng rng = substream(4, 4);
    const HammersteinSystem sys = random_system(rng, 10, 3);
    const Vector u = gaussian_input(rng, 300);
    const Vector y0 = noiseless_output(sys, u);
    const double var = (y0.array() - y0.mean()).square().sum() / 299.0;
    CHECK(snr_to_sigma2(sys, u, 10.0) == doctest::Approx(var / 10.0).epsilon(1e-14));
    CHECK(snr_to_sigma2(sys, u, 1e12) < 1e-10 * var);
    CHECK_THROWS_AS(snr_to_sigma2(sys, u, 0.0), InvalidArgument);

    HammersteinSystem flat = sys;
    flat.c = Vector::Zero(3);
    CHECK_THROWS_AS(snr_to_sigma2(flat, u, 10.0), NumericalError);
  }

  TEST_CASE("noiseless data identify the system through LS-OP") {
    Rng rng = substream(8, 8);
    const HammersteinSystem sys = random_system(rng, 10, 3);
    const Vector u = gaussian_input(rng, 300);
    const Vector y = noiseless_output(sys, u);
    const Matrix Phi = toeplitz_mat(basis_matrix(u, BasisSet{3}), 10);
    const EstimateReport rep = ls_op(y, Phi, 10, 3);
    CHECK((rep.g_hat - sys.g).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((rep.c_hat - sys.c).cwiseAbs().maxCoeff() < 1e-6);
  }
}
