#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "cwp/landscape.hpp"
#include "cwp/model.hpp"

using namespace cwp;

namespace {

// Interior point with every full coordinate above `floor`.
ReducedPoint random_interior(std::mt19937_64& rng, int q, double floor = 0.02) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> coords;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> w(q);
    double sum = 0.0;
    for (auto& v : w) sum += (v = g(rng));
    for (int i = 0; i + 1 < q; ++i) {
      coords.push_back(floor + (1.0 - q * floor) * w[i] / sum);
    }
  }
  return ReducedPoint(coords);
}

double f_at(const ModelParams& p, std::vector<double> c) {
  return landscape_value(p, embed(ReducedPoint(std::move(c))));
}

std::vector<ModelParams> sample_params() {
  return {ModelParams::finite(3, 2.0, 0.5), ModelParams::finite(3, 4.0, 0.1),
          ModelParams::finite(3, 3.2, 0.0), ModelParams::no_componentwise(3, 3.5),
          ModelParams::finite(2, 4.0, 0.3), ModelParams::no_componentwise(2, 2.5)};
}

}  // namespace

TEST(Landscape, UniformValueClosedForm) {
  for (int q : {2, 3}) {
    for (double beta : {0.7, 2.0, 5.0}) {
      for (double j : {0.0, 0.4, 2.0}) {
        const auto p = ModelParams::finite(q, beta, j);
        const double expected = -(1.0 + j) / q + (1.0 + j) / beta * 2.0 * std::log(1.0 / q);
        EXPECT_NEAR(free_energy(p, PairMagnetization::uniform(q)), expected, 1e-13);
      }
      const double inf_expected = -1.0 / q + 2.0 / beta * std::log(1.0 / q);
      EXPECT_NEAR(free_energy_no_componentwise(beta, PairMagnetization::uniform(q)), inf_expected,
                  1e-13);
    }
  }
}

TEST(Landscape, PartsCombine) {
  const auto p = ModelParams::finite(3, 3.1, 0.7);
  const PairMagnetization x(SimplexPoint({0.5, 0.3, 0.2}), SimplexPoint({0.1, 0.1, 0.8}));
  EXPECT_DOUBLE_EQ(free_energy(p, x), energy_part(p, x) + (1.7 / 3.1) * entropy_part(x));
  const double e = -(0.25 + 0.09 + 0.04 + 0.01 + 0.01 + 0.64) / 2.0 - 0.7 * (0.05 + 0.03 + 0.16);
  EXPECT_NEAR(energy_part(p, x), e, 1e-15);
}

TEST(Landscape, EntropyOnBoundaryUsesZeroLogZero) {
  const PairMagnetization x(SimplexPoint({1.0, 0.0, 0.0}), SimplexPoint({0.5, 0.5, 0.0}));
  EXPECT_NEAR(entropy_part(x), std::log(0.5), 1e-15);
}

TEST(Landscape, InfiniteCouplingDispatch) {
  const auto p = ModelParams::no_componentwise(3, 2.0);
  const PairMagnetization x(SimplexPoint({0.6, 0.3, 0.1}), SimplexPoint({0.2, 0.3, 0.5}));
  EXPECT_DOUBLE_EQ(landscape_value(p, x), free_energy_no_componentwise(2.0, x));
  EXPECT_THROW(free_energy(p, x), UnsupportedError);
  EXPECT_THROW(energy_part(p, x), UnsupportedError);
}

TEST(Landscape, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(101);
  for (const auto& p : sample_params()) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto r = random_interior(rng, p.q);
      const auto g = gradient(p, r);
      ASSERT_EQ(g.size(), r.size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double h = 1e-6;
        std::vector<double> up(r.coords().begin(), r.coords().end()), dn = up;
        up[i] += h;
        dn[i] -= h;
        const double fd = (f_at(p, up) - f_at(p, dn)) / (2 * h);
        EXPECT_NEAR(g[i], fd, 1e-5 + 1e-6 * std::abs(fd)) << to_string(p);
      }
    }
  }
}

TEST(Landscape, HessianMatchesGradientDifferences) {
  std::mt19937_64 rng(202);
  for (const auto& p : sample_params()) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto r = random_interior(rng, p.q);
      const Eigen::MatrixXd h = hessian(p, r);
      EXPECT_LT((h - h.transpose()).norm(), 1e-14);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double step = 1e-6;
        std::vector<double> up(r.coords().begin(), r.coords().end()), dn = up;
        up[i] += step;
        dn[i] -= step;
        const auto gu = gradient(p, ReducedPoint(up));
        const auto gd = gradient(p, ReducedPoint(dn));
        for (std::size_t k = 0; k < r.size(); ++k) {
          const double fd = (gu[k] - gd[k]) / (2 * step);
          EXPECT_NEAR(h(k, i), fd, 1e-5 + 1e-6 * std::abs(fd));
        }
      }
    }
  }
}

TEST(Landscape, UniformIsStationary) {
  for (const auto& p : sample_params()) {
    for (double g : gradient(p, reduce(PairMagnetization::uniform(p.q)))) EXPECT_NEAR(g, 0.0, 1e-14);
  }
}

TEST(Landscape, SymmetricSpectrumMatchesDenseSolver) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> coord(0.01, 0.49), beta(0.5, 8.0), j(0.0, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const bool inf = trial % 5 == 0;
    const auto p = inf ? ModelParams::no_componentwise(3, beta(rng))
                       : ModelParams::finite(3, beta(rng), j(rng));
    const double s = coord(rng), t = coord(rng);
    auto fast = symmetric_spectrum(p, s, t);
    std::sort(fast.begin(), fast.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(p, ReducedPoint({s, s, t, t})));
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(fast[i], es.eigenvalues()[i], 1e-8 * (1.0 + std::abs(fast[i])));
    }
  }
}

TEST(Landscape, BoundaryRejected) {
  const auto p = ModelParams::finite(3, 2.0, 0.5);
  EXPECT_THROW(gradient(p, ReducedPoint({0.0, 0.5, 0.3, 0.3})), DomainError);
  EXPECT_THROW(hessian(p, ReducedPoint({0.5, 0.5, 0.3, 0.3})), DomainError);
  EXPECT_THROW(gradient(p, ReducedPoint({0.3, 0.3})), DomainError);
  EXPECT_THROW(symmetric_spectrum(p, 0.5, 0.2), DomainError);
}

TEST(Model, Validation) {
  EXPECT_THROW(ModelParams::finite(3, 0.0, 0.5), DomainError);
  EXPECT_THROW(ModelParams::finite(3, 1.0, -0.1), DomainError);
  EXPECT_THROW(ModelParams::finite(1, 1.0, 0.1), DomainError);
  EXPECT_THROW(ModelParams::finite(4, 1.0, 0.1).require_analysable(), DomainError);
  EXPECT_THROW(Coupling::no_componentwise().j(), UnsupportedError);
  EXPECT_THROW(SimplexPoint({0.5, 0.6}), DomainError);
  EXPECT_THROW(SimplexPoint({-0.1, 1.1}), DomainError);
  EXPECT_THROW(ReducedPoint({0.7, 0.6, 0.1, 0.1}), DomainError);
  EXPECT_THROW(PairMagnetization(SimplexPoint({0.5, 0.5}), SimplexPoint({0.2, 0.3, 0.5})),
               DomainError);
}

TEST(Model, EmbedReduceRoundTrip) {
  std::mt19937_64 rng(404);
  for (int q : {2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto r = random_interior(rng, q, 0.0);
      const auto back = reduce(embed(r));
      for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(back[i], r[i], 1e-15);
    }
  }
}

TEST(Model, Coefficients) {
  const auto c = LandscapeCoefficients::of(ModelParams::finite(3, 2.0, 0.5));
  EXPECT_EQ(c.intra, 1.0);
  EXPECT_EQ(c.inter, 0.5);
  EXPECT_DOUBLE_EQ(c.temperature, 0.75);
  const auto d = LandscapeCoefficients::of(ModelParams::no_componentwise(3, 4.0));
  EXPECT_EQ(d.intra, 0.0);
  EXPECT_EQ(d.inter, 1.0);
  EXPECT_DOUBLE_EQ(d.temperature, 0.25);
}
