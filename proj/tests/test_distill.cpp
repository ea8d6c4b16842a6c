#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "simplexq/distill.hpp"
#include "simplexq/detail/rng.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/quantizer.hpp"

using namespace simplexq;

namespace {

JointDistribution random_joint(std::uint64_t ka, std::uint64_t kb, Rng& rng) {
  std::vector<double> m(ka * kb);
  double total = 0.0;
  for (double& v : m) {
    v = rng.uniform01() + 0.02;
    total += v;
  }
  for (double& v : m) v /= total;
  double sum = 0.0;
  for (double v : m) sum += v;
  m[0] += 1.0 - sum;
  return JointDistribution::validated(m, ka, kb);
}

}  // namespace

TEST_CASE("mutual information oracles") {
  // Independent pair: product of marginals, zero information.
  const JointDistribution ind = JointDistribution::validated(
      {0.12, 0.28, 0.18, 0.42}, 2, 2);  // (0.4,0.6) x (0.3,0.7)
  CHECK(mutual_information(ind) == doctest::Approx(0.0).epsilon(1e-14));

  // Perfectly correlated uniform pair: information log K.
  const JointDistribution diag = JointDistribution::validated(
      {0.25, 0, 0, 0, 0, 0.25, 0, 0, 0, 0, 0.25, 0, 0, 0, 0, 0.25}, 4, 4);
  CHECK(mutual_information(diag) == doctest::Approx(std::log(4.0)).epsilon(1e-13));

  // Hand-computed 2x3 instance.
  const JointDistribution j =
      JointDistribution::validated({0.1, 0.2, 0.3, 0.2, 0.1, 0.1}, 2, 3);
  double direct = 0.0;
  const double pa[] = {0.6, 0.4};
  const double pb[] = {0.3, 0.3, 0.4};
  const double p[2][3] = {{0.1, 0.2, 0.3}, {0.2, 0.1, 0.1}};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 3; ++b) {
      direct += p[a][b] * std::log(p[a][b] / (pa[a] * pb[b]));
    }
  }
  CHECK(mutual_information(j) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("joint distribution validation") {
  CHECK_THROWS_AS(JointDistribution::validated({0.5, 0.4}, 1, 2), DomainError);
  CHECK_THROWS_AS(JointDistribution::validated({0.5, -0.1, 0.6}, 1, 3),
                  DomainError);
  CHECK_THROWS_AS(JointDistribution::validated({0.5, 0.5, 0.5}, 2, 2),
                  DomainError);
  const JointDistribution j =
      JointDistribution::validated({0.2, 0.0, 0.3, 0.5}, 2, 2);
  CHECK(j.marginal_b()[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(j.prob(1, 0) == doctest::Approx(0.3).epsilon(1e-15));
  const ProbVector col = j.column(0);
  CHECK(col[0] == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(col[1] == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("joint distribution csv parsing") {
  std::istringstream in(
      "a,b,p\n"
      "# comment row\n"
      "0,0,0.2\n"
      "0,1,0.3\n"
      "1,0,0.1\n"
      "1,1,0.4\n");
  const JointDistribution j = JointDistribution::from_csv(in);
  CHECK(j.alphabet_a() == 2);
  CHECK(j.alphabet_b() == 2);
  CHECK(j.prob(0, 1) == doctest::Approx(0.3).epsilon(1e-15));

  std::istringstream dup("0,0,0.5\n0,0,0.5\n");
  CHECK_THROWS_AS(JointDistribution::from_csv(dup), ParseError);
  std::istringstream neg("-1,0,1.0\n");
  CHECK_THROWS_AS(JointDistribution::from_csv(neg), ParseError);
  std::istringstream short_sum("0,0,0.25\n");
  CHECK_THROWS_AS(JointDistribution::from_csv(short_sum), DomainError);
}

TEST_CASE("pushforward prior merges duplicate conditionals") {
  // Columns 1 and 2 carry the same conditional; they must fold into one
  // atom whose mass is the sum, leaving the information unchanged.
  const JointDistribution j = JointDistribution::validated(
      {0.10, 0.06, 0.09, 0.25,
       0.10, 0.14, 0.21, 0.05},
      2, 4);
  const std::vector<PushforwardAtom> atoms = pushforward_prior(j);
  CHECK(atoms.size() == 3);
  double mass = 0.0;
  bool merged = false;
  for (const auto& a : atoms) {
    mass += a.mass;
    if (a.columns.size() == 2) {
      merged = true;
      CHECK(a.mass == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(a.columns == std::vector<std::uint64_t>{1, 2});
    }
  }
  CHECK(merged);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("label budget extremes") {
  Rng rng(31);
  const JointDistribution j = random_joint(3, 5, rng);
  // One label destroys everything recoverable: loss is the full information.
  const DistillOutcome one = brute_force_distiller(j, 1);
  CHECK(one.info_loss == doctest::Approx(mutual_information(j)).epsilon(1e-12));
  // As many labels as distinct columns: lossless.
  const DistillOutcome all = brute_force_distiller(j, 5);
  CHECK(all.info_loss == doctest::Approx(0.0).epsilon(1e-11));
  CHECK(all.kl_loss == doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("information route and divergence route agree at the optimum") {
  Rng rng(57);
  for (int t = 0; t < 5; ++t) {
    const JointDistribution j = random_joint(3, 5, rng);
    const DistillOutcome info = brute_force_distiller(j, 2);
    const DistillOutcome kl = brute_force_quantizer(j, 2);
    CHECK(std::abs(info.info_loss - kl.kl_loss) < 1e-9);
    CHECK(info.labels.size() == 5);
    for (std::uint64_t l : info.labels) CHECK(l < 2);
  }
}

TEST_CASE("quantizer-derived labeling collapses to one cell at unit depth") {
  Rng rng(73);
  const JointDistribution j = random_joint(3, 5, rng);
  // One level per coordinate: every interior conditional lands in the same
  // cell, so the distiller keeps nothing and loses exactly the information.
  const Quantizer q(Compander::approx_minimax(3), 1);
  const DistillOutcome out = distiller_from_quantizer(j, q);
  CHECK(out.info_loss == doctest::Approx(mutual_information(j)).epsilon(1e-12));
  CHECK(std::abs(out.info_loss - out.kl_loss) <= 1e-10);
  for (std::uint64_t l : out.labels) CHECK(l == 0);

  // A fine quantizer separates distinct conditionals: near-lossless.
  const Quantizer fine(Compander::approx_minimax(3), 1u << 16);
  const DistillOutcome keep = distiller_from_quantizer(j, fine);
  CHECK(keep.info_loss < 1e-6);

  // Identical columns always share a label, at any granularity.
  const JointDistribution dup = JointDistribution::validated(
      {0.10, 0.06, 0.09, 0.25,
       0.10, 0.14, 0.21, 0.05},
      2, 4);
  const DistillOutcome lab = distiller_from_quantizer(dup, fine);
  CHECK(lab.labels[1] == lab.labels[2]);
}

TEST_CASE("enumeration guard and label validation") {
  CHECK_THROWS_AS(brute_force_distiller(
                      JointDistribution::validated({0.5, 0.5}, 1, 2), 0),
                  DomainError);
  // 5 columns, 12 labels each would be 12^5 cases: fine. The guard trips
  // on genuinely huge products.
  Rng rng(11);
  const JointDistribution wide = random_joint(2, 10, rng);
  CHECK_THROWS_AS(brute_force_distiller(wide, 10), DomainError);
}

TEST_CASE("degrading cost bounds") {
  const double log_m = 40.0 * std::log(2.0);
  const DegradingCostBounds b = degrading_cost_bounds(10, log_m);
  CHECK(b.covering_log.available);
  CHECK(b.covering_log.value > 0.0);
  CHECK(b.covering_linear.available);
  // 2^40 over 10 letters is far below the compander regime's floor.
  CHECK_FALSE(b.compander.available);
  CHECK_FALSE(b.smallest.empty());

  // A gigantic budget activates the compander bound and it wins.
  const DegradingCostBounds big = degrading_cost_bounds(10, 40.0 * std::log(10.0));
  CHECK(big.compander.available);
  CHECK(big.compander.value < big.covering_linear.value);
  CHECK(big.compander.value < big.covering_log.value);
  CHECK(big.smallest == "compander");

  // More labels can only help: every bound shrinks as the budget grows.
  const DegradingCostBounds b2 = degrading_cost_bounds(10, 2.0 * log_m);
  CHECK(b2.covering_linear.value < b.covering_linear.value);
  CHECK(b2.covering_log.value < b.covering_log.value);

  CHECK_THROWS_AS(degrading_cost_bounds(4, log_m), DomainError);
  CHECK_THROWS_AS(degrading_cost_bounds(10, 0.0), DomainError);
}
