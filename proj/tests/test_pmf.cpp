#include <doctest.h>

#include <cmath>

#include "delaudit/noise.hpp"
#include "delaudit/pmf.hpp"

using namespace delaudit;

namespace {

FinitePmf coin() {
  return FinitePmf::from_atoms({{"h", Rat(1, 2)}, {"t", Rat(1, 2)}});
}

}  // namespace

TEST_CASE("identical pmfs have zero hockey-stick at eps 0") {
  auto p = coin();
  CHECK(hockey_stick(p, p, 0.0) == 0.0);
  CHECK(check_indisting(p, p, 0.0, 0.0).passed);
}

TEST_CASE("distinct point masses are maximally far") {
  auto p = FinitePmf::point_mass("a");
  auto q = FinitePmf::point_mass("b");
  CHECK(hockey_stick(p, q, 0.0) == 1.0);
  CHECK(hockey_stick(p, q, 5.0) == 1.0);
  auto r = check_indisting(p, q, 1.0, 0.5);
  CHECK_FALSE(r.passed);
  CHECK(r.delta_forward == 1.0);
}

TEST_CASE("truncated geometric at adjacent centers stays under the tail deficit") {
  TruncatedGeometricNoise noise(1.0, 16, 12);
  auto p = noise.pmf_at(0);
  auto q = noise.pmf_at(1);
  double d = hockey_stick(p, q, 1.0);
  CHECK(d >= 0.0);
  CHECK(d <= noise.tail_deficit() + 1e-12);
  // Exact summation over the truncated support in the other direction too.
  CHECK(hockey_stick(q, p, 1.0) <= noise.tail_deficit() + 1e-12);
}

TEST_CASE("hockey-stick is nonincreasing in eps and check is monotone") {
  TruncatedGeometricNoise noise(0.5, 12, 10);
  auto p = noise.pmf_at(0);
  auto q = noise.pmf_at(2);
  double prev = 2.0;
  for (double eps : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    double d = hockey_stick(p, q, eps);
    CHECK(d <= prev + 1e-15);
    prev = d;
  }
  double d0 = hockey_stick(p, q, 0.5);
  CHECK(check_indisting(p, q, 0.5, d0).passed);
  CHECK(check_indisting(p, q, 0.7, d0 + 0.01).passed);
}

TEST_CASE("check_indisting is symmetric in pass verdicts") {
  TruncatedGeometricNoise noise(1.0, 8, 10);
  auto p = noise.pmf_at(0);
  auto q = noise.pmf_at(1);
  for (double delta : {0.0, 0.01, 0.2}) {
    CHECK(check_indisting(p, q, 1.0, delta).passed ==
          check_indisting(q, p, 1.0, delta).passed);
  }
}

TEST_CASE("post-processing cannot increase the divergence") {
  TruncatedGeometricNoise noise(1.0, 8, 10);
  auto p = noise.pmf_at(0);
  auto q = noise.pmf_at(1);
  // Collapse atoms by sign: a deterministic post-processing map.
  auto sign = [](const Bytes& v) {
    return Bytes(v > enc::i64(0) ? "pos" : (v == enc::i64(0) ? "zero" : "neg"));
  };
  for (double eps : {0.0, 0.5, 1.0}) {
    CHECK(hockey_stick(p.map_atoms(sign), q.map_atoms(sign), eps) <=
          hockey_stick(p, q, eps) + 1e-15);
  }
}

TEST_CASE("estimate_indisting agrees with exact on small supports") {
  TruncatedGeometricNoise noise(1.0, 6, 8);
  auto p = noise.pmf_at(0);
  auto q = noise.pmf_at(1);
  double exact = std::max(hockey_stick(p, q, 1.0), hockey_stick(q, p, 1.0));

  EstimateOptions opt;
  opt.trials = 100000;
  opt.seed = 7;
  auto r = estimate_indisting([&](Rng& rng) { return p.sample(rng); },
                              [&](Rng& rng) { return q.sample(rng); }, 1.0, 0.05, opt);
  CHECK(r.method == "sampled");
  double point = std::max(r.delta_forward, r.delta_backward);
  // Plug-in estimate converges; 3 bootstrap standard errors is roughly 0.01
  // at this sample size, be generous.
  CHECK(std::abs(point - exact) < 0.02);
}

TEST_CASE("estimate_indisting verdicts on easy cases") {
  EstimateOptions opt;
  opt.trials = 20000;
  opt.seed = 3;
  auto fair = [](Rng& rng) { return Bytes(rng.below(2) ? "h" : "t"); };
  CHECK(estimate_indisting(fair, fair, 0.0, 0.02, opt).passed);

  auto pa = [](Rng&) { return Bytes("a"); };
  auto pb = [](Rng&) { return Bytes("b"); };
  CHECK_FALSE(estimate_indisting(pa, pb, 1.0, 0.5, opt).passed);

  opt.trials = 999;
  CHECK_THROWS_AS(estimate_indisting(fair, fair, 0.0, 0.02, opt), ParameterError);
  opt.trials = 2000;
  opt.confidence = 1.5;
  CHECK_THROWS_AS(estimate_indisting(fair, fair, 0.0, 0.02, opt), ParameterError);
}

TEST_CASE("pmf basics: normalization, conditioning, serialization") {
  auto p = FinitePmf::from_atoms({{"a", Rat(1, 4)}, {"b", Rat(1, 4)}, {"c", Rat(1, 2)}});
  CHECK(p.is_normalized());
  CHECK(p.mass_of("c") == Rat(1, 2));

  auto cond = p.conditioned_on([](const Bytes& v) { return v != "c"; });
  REQUIRE(cond.has_value());
  CHECK(cond->mass_of("a") == Rat(1, 2));
  CHECK_FALSE(p.conditioned_on([](const Bytes&) { return false; }).has_value());

  CHECK(p.to_json().find("value_hex") != std::string::npos);
  CHECK_THROWS(FinitePmf::from_atoms({{"a", Rat(-1, 2)}}));
}
