#include <doctest.h>

#include <cmath>
#include <random>

#include "cesaro/boundedness_lab.hpp"
#include "support.hpp"

using namespace cesaro;

namespace {

const Exponent kInf = Exponent::inf();
Exponent E(double v) { return Exponent::finite(v); }

SpacePair pair_of(const std::string& s, const std::string& t) {
  std::optional<double> a1, a2;
  SpacePair pair(parse_space(s, &a1), parse_space(t, &a2));
  pair.source_bergman_alpha = a1;
  pair.target_bergman_alpha = a2;
  return pair;
}

RulePrediction predict_for(const std::string& measure, double beta, const std::string& s, const std::string& t) {
  const auto mu = zoo_from_spec(measure);
  return predict(oracle_exponent(mu), beta, pair_of(s, t), &mu);
}

}  // namespace

TEST_SUITE("boundedness") {
  TEST_CASE("space parsing and aliases") {
    CHECK(parse_space("2,inf,0.5") == MixedNormParams(E(2), kInf, 0.5));
    std::optional<double> alpha;
    CHECK(parse_space("A:2,1", &alpha) == MixedNormParams(E(2), E(2), 1.0));
    CHECK(alpha == 1.0);
    CHECK(parse_space("Ainf:0.5") == korenblum_space(0.5));
    CHECK(bergman_space(4, 1) == MixedNormParams(E(4), E(4), 0.5));
    CHECK(space_to_string(parse_space("2,inf,0.5")) == "2,inf,0.5");
    CHECK(space_to_string(bergman_space(2, 1), 1.0) == "A:2,1");
    CHECK_THROWS(parse_space("2,2"));
    CHECK_THROWS(parse_space("2,2,-1"));
    CHECK(pair_of("2,2,1", "2,2,0.5").s_required(1.0) == doctest::Approx(1.5));
  }

  TEST_CASE("oracle examples") {
    const auto a = predict_for("lebesgue", 1.0, "2,2,1", "2,2,1");
    CHECK(a.rule == "R1");
    CHECK(a.predicted == Prediction::bounded);
    CHECK(a.s_required == doctest::Approx(1.0));
    const auto b = predict_for("power_carleson:0.5", 1.0, "2,2,1", "2,2,1");
    CHECK(b.predicted == Prediction::unbounded);
    const auto c = predict_for("lebesgue", 1.0, "2,inf,1", "2,2,1");
    CHECK(c.rule == "R7");
    CHECK(c.predicted == Prediction::unbounded);
    CHECK(predict_for("beta_weight:1.2", 1.0, "2,inf,1", "2,2,1").predicted == Prediction::bounded);
    CHECK(predict_for("dirac:0.5", 3.0, "2,2,1", "2,2,0.1").predicted == Prediction::bounded);
    // non-attained power law at the exact exponent
    CHECK(predict_for("log_perturbed:1,1", 1.0, "2,2,1", "2,2,1").predicted == Prediction::critical);
    CHECK(predict_for("log_perturbed:1,-1", 1.0, "2,2,1", "2,2,1").predicted == Prediction::bounded);
    // R6 and R7 need the measure
    const auto bare = predict(CarlesonExponent::finite(1.0), 1.0, pair_of("2,inf,1", "2,2,1"));
    CHECK(bare.predicted == Prediction::uncovered);
    CHECK_THROWS_AS(predict(CarlesonExponent::finite(1.0), 0.0, pair_of("2,2,1", "2,2,1")), std::domain_error);
  }

  TEST_CASE("R6 routes by alpha") {
    // beta != 1 with the sequence shape: alpha = beta + gamma - 1/p'
    const auto small = predict_for("beta_weight:2", 0.25, "2,inf,1", "2,2,1");
    CHECK(small.rule == "R6");
    CHECK(small.criterion.find("l^2") != std::string::npos);
    const auto large = predict_for("lebesgue", 1.5, "2,inf,1", "2,2,1");
    CHECK(large.rule == "R6");
    CHECK(large.predicted == Prediction::unbounded);
  }

  TEST_CASE("rules never overlap on a parameter sweep") {
    const double ps[] = {1, 2, 4, 0};
    const double qs[] = {1, 2, 0};
    const auto mu = zoo("dirac", {0.5});
    std::size_t covered = 0, total = 0;
    for (double p1 : ps) for (double p2 : ps) for (double q1 : qs) for (double q2 : qs) {
      for (double g1 : {0.5, 1.0}) for (double g2 : {0.5, 1.0, 2.0}) for (double beta : {0.5, 1.0, 2.0}) {
        const MixedNormParams s(p1 ? E(p1) : kInf, q1 ? E(q1) : kInf, g1);
        const MixedNormParams t(p2 ? E(p2) : kInf, q2 ? E(q2) : kInf, g2);
        // R6 would run the membership classifier; keep the sweep to the oracle table
        const auto r = predict(CarlesonExponent::finite(1.0), beta, SpacePair(s, t));
        ++total;
        covered += r.rule != "none";
      }
    }
    CHECK(total == 4 * 4 * 3 * 3 * 2 * 3 * 3);
    CHECK(covered > 0);
  }

  TEST_CASE("Bergman aliases predict like their translations") {
    for (const char* measure : {"lebesgue", "power_carleson:0.5", "dirac:0.5", "beta_weight:2"}) {
      for (double beta : {0.5, 1.0, 2.0}) {
        for (auto [s, t] : {std::pair{"A:2,1", "A:2,1"}, {"A:2,0", "A:2,2"}, {"A:4,1", "A:2,1"}, {"Ainf:1", "Ainf:0.5"}}) {
          const auto mu = zoo_from_spec(measure);
          const auto alias = pair_of(s, t);
          const auto a = predict(oracle_exponent(mu), beta, alias, &mu);
          const auto b = predict(oracle_exponent(mu), beta, alias.translated(), &mu);
          CHECK(a.predicted == b.predicted);
          if (!alias.bergman_alias() || b.rule == "none") {
            CHECK(a.rule == b.rule);
          } else {
            CHECK(a.rule == "R8");
            CHECK(a.via == b.rule);
          }
        }
      }
    }
  }

  TEST_CASE("test families") {
    const auto bk = test_family(FamilyKind::boundary_kernels, {E(2), E(2), 1.0}, {4, 5, 16});
    REQUIRE(bk.size() == 2);
    CHECK(bk[0].eta == doctest::Approx(2.0));
    CHECK(bk[0].a == doctest::Approx(1.0 - 1.0 / 16));
    CHECK(bk[0].degree == 16 * 16);
    const auto k = test_family(FamilyKind::kernels, {E(2), kInf, 1.0});
    CHECK(k.front().eta == doctest::Approx(1.5));
    CHECK(default_family(pair_of("2,inf,1", "2,inf,1")) == FamilyKind::kernels);
    CHECK(default_family(pair_of("2,2,1", "2,2,1")) == FamilyKind::boundary_kernels);
    const auto mono = test_family(FamilyKind::monomials, {E(2), E(2), 1.0}, {4, 10, 8});
    for (const auto& m : mono) {
      const std::size_t n = std::size_t{1} << m.index;
      CHECK(m.series[n] == 1.0);
      CHECK(m.degree == 8 * n);
    }
    CHECK(family_from_string("boundary_kernels") == FamilyKind::boundary_kernels);
    CHECK_THROWS_AS(family_from_string("x"), std::domain_error);
  }

  TEST_CASE("probe examples") {
    ProbeOptions options;
    options.family.k_max = 9;
    const auto pair = pair_of("2,inf,1", "2,inf,1");
    const auto leb = probe(zoo("lebesgue"), 1.0, pair, FamilyKind::kernels, options);
    CHECK(std::abs(leb.fit.slope) <= 0.05);
    CHECK(leb.diagnosis == Diagnosis::bounded);
    const auto pc = probe(zoo("power_carleson", {0.5}), 1.0, pair, FamilyKind::kernels, options);
    CHECK(pc.fit.slope == doctest::Approx(0.5).epsilon(0.2));
    CHECK(pc.diagnosis == Diagnosis::unbounded);
    const auto dirac = probe(zoo("dirac", {0.5}), 1.0, pair, FamilyKind::kernels, options);
    CHECK(std::abs(dirac.fit.slope) <= 0.05);
    const auto csv = probe_csv(leb);
    CHECK(csv.rfind("index,source_norm,target_norm,ratio\n", 0) == 0);
  }

  TEST_CASE("monomial lower bound probe") {
    const auto a = monomial_lower_bound_probe(zoo("power_carleson", {1.0}), 1.0, 2048);
    CHECK(a.stable);
    CHECK(a.min_ratio > 0.0);
    // the bound side decays faster than the mean, so the ratio only grows
    const auto d = monomial_lower_bound_probe(zoo("dirac", {0.5}), 1.0, 512);
    CHECK(d.min_ratio > 0.0);
    CHECK(d.min_ratio == d.ratio.front());
    const auto leb = monomial_lower_bound_probe(zoo("lebesgue"), 1.0, 16, 8);
    REQUIRE(leb.bound.size() == 1);
    CHECK(leb.bound[0] == doctest::Approx(9.0 / 17.0));
    CHECK_THROWS_AS(monomial_lower_bound_probe(zoo("lebesgue"), 1.0, 8, 8), std::domain_error);
  }

  TEST_CASE("membership crosscheck examples") {
    const auto a = fmu_membership_crosscheck(zoo("beta_weight", {1.5}), 0.5, {E(2), E(2), 1.0});
    CHECK(a.theta == doctest::Approx(-0.5));
    CHECK(a.theorem_applies);
    CHECK(a.membership.verdict == Membership::member);
    CHECK(a.moment.converged);
    CHECK(a.agree == true);
    const auto b = fmu_membership_crosscheck(zoo("lebesgue"), 0.0, {kInf, E(1), 1.0});
    CHECK(b.membership.verdict == Membership::member);
    CHECK(b.moment.converged);
    for (double alpha : {0.0, 0.5}) {
      const auto c = fmu_membership_crosscheck(zoo("dirac", {0.5}), alpha, {E(2), E(2), 1.0});
      CHECK(c.membership.verdict == Membership::member);
      CHECK_FALSE(c.contradiction);
    }
  }

  TEST_CASE("meanwise comparison") {
    const double gamma = 1.0;
    const std::size_t k_max = 8, N = 16 << k_max;
    const std::vector<std::pair<std::string, PowerSeries>> corpus = {{"kernel", make_kernel_K(gamma - 0.5, N)},
                                                                     {"unit", PowerSeries::unit(0)}};
    const auto r = mainprop_meanwise_check(zoo("lebesgue"), 1.0, gamma, E(2), corpus, 2, k_max);
    CHECK(r.bounded);
    for (const auto& row : r.ratios) {
      for (double v : row) CHECK(std::isfinite(v));
    }
    const auto d = mainprop_meanwise_check(zoo("dyadic_atomic", {1.0}), 0.5, gamma, kInf,
                                           {{"kernel", make_kernel_K(0.0, N)}}, 2, k_max);
    CHECK(d.bounded);
    CHECK_THROWS_AS(mainprop_meanwise_check(zoo("lebesgue"), 1.0, 1.0, E(3), corpus), std::domain_error);
  }

  TEST_CASE("released grid shape") {
    const auto grid = released_grid();
    CHECK(grid.size() == 40);
    for (const auto& c : grid) {
      const auto mu = zoo_from_spec(c.measure);
      const auto r = predict(oracle_exponent(mu), c.beta, c.pair, &mu);
      CHECK(r.rule == c.id.substr(0, 2));
      CHECK((r.predicted == Prediction::bounded || r.predicted == Prediction::unbounded));
    }
  }

  TEST_CASE("single case verdict round trips through JSON") {
    ProbeOptions options;
    options.family.k_max = 8;
    const auto v = evaluate_case(zoo("lebesgue"), 0.5, pair_of("2,2,1", "2,2,1"), std::nullopt, options);
    REQUIRE(v.agreement.has_value());
    CHECK(*v.agreement);
    const auto j = to_json(v);
    for (const char* key : {"measure", "beta", "source", "target", "predicted", "predicted_by", "slope", "agreement"}) {
      CHECK(j.contains(key));
    }
    const auto back = verdict_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
  }
}
