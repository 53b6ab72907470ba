#include <doctest.h>

#include "fixtures.hpp"
#include "tgs/census.hpp"
#include "tgs/fuzzy.hpp"

using namespace tgs;
using namespace tgs::fixtures;

TEST_CASE("weight schemes") {
  SpectrumData b = spectrum(boolean2(), Absorption::Literal);
  WeightedSpectrum uni = assign_weights(b, "uniform");
  CHECK(uni.weights == std::vector<Rat>{Rat::one()});
  // the sole proper ideal {0} opens nothing, so the frequency is 0/1
  WeightedSpectrum freq = assign_weights(b, "frequency");
  CHECK(freq.weights == std::vector<Rat>{Rat::zero()});

  SpectrumData c = spectrum(chain3(), Absorption::Literal);
  WeightedSpectrum cf = assign_weights(c, "frequency");
  CHECK(cf.weights == std::vector<Rat>{Rat(1, 2), Rat::zero()});

  SpectrumData bb = spectrum(bool_pair(), Absorption::Literal);
  std::map<int, Rat> file{{0, Rat::one()}, {1, Rat(3, 5)}};
  WeightedSpectrum wf = assign_weights(bb, "file", &file);
  CHECK(wf.weights == std::vector<Rat>{Rat::one(), Rat(3, 5)});

  std::map<int, Rat> missing{{0, Rat::one()}};
  CHECK_THROWS_AS(assign_weights(bb, "file", &missing), StructuralError);
  std::map<int, Rat> oob{{0, Rat::one()}, {1, Rat(7, 5)}};
  CHECK_THROWS_AS(assign_weights(bb, "file", &oob), StructuralError);
}

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rat("0.6") == Rat(3, 5));
  CHECK(parse_rat("3/5") == Rat(3, 5));
  CHECK(parse_rat("1") == Rat::one());
  CHECK(parse_rat("0.25") == Rat(1, 4));
  CHECK_THROWS_AS(parse_rat("x"), StructuralError);
  CHECK_THROWS_AS(Rat(1, 0), StructuralError);
}

TEST_CASE("fuzzy open validation") {
  GammaSemiring bb = bool_pair();
  SpectrumData spec = spectrum(bb, Absorption::Literal);
  REQUIRE(spec.prime_count() == 2);

  // indicator of the whole space
  FuzzyOpen ind = fuzzy_open_from_points(bb, spec, {Rat::one(), Rat::one()});
  CHECK(validate_fuzzy_open(bb, spec, ind).pass);

  // graded cover leg: full grade at one point, 7/10 at the other
  FuzzyOpen mu1 = fuzzy_open_from_points(bb, spec, {Rat::one(), Rat(7, 10)});
  FuzzyOpenReport rep = validate_fuzzy_open(bb, spec, mu1);
  CHECK(rep.pass);

  // crafted violation: the whole space graded below one of its parts
  FuzzyOpen bad = mu1;
  bad.values[full_mask(bb.n)] = Rat(1, 2);
  FuzzyOpenReport brep = validate_fuzzy_open(bb, spec, bad);
  CHECK(!brep.pass);
  CHECK(!brep.violations.empty());
}

TEST_CASE("weighted covering diagnostics") {
  GammaSemiring bb = bool_pair();
  SpectrumData spec = spectrum(bb, Absorption::Literal);
  Mask whole = full_mask(bb.n);

  // every trivial covering is a covering
  WeightedCover trivial_cover{whole, {{whole, Rat::one()}}};
  CHECK(is_weighted_covering(spec, trivial_cover).valid);

  // correct union but weights summing to 9/10
  WeightedCover light{whole,
                      {{spec.primes[0], Rat(1, 2)},
                       {spec.primes[1], Rat(2, 5)}}};
  CoverReport lr = is_weighted_covering(spec, light);
  CHECK(lr.union_ok);
  CHECK(!lr.sum_ok);
  CHECK(!lr.valid);
  CHECK(lr.weight_sum == Rat(9, 10));

  // a member short of the union names the missing prime
  WeightedCover half{whole, {{spec.primes[0], Rat::one()}}};
  CoverReport hr = is_weighted_covering(spec, half);
  CHECK(!hr.union_ok);
  CHECK(hr.missing == 0x1);  // D(p1) = {p2}; prime 0 is never opened

  // adding members can only help
  WeightedCover grown = light;
  grown.members.emplace_back(whole, Rat(1, 5));
  CHECK(is_weighted_covering(spec, grown).valid);
}

TEST_CASE("threshold closures") {
  GammaSemiring bb = bool_pair();
  SpectrumData spec = spectrum(bb, Absorption::Literal);
  std::map<int, Rat> file{{0, Rat::one()}, {1, Rat(3, 5)}};
  WeightedSpectrum w = assign_weights(spec, "file", &file);

  // D(p2) = {p1}; p1 has weight 1 >= 7/10
  Mask p2 = spec.primes[1];
  CHECK(fuzzy_closure(spec, p2, Rat(7, 10), w) == 0x1);
  // at threshold 0 the closure is the crisp open
  for (std::size_t i = 0; i < spec.proper_ideals.size(); ++i)
    CHECK(fuzzy_closure(spec, spec.proper_ideals[i], Rat::zero(), w) ==
          spec.d_sets[i]);
  CHECK_THROWS_AS(fuzzy_closure(spec, p2, Rat(3, 2), w), PreconditionError);
}

TEST_CASE("closures shrink as the threshold grows and stay inside the open") {
  for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    for (const auto& t : enumerate_models(n, m).models) {
      SpectrumData spec = spectrum(t, Absorption::Literal);
      WeightedSpectrum w = assign_weights(spec, "frequency");
      const Rat steps[4] = {Rat::zero(), Rat(1, 3), Rat(1, 2), Rat::one()};
      for (std::size_t i = 0; i < spec.proper_ideals.size(); ++i) {
        Mask prev = ~Mask{0};
        for (const Rat& th : steps) {
          Mask cl = fuzzy_closure(spec, spec.proper_ideals[i], th, w);
          CHECK((cl & ~spec.d_sets[i]) == 0);
          CHECK((cl & ~prev) == 0);  // larger threshold, smaller closure
          prev = cl;
        }
        CHECK(fuzzy_closure(spec, spec.proper_ideals[i], Rat::zero(), w) ==
              spec.d_sets[i]);
      }
    }
  }
}

TEST_CASE("unit weights reduce to the crisp picture") {
  for (const auto& t : {boolean2(), bool_pair(), chain3(), mod3_prod()}) {
    SpectrumData spec = spectrum(t, Absorption::Literal);
    CrispReductionReport rep = crisp_reduction_check(t, spec);
    CHECK(rep.pass);
    CHECK(rep.mismatches.empty());
  }
}

TEST_CASE("weighted stalks") {
  GammaSemiring bb = bool_pair();
  SpectrumData spec = spectrum(bb, Absorption::Literal);
  std::map<int, Rat> file{{0, Rat::one()}, {1, Rat::zero()}};
  WeightedSpectrum w = assign_weights(spec, "file", &file);
  WeightedStalk visible = weighted_stalk(bb, spec, 0, w);
  CHECK(visible.visible);
  CHECK(visible.confidence == Rat::one());
  CHECK(visible.stalk.quotient.n == 2);
  WeightedStalk hidden = weighted_stalk(bb, spec, 1, w);
  CHECK(!hidden.visible);
  CHECK(hidden.stalk.quotient.n == 1);
}
