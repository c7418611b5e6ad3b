#include <cmath>

#include "doctest.h"
#include "pebble/errors.hpp"
#include "pebble/simulation.hpp"

using namespace pebble;

TEST_SUITE("simulation") {
  TEST_CASE("scenario constants") {
    Scenario scn;
    scn.p = 8;
    const Matrix s = scn.covariance().matrix();
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(s(i, i) == 1.0);
    CHECK(s(0, 1) == 0.5);
    CHECK(s(2, 5) == 0.125);
    CHECK(s(7, 0) == std::pow(0.5, 7));
    const Coefficients b8 = scn.beta_true();
    const double expected[] = {1.0, 0.5, -2.0, -0.75, 1.5, -1.0, 1.85, -1.6};
    for (int j = 0; j < 8; ++j) CHECK(b8[j] == expected[j]);
    scn.p = 3;
    CHECK(scn.beta_true().size() == 3);
    CHECK(scn.beta_true()[2] == -2.0);
  }

  TEST_CASE("scenario validation") {
    Scenario scn;
    scn.p = 9;
    CHECK_THROWS_AS(scn.validate(), Error);
    scn.p = 3;
    scn.B = 99;
    CHECK_THROWS_AS(scn.validate(), Error);
    scn.B = 100;
    scn.n = 3;
    CHECK_THROWS_AS(scn.validate(), Error);
    scn.n = 4;
    CHECK_NOTHROW(scn.validate());
  }

  TEST_CASE("extreme coordinates") {
    CHECK(extreme_coordinates(Coefficients{{1.0, 0.5, -2.0}}) == std::pair<Eigen::Index, Eigen::Index>{1, 2});
    Scenario scn;
    scn.p = 8;
    CHECK(extreme_coordinates(scn.beta_true()) == std::pair<Eigen::Index, Eigen::Index>{1, 2});
    CHECK(extreme_coordinates(Coefficients{{-1.0, 1.0, 1.0}}) == std::pair<Eigen::Index, Eigen::Index>{0, 0});
  }

  TEST_CASE("covariate design moments") {
    Scenario scn;
    scn.n = 100000;
    scn.p = 3;
    RandomStream rng(31);
    const SimulatedData sim = generate_dataset(scn, rng);
    const Matrix& x = sim.data.x();
    const Vector mean = x.colwise().mean();
    const Matrix centred = x.rowwise() - mean.transpose();
    const Matrix cov = centred.transpose() * centred / static_cast<double>(scn.n - 1);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(std::abs(mean[j]) < 0.01);
      CHECK(cov(j, j) == doctest::Approx(1.0).epsilon(0.02));
    }
    CHECK(cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1)) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(cov(0, 2) / std::sqrt(cov(0, 0) * cov(2, 2)) == doctest::Approx(0.25).epsilon(0.04));
    // Response rate matches the model average.
    double model = 0.0;
    for (Eigen::Index i = 0; i < scn.n; ++i) model += sigmoid(x.row(i).dot(sim.beta_true));
    CHECK(sim.data.y().mean() == doctest::Approx(model / scn.n).epsilon(0.01));
  }

  TEST_CASE("dataset generation is deterministic") {
    Scenario scn;
    RandomStream a(5), b(5);
    const SimulatedData da = generate_dataset(scn, a);
    const SimulatedData db = generate_dataset(scn, b);
    CHECK((da.data.x().array() == db.data.x().array()).all());
    CHECK((da.data.y().array() == db.data.y().array()).all());
  }

  TEST_CASE("single experiment smoke run") {
    Scenario scn;
    scn.reps = 1;
    scn.B = 200;
    const CoverageReport r = run_coverage_study(scn);
    CHECK(r.experiments_used == 1);
    CHECK(r.failed_experiments == 0);
    CHECK(r.min_index == 1);
    CHECK(r.max_index == 2);
    for (const MethodCoverage* m : {&r.pebble, &r.normal}) {
      for (double v : {m->region_lower, m->average.middle, m->average.upper, m->average.lower,
                       m->min_coord.middle, m->max_coord.upper}) {
        CHECK((v == 0.0 || v == 1.0 || (v > 0.0 && v < 1.0)));
      }
      CHECK(m->average.width > 0.0);
    }
  }

  TEST_CASE("coverage study is identical across thread counts") {
    Scenario scn;
    scn.reps = 6;
    scn.B = 150;
    scn.seed = 99;
    const CoverageReport one = run_coverage_study(scn);
    scn.threads = 4;
    const CoverageReport four = run_coverage_study(scn);
    CHECK(one.pebble.average.width == four.pebble.average.width);
    CHECK(one.pebble.average.middle == four.pebble.average.middle);
    CHECK(one.normal.average.width == four.normal.average.width);
    CHECK(one.pebble.region_lower == four.pebble.region_lower);
    CHECK(one.failed_replicates == four.failed_replicates);
    // Experiment e is fixed by (seed, e) alone.
    const ExperimentResult e3 = run_experiment(scn, 3);
    const ExperimentResult e3b = run_experiment(scn, 3);
    CHECK(e3.pebble.width == e3b.pebble.width);
  }
}
