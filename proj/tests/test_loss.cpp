#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "closek/errors.hpp"
#include "closek/loss.hpp"
#include "oracles.hpp"

using namespace closek;

TEST_CASE("individual loss values") {
  const auto logistic = IndividualLoss::logistic();
  const auto hinge = IndividualLoss::hinge();
  CHECK(logistic.threshold() == std::log(2.0));
  CHECK(hinge.threshold() == 1.0);
  CHECK(logistic.value(1, 0.0) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(hinge.value(1, 1.0) == 0.0);
  CHECK(logistic.value(1, 1.0) == doctest::Approx(std::log1p(std::exp(-1.0))).epsilon(1e-12));
  CHECK(logistic.value(1, 1.0) == doctest::Approx(0.313262).epsilon(1e-6));
}

TEST_CASE("logistic is stable at large margins") {
  const auto logistic = IndividualLoss::logistic();
  CHECK(logistic.value(1, -1000.0) == doctest::Approx(1000.0));
  CHECK(logistic.value(-1, 1000.0) == doctest::Approx(1000.0));
  const double tiny = logistic.value(1, 1000.0);
  CHECK(std::isfinite(tiny));
  CHECK(tiny >= 0.0);
  CHECK(tiny < 1e-300);
}

TEST_CASE("individual loss derivatives") {
  const auto logistic = IndividualLoss::logistic();
  const auto hinge = IndividualLoss::hinge();
  CHECK(logistic.derivative(1, 0.0) == doctest::Approx(-0.5));
  CHECK(hinge.derivative(1, 2.0) == 0.0);
  CHECK(hinge.derivative(-1, 0.5) == 1.0);
  CHECK(hinge.derivative(1, 1.0) == 0.0);   // kink
  CHECK(hinge.derivative(-1, -1.0) == 0.0); // kink, other label
  CHECK(hinge.derivative(1, 0.0) == -1.0);
}

TEST_CASE("loss below threshold iff margin positive") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> score(-5.0, 5.0);
  for (const auto& loss : {IndividualLoss::logistic(), IndividualLoss::hinge()}) {
    for (int i = 0; i < 2000; ++i) {
      const int y = i % 2 == 0 ? 1 : -1;
      const double s = score(rng);
      const double l = loss.value(y, s);
      CHECK(l >= 0.0);
      CHECK(loss.is_correct(l) == (y * s > 0));
    }
    CHECK_FALSE(loss.is_correct(loss.value(1, 0.0)));  // margin 0 counts as an error
  }
}

TEST_CASE("individual loss errors") {
  const auto logistic = IndividualLoss::logistic();
  CHECK_THROWS_AS(logistic.value(1, std::nan("")), DivergenceError);
  CHECK_THROWS_AS(logistic.value(1, INFINITY), DivergenceError);
  CHECK_THROWS_AS(logistic.value(0, 1.0), ArgumentError);
  CHECK_THROWS_AS(logistic.derivative(2, 1.0), ArgumentError);
  CHECK(parse_loss_kind("hinge") == LossKind::Hinge);
  CHECK(to_string(LossKind::Logistic) == "logistic");
  CHECK_THROWS_AS(parse_loss_kind("squared"), ArgumentError);
}

TEST_CASE("select_close_k examples") {
  const double t = std::log(2.0);
  const std::vector<double> losses{0.1, 0.8, 0.693147, 2.0};
  CHECK(select_close_k(losses, t, 2) == std::vector<std::size_t>{2, 1});
  CHECK(select_close_k(std::vector<double>{t, t, t}, t, 2) == std::vector<std::size_t>{0, 1});
  CHECK(select_close_k(std::vector<double>{5.0}, t, 1) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(select_close_k(losses, t, 5), ArgumentError);
  CHECK_THROWS_AS(select_close_k(losses, t, 0), ArgumentError);
  CHECK_THROWS_AS(select_close_k(std::vector<double>{}, t, 1), ArgumentError);
}

TEST_CASE("close_k_value examples") {
  const double t = std::log(2.0);
  const std::vector<double> losses{0.1, 0.8, 0.693147, 2.0};
  CHECK(close_k_value(losses, t, 2, 10.0) == doctest::Approx(11.493147));
  CHECK(close_k_value(losses, t, 4, 10.0) == doctest::Approx(0.1 + 0.8 + 0.693147 + 2.0));
  const std::vector<double> correct{0.1, 0.3, 0.5};
  CHECK(close_k_value(correct, t, 1, 10.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(close_k_value(losses, t, 2, 1.0), ArgumentError);
}

TEST_CASE("aggregate values and masks") {
  const std::vector<double> l{3, 1, 2};
  const double t = 1.0;
  auto r = aggregate_value_and_mask(AggregateLossSpec::average_top_k(2), l, t);
  CHECK(r.value == doctest::Approx(2.5));
  CHECK(r.mask == std::vector<bool>{true, false, true});
  r = aggregate_value_and_mask(AggregateLossSpec::top_k(1), l, t);
  CHECK(r.value == 3.0);
  CHECK(r.mask == std::vector<bool>{true, false, false});
  r = aggregate_value_and_mask(AggregateLossSpec::top_k(2), l, t);
  CHECK(r.value == 2.0);
  CHECK(r.selected == std::vector<std::size_t>{2});
  r = aggregate_value_and_mask(AggregateLossSpec::average(), l, t);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.mask == std::vector<bool>(3, true));
  CHECK(r.big_m == 0.0);
  r = aggregate_value_and_mask(AggregateLossSpec::close_k(1), l, t);
  CHECK(r.selected == std::vector<std::size_t>{1});
  CHECK(r.big_m == doctest::Approx(30.0));
  CHECK(r.value == doctest::Approx(1.0 + 2 * 30.0));
  CHECK_THROWS_AS(aggregate_value_and_mask(AggregateLossSpec::close_k(4), l, t), ArgumentError);
  CHECK_THROWS_AS(aggregate_value_and_mask(AggregateLossSpec::top_k(0), l, t), ArgumentError);
}

TEST_CASE("big M follows the batch") {
  CHECK(big_m(std::vector<double>{0.1, 0.2}) == 10.0);
  CHECK(big_m(std::vector<double>{0.1, 7.0}) == 70.0);
}

TEST_CASE("mask cardinality and consistency") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<double> l(n);
    for (double& v : l) v = u(rng);
    const std::size_t k = 1 + rng() % n;
    for (const auto& spec : {AggregateLossSpec::average(), AggregateLossSpec::top_k(k),
                             AggregateLossSpec::average_top_k(k), AggregateLossSpec::close_k(k)}) {
      const auto r = aggregate_value_and_mask(spec, l, 1.0);
      const std::size_t expected = spec.kind == AggregateKind::Average ? n
                                   : spec.kind == AggregateKind::TopK  ? 1
                                                                       : k;
      CHECK(r.selected.size() == expected);
      std::size_t on = 0;
      for (std::size_t i = 0; i < n; ++i) on += r.mask[i] ? 1 : 0;
      CHECK(on == expected);
      for (std::size_t i : r.selected) CHECK(r.mask[i]);
    }
  }
}

TEST_CASE("close-k selection is a monotone prefix and stable") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> l(n);
    for (double& v : l) v = std::round(u(rng) * 10.0) / 10.0;  // plenty of ties
    const auto full = select_close_k(l, 0.7, n);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto part = select_close_k(l, 0.7, k);
      CHECK(std::equal(part.begin(), part.end(), full.begin()));
      CHECK(part == select_close_k(l, 0.7, k));
    }
  }
}

TEST_CASE("close-n reduces to the sum and n x the average gradient") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<double> l(n);
    double sum = 0.0;
    for (double& v : l) sum += (v = u(rng));
    const auto close = aggregate_value_and_mask(AggregateLossSpec::close_k(n), l, 1.0, 100.0);
    const auto avg = aggregate_value_and_mask(AggregateLossSpec::average(), l, 1.0);
    CHECK(close.value == doctest::Approx(sum));
    CHECK(close.mask == std::vector<bool>(n, true));
    const auto wc = aggregate_weights(AggregateLossSpec::close_k(n), close, n);
    const auto wa = aggregate_weights(AggregateLossSpec::average(), avg, n);
    // Compare per example: weights are indexed like `selected`.
    std::vector<double> gc(n), ga(n);
    for (std::size_t s = 0; s < n; ++s) {
      gc[close.selected[s]] = wc[s];
      ga[avg.selected[s]] = wa[s];
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(gc[i] == doctest::Approx(static_cast<double>(n) * ga[i]));
  }
}

TEST_CASE("close-k value agrees with the definition oracle") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 25;
    std::vector<double> l(n);
    for (double& v : l) v = u(rng);
    const double m = big_m(l);
    for (std::size_t k = 1; k <= n; ++k) {
      CHECK(close_k_value(l, 1.0, k, m) == doctest::Approx(oracle::close_k(l, 1.0, k, m)));
    }
  }
}

TEST_CASE("count_incorrect uses the boundary convention") {
  CHECK(count_incorrect(std::vector<double>{0.5, 1.0, 1.5}, 1.0) == 2);
}
