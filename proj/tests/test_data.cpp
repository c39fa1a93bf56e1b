#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "closek/corruption.hpp"
#include "closek/errors.hpp"
#include "closek/generators.hpp"
#include "closek/preprocess.hpp"
#include "closek/table_io.hpp"
#include "oracles.hpp"

using namespace closek;

namespace {

std::vector<double> first_column(const LabeledDataset& d) {
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d.features(i, 0);
  return out;
}

LabeledDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_table(in, "t");
}

DatasetProblem problem_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DatasetError& e) {
    return e.problem();
  }
  FAIL("expected a dataset error");
  return DatasetProblem::Empty;
}

}  // namespace

TEST_CASE("example 1 construction") {
  const LabeledDataset d = gen_example1(1, 100.0);
  REQUIRE(d.size() == 4);
  CHECK(first_column(d) == std::vector<double>{-1.0, 1.0, 100.0, -100.0});
  CHECK(d.labels == std::vector<int>{-1, 1, -1, 1});
  CHECK_THROWS_AS(gen_example1(0, 100.0), ArgumentError);
  CHECK_THROWS_AS(gen_example1(50, 50.0), ArgumentError);
  const LabeledDataset big = gen_example1(50, 1000.0);
  CHECK(big.size() == 102);
  CHECK(oracle::threshold_errors(first_column(big), big.labels) == 2);
  CHECK(big == gen_example1(50, 1000.0));
}

TEST_CASE("example 2 construction") {
  const LabeledDataset d = gen_example2(1, 3);
  CHECK(d.size() == 2);
  const LabeledDataset big = gen_example2(100000, 5);
  CHECK(big.count_label(1) == 100000);
  const auto x = first_column(big);
  for (std::size_t i = 0; i < big.size(); ++i) {
    if (big.labels[i] == 1) CHECK((x[i] >= 0.0 && x[i] < 1.0));
    if (big.labels[i] == -1) CHECK((x[i] >= -1.0 && x[i] < 1.0));
  }
  const double best = 1.0 - static_cast<double>(threshold_scan(x, big.labels).errors) / 200000.0;
  CHECK(std::abs(best - 0.75) <= 0.01);
  // The optimum predicts positive to the right of 0.
  const auto scan = threshold_scan(x, big.labels);
  CHECK(scan.orientation == 1);
  CHECK(std::abs(scan.threshold) < 0.05);
  CHECK(gen_example2(50, 9) == gen_example2(50, 9));
  CHECK_FALSE(gen_example2(50, 9) == gen_example2(50, 10));
  CHECK_THROWS_AS(gen_example2(0, 1), ArgumentError);
}

TEST_CASE("figure1 scenarios") {
  for (Figure1Scenario s : {Figure1Scenario::Easy, Figure1Scenario::Imbalance, Figure1Scenario::ImbalanceOutlier,
                            Figure1Scenario::Ambiguous}) {
    const LabeledDataset d = gen_figure1(s, 2000, 1);
    CHECK(d.dim() == 2);
    CHECK(d.size() == 2000);
    CHECK_NOTHROW(d.validate());
    // u = 0 is optimal among thresholds on u, up to sampling noise where the classes overlap.
    std::size_t at_zero = 0;
    for (std::size_t i = 0; i < d.size(); ++i) at_zero += (d.features(i, 0) > 0 ? 1 : -1) != d.labels[i];
    const std::size_t best = oracle::threshold_errors(first_column(d), d.labels);
    if (s == Figure1Scenario::Ambiguous) {
      CHECK(at_zero <= best + d.size() / 100);
    } else {
      CHECK(at_zero == best);
    }
    CHECK(parse_figure1_scenario(to_string(s)) == s);
  }
  const auto easy = gen_figure1(Figure1Scenario::Easy, 500, 2);
  CHECK(oracle::threshold_errors(first_column(easy), easy.labels) == 0);
  const auto imb = gen_figure1(Figure1Scenario::Imbalance, 2000, 2);
  CHECK(imb.count_label(-1) == 9 * imb.count_label(1));
  const auto amb = gen_figure1(Figure1Scenario::Ambiguous, 100000, 3);
  const double acc = 1.0 - static_cast<double>(oracle::threshold_errors(first_column(amb), amb.labels)) / 100000.0;
  CHECK(std::abs(acc - 0.75) <= 0.01);
  CHECK(parse_figure1_scenario("imbalance+outlier") == Figure1Scenario::ImbalanceOutlier);
  CHECK_THROWS_AS(parse_figure1_scenario("spiral"), ArgumentError);
  CHECK_THROWS_AS(gen_figure1(Figure1Scenario::Easy, 3, 0), ArgumentError);
}

TEST_CASE("outlier injection") {
  LabeledDataset d;
  d.append(std::vector<double>{0.0, 0.0}, -1);
  d.append(std::vector<double>{1.0, 1.0}, 1);
  const auto out = inject_outliers(d, 0.5, 4);
  REQUIRE(out.size() == 3);
  const auto row = out.features.row(2);
  if (out.labels[2] == -1) {
    CHECK(std::vector<double>(row.begin(), row.end()) == std::vector<double>{10.0, 10.0});
  } else {
    CHECK(std::vector<double>(row.begin(), row.end()) == std::vector<double>{-9.0, -9.0});
  }
  const auto base = gen_figure1(Figure1Scenario::Easy, 1000, 1);
  const auto corrupted = inject_outliers(base, 0.05, 1);
  CHECK(corrupted.size() == 1050);
  CHECK(base.size() == 1000);  // input untouched
  LabeledDataset one_class;
  one_class.append(std::vector<double>{1.0}, 1);
  CHECK_THROWS_AS(inject_outliers(one_class, 0.5, 1), DatasetError);
  CHECK_THROWS_AS(inject_outliers(base, 0.0, 1), ArgumentError);
  CHECK_THROWS_AS(inject_outliers(base, 1.0, 1), ArgumentError);
}

TEST_CASE("collinear outlier is the source point") {
  LabeledDataset d;
  d.append(std::vector<double>{2.0}, -1);
  d.append(std::vector<double>{2.0}, 1);
  const auto out = inject_outliers(d, 0.5, 0);
  CHECK(out.features(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("imbalance amplification counts") {
  // 61 negatives, 39 positives -> 80% negatives.
  LabeledDataset d;
  for (int i = 0; i < 61; ++i) d.append(std::vector<double>{-static_cast<double>(i)}, -1);
  for (int i = 0; i < 39; ++i) d.append(std::vector<double>{static_cast<double>(i)}, 1);
  const auto out = amplify_imbalance(d, 0.8, 3);
  const std::size_t expected_added = static_cast<std::size_t>(std::ceil(0.8 * 39 / 0.2 - 1e-9)) - 61;
  CHECK(out.size() - d.size() == expected_added);
  const double frac = static_cast<double>(out.count_label(-1)) / static_cast<double>(out.size());
  CHECK(frac >= 0.8 - 1e-12);
  CHECK(frac < 0.8 + 1.0 / static_cast<double>(out.size()));
  CHECK(amplify_imbalance(out, 0.7, 3) == out);
  std::set<double> originals;
  for (int i = 0; i < 61; ++i) originals.insert(-static_cast<double>(i));
  for (std::size_t i = d.size(); i < out.size(); ++i) {
    CHECK(out.labels[i] == -1);
    CHECK(originals.count(out.features(i, 0)) == 1);
  }
  LabeledDataset positives;
  positives.append(std::vector<double>{1.0}, 1);
  CHECK_THROWS_AS(amplify_imbalance(positives, 0.8, 1), DatasetError);
  CHECK_THROWS_AS(amplify_imbalance(d, 0.5, 1), ArgumentError);
}

TEST_CASE("ambiguous copies") {
  const auto base = gen_figure1(Figure1Scenario::Easy, 1000, 4);
  const auto out = add_ambiguous(base, 0.1, 2);
  REQUIRE(out.size() == 1100);
  for (std::size_t i = 1000; i < 1100; ++i) {
    CHECK(out.labels[i] == 1);
    bool found = false;
    for (std::size_t j = 0; j < 1000 && !found; ++j) {
      found = base.labels[j] == -1 && std::equal(base.features.row(j).begin(), base.features.row(j).end(),
                                                 out.features.row(i).begin());
    }
    CHECK(found);
  }
  LabeledDataset positives;
  positives.append(std::vector<double>{1.0}, 1);
  CHECK_THROWS_AS(add_ambiguous(positives, 0.5, 1), DatasetError);
}

TEST_CASE("corruption dispatch") {
  const auto base = gen_figure1(Figure1Scenario::Easy, 100, 4);
  CHECK(apply_corruption(base, Corruption::Outliers, 0.0, 1) == base);
  CHECK(apply_corruption(base, Corruption::Ambiguous, 0.1, 1).size() == 110);
  CHECK(parse_corruption("imbalance") == Corruption::Imbalance);
  CHECK_THROWS_AS(parse_corruption("noise"), ArgumentError);
  CHECK(fraction_count(0.1, 1000) == 100);
  CHECK(fraction_count(0.05, 1000) == 50);
  CHECK(fraction_count(0.011, 100) == 2);
}

TEST_CASE("table parsing") {
  const auto d = parse("a,b,target\n1,2,0\n3,4,1\n5,6,0\n");
  CHECK(d.size() == 3);
  CHECK(d.dim() == 2);
  CHECK(d.labels == std::vector<int>{-1, 1, -1});
  CHECK(d.features(1, 1) == 4.0);
  CHECK(parse("a\tb\ttarget\n1\t2\t0\n3\t4\t1\n5\t6\t0\n") == d);
  const auto mid = parse("target,x\nyes,1\nno,2\n");
  CHECK(mid.labels == std::vector<int>{1, -1});
  CHECK(mid.dim() == 1);
  CHECK(parse("x,target\n1,-1\n2,+1\n").labels == std::vector<int>{-1, 1});
  CHECK(parse("x,target\r\n1,0\r\n\r\n2,1\r\n").size() == 2);
}

TEST_CASE("table errors are distinct") {
  CHECK(problem_of("") == DatasetProblem::EmptyFile);
  CHECK(problem_of("x,target\n") == DatasetProblem::EmptyFile);
  CHECK(problem_of("x,y\n1,0\n2,1\n") == DatasetProblem::MissingLabelColumn);
  CHECK(problem_of("x,x,target\n1,1,0\n2,2,1\n") == DatasetProblem::DuplicateHeader);
  CHECK(problem_of("x,target\nabc,0\n2,1\n") == DatasetProblem::NonNumericFeature);
  CHECK(problem_of("x,target\n1,0\n2,1\n3,2\n") == DatasetProblem::LabelClassCount);
  CHECK(problem_of("x,target\n1,0\n2,0\n") == DatasetProblem::LabelClassCount);
  CHECK(problem_of("x,target\n1,0,5\n2,1\n") == DatasetProblem::RaggedRow);
  CHECK(problem_of("x,target\ninf,0\n2,1\n") == DatasetProblem::NonFiniteFeature);
  CHECK_THROWS_AS(load_table("/nonexistent/file.csv"), IoError);
}

TEST_CASE("table round trip") {
  const auto d = gen_figure1(Figure1Scenario::Ambiguous, 50, 8);
  std::ostringstream out;
  write_table(out, d);
  std::istringstream in(out.str());
  auto back = parse_table(in, d.name);
  CHECK(back == d);
  std::ostringstream tsv;
  write_table(tsv, d, '\t');
  std::istringstream tin(tsv.str());
  CHECK(parse_table(tin, d.name) == d);
}

TEST_CASE("standardizer") {
  Matrix train(4, 2);
  const double values[4][2] = {{1, 5}, {2, 5}, {3, 5}, {4, 5}};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 2; ++j) train(i, j) = values[i][j];
  }
  const auto z = Standardizer::fit(train);
  const Matrix t = z.apply(train);
  double mean = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    mean += t(i, 0);
    sq += t(i, 0) * t(i, 0);
    CHECK(t(i, 1) == 0.0);
  }
  CHECK(std::abs(mean / 4) < 1e-10);
  CHECK(std::abs(sq / 4 - 1.0) < 1e-10);

  // Fit on one half, apply to the other: the transform is not refit.
  const auto data = gen_figure1(Figure1Scenario::Imbalance, 200, 1);
  std::vector<std::size_t> first, second;
  for (std::size_t i = 0; i < 200; ++i) (i % 2 == 0 ? first : second).push_back(i);
  const auto a = data.subset(first);
  const auto b = data.subset(second);
  const auto fit_a = Standardizer::fit(a.features);
  const auto fit_b = Standardizer::fit(b.features);
  CHECK_FALSE(fit_a.apply(b.features) == fit_b.apply(b.features));
  CHECK(fit_a.apply(b.features).rows() == 100);
  CHECK_THROWS_AS(fit_a.apply(Matrix(2, 3)), ArgumentError);
}

TEST_CASE("split sampling") {
  const auto s = sample_split(100, SplitSpec{});
  CHECK(s.train.size() == 50);
  CHECK(s.valid.size() == 25);
  CHECK(s.test.size() == 25);
  std::vector<std::size_t> all;
  all.insert(all.end(), s.train.begin(), s.train.end());
  all.insert(all.end(), s.valid.begin(), s.valid.end());
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 100; ++i) CHECK(all[i] == i);
  SplitSpec other;
  other.seed = 1;
  CHECK(sample_split(100, SplitSpec{}).train == s.train);
  CHECK_FALSE(sample_split(100, other).train == s.train);
  const auto odd = sample_split(7, SplitSpec{});
  CHECK(odd.train.size() == 3);
  CHECK(odd.valid.size() == 1);
  CHECK(odd.test.size() == 3);
  CHECK_THROWS_AS(sample_split(3, SplitSpec{}), ArgumentError);
}

TEST_CASE("threshold scan agrees with the brute-force oracle") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<double> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(u(rng) * 4.0) / 4.0;
      y[i] = u(rng) > 0.2 ? 1 : -1;
    }
    const auto scan = threshold_scan(x, y);
    CHECK(scan.errors == oracle::threshold_errors(x, y));
    std::size_t realized = 0;
    for (std::size_t i = 0; i < n; ++i) {
      realized += (scan.orientation * (x[i] - scan.threshold) > 0 ? 1 : -1) != y[i];
    }
    CHECK(realized == scan.errors);
  }
}

TEST_CASE("dataset validation") {
  LabeledDataset d;
  CHECK_THROWS_AS(d.validate(), DatasetError);
  d.append(std::vector<double>{1.0}, 1);
  CHECK_NOTHROW(d.validate());
  d.labels[0] = 0;
  CHECK_THROWS_AS(d.validate(), DatasetError);
  CHECK_THROWS_AS(d.append(std::vector<double>{1.0, 2.0}, 1), ArgumentError);
}
