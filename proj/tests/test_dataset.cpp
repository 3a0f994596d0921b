#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "subsel/dataset.hpp"

using namespace subsel;

namespace {

FeatureDataset labeled(std::vector<std::uint32_t> y, std::size_t classes) {
  const std::size_t n = y.size();
  std::vector<double> x(n, 1.0);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("img_" + std::to_string(i));
  LabelSet labels{std::move(y), {}};
  for (std::size_t c = 0; c < classes; ++c) labels.names.push_back(std::to_string(c));
  return FeatureDataset(n, 1, std::move(x), std::move(ids), std::move(labels));
}

}  // namespace

TEST_CASE("partition_by_label groups indices per class") {
  auto p = partition_by_label(labeled({0, 0, 1}, 2));
  CHECK(p.classes == std::vector<std::vector<Index>>{{0, 1}, {2}});

  p = partition_by_label(labeled({1, 0, 1, 0}, 2));
  CHECK(p.classes == std::vector<std::vector<Index>>{{1, 3}, {0, 2}});
}

TEST_CASE("partition_by_label rejects an empty declared class and missing labels") {
  try {
    partition_by_label(labeled({0, 0, 0}, 2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_class);
  }

  FeatureDataset unlabeled(2, 1, {1.0, 2.0}, {"a", "b"});
  try {
    partition_by_label(unlabeled);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_labels);
  }
}

TEST_CASE("partition covers the ground set exactly (random labelings)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t classes = 1 + rng() % 5;
    const std::size_t n = classes + rng() % 40;
    std::vector<std::uint32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::uint32_t>(i < classes ? i : rng() % classes);
    std::shuffle(y.begin(), y.end(), rng);
    auto p = partition_by_label(labeled(y, classes));
    std::vector<Index> all;
    for (const auto& cls : p.classes) {
      CHECK(std::is_sorted(cls.begin(), cls.end()));
      all.insert(all.end(), cls.begin(), cls.end());
    }
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == i);
  }
}

TEST_CASE("validate_dataset reports every violation") {
  FeatureDataset good(3, 2, {1, 2, 3, 4, 5, 6}, {"a", "b", "c"});
  CHECK(validate_dataset(good).ok());

  FeatureDataset nan(3, 2, {1, 2, 3, std::numeric_limits<double>::quiet_NaN(), 5, 6}, {"a", "b", "c"});
  auto report = validate_dataset(nan);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].kind == ValidationIssue::Kind::non_finite);
  CHECK(report.issues[0].row == 1);
  CHECK(report.issues[0].column == 1);
  CHECK(report.summary().find("row 1, column 1") != std::string::npos);

  FeatureDataset dup(3, 1, {1, 2, 3}, {"img_7", "x", "img_7"});
  report = validate_dataset(dup);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].kind == ValidationIssue::Kind::duplicate_id);
  CHECK(report.summary().find("img_7") != std::string::npos);

  report = validate_dataset(labeled({0, 0, 0}, 2));
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].kind == ValidationIssue::Kind::empty_class);
}

TEST_CASE("shape mismatches are rejected at construction") {
  CHECK_THROWS_AS(FeatureDataset(2, 2, {1, 2, 3}, {"a", "b"}), Error);
  CHECK_THROWS_AS(FeatureDataset(2, 1, {1, 2}, {"a"}), Error);
}

TEST_CASE("subset keeps rows, ids and class names") {
  auto ds = labeled({0, 1, 1, 0}, 2);
  std::vector<Index> rows{3, 1};
  auto sub = ds.subset(rows);
  CHECK(sub.n() == 2);
  CHECK(sub.ids() == std::vector<std::string>{"img_3", "img_1"});
  CHECK(sub.labels().values == std::vector<std::uint32_t>{0, 1});
  CHECK(sub.num_classes() == 2);
}

TEST_CASE("derived seeds are stable and distinct") {
  RngSeed s{42};
  CHECK(derive_seed(s, 0).value == derive_seed(s, 0).value);
  CHECK(derive_seed(s, 0).value != derive_seed(s, 1).value);
  auto a = make_rng(s);
  auto b = make_rng(s);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
}
