#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "jobshop/error.hpp"
#include "jobshop/harness.hpp"
#include "jobshop/rng.hpp"
#include "support/brute_force.hpp"
#include "support/test_instances.hpp"

using namespace jobshop;
using jobshop::testing::brute_force_optimum;
using jobshop::testing::make_i2;
using jobshop::testing::min_over_relative_schedules;
using jobshop::testing::random_tiny_instance;

TEST_CASE("oracle solves the documented tiny cases") {
  const OracleResult i2 = oracle_exact(make_i2());
  CHECK(i2.objective == Rational(12));
  CHECK(validate_schedule(i2.schedule, make_i2()).empty());
  CHECK(objective_weighted_completion(i2.schedule, make_i2()) == Rational(12));

  // single job: weight * total work
  const Instance single =
      testing::make_instance("one", 2, {{{0, 3}, {1, 4}}}, {Rational(2)});
  CHECK(oracle_exact(single).objective == Rational(14));

  // disjoint machines: no contention, sum of weighted durations
  const Instance disjoint = testing::make_instance(
      "disjoint", 3, {{{0, 4}}, {{1, 6}}, {{2, 9}}},
      {Rational(1), Rational(2), Rational(1, 2)});
  CHECK(oracle_exact(disjoint).objective ==
        Rational(4) + Rational(12) + Rational(9, 2));
}

TEST_CASE("oracle refuses instances above the cap") {
  const Instance big = testing::make_instance(
      "big", 2, {{{0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, 1}},
                 {{1, 1}, {0, 1}, {1, 1}, {0, 1}, {1, 1}}});
  CHECK(big.op_count() == 10);
  CHECK_THROWS_AS(oracle_exact(big), ValidationError);
  CHECK_NOTHROW(oracle_exact(big, 10));
}

TEST_CASE("pruned search equals the exhaustive enumeration") {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst =
        random_tiny_instance(rng, 3, 7, 10, /*random_weights=*/trial % 2 == 1);
    const OracleResult pruned = oracle_exact(inst);
    CHECK(pruned.objective == brute_force_optimum(inst));
    CHECK(validate_schedule(pruned.schedule, inst).empty());
    CHECK(objective_weighted_completion(pruned.schedule, inst) ==
          pruned.objective);
  }
}

TEST_CASE("dispatch-sequence and relative-schedule minima coincide") {
  Rng rng(73);
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = random_tiny_instance(rng, 3, 7, 8);
    CHECK(min_over_relative_schedules(inst) == brute_force_optimum(inst));
    CHECK(oracle_exact(inst).objective == min_over_relative_schedules(inst));
  }
}

TEST_CASE("method ids are stable and descriptive") {
  CHECK(MethodSpec::baseline(OpRule::spt).id() == "pdr:SPT");
  CHECK(MethodSpec::baseline(JobRule::fifo).id() == "pdr:FIFO_J");
  CHECK(MethodSpec::oracle().id() == "oracle");
  SearchConfig sc;
  sc.max_iterations = 500;
  const std::string id = MethodSpec::mcts_method(preset("4.1"), sc).id();
  CHECK(id.find("mcts:4.1") == 0);
  CHECK(id.find(":k30") != std::string::npos);
  CHECK(id.find(":i500") != std::string::npos);
}

TEST_CASE("run batch produces one record per combination and resumes") {
  const auto csv_path =
      std::filesystem::temp_directory_path() / "jobshop-batch-test.csv";
  std::filesystem::remove(csv_path);

  const std::vector<Instance> instances = {make_i2(),
                                           testing::make_instance(
                                               "second", 2,
                                               {{{0, 2}, {1, 3}}, {{1, 4}}})};
  SearchConfig sc;
  sc.max_iterations = 40;
  const std::vector<MethodSpec> methods = {
      MethodSpec::baseline(OpRule::spt),
      MethodSpec::mcts_method(preset("1.4"), sc),
      MethodSpec::oracle(),
  };

  const auto records = run_batch(instances, methods, {0}, csv_path);
  CHECK(records.size() == 6);

  // oracle lower-bounds every other record on the same instance
  for (const RunRecord& r : records) {
    if (r.method == "oracle") continue;
    for (const RunRecord& oracle_rec : records)
      if (oracle_rec.method == "oracle" && oracle_rec.instance == r.instance)
        CHECK(r.objective >= oracle_rec.objective);
  }

  // resume: nothing new to do
  const auto again = run_batch(instances, methods, {0}, csv_path);
  CHECK(again.empty());

  // file round-trips through the parser
  std::ifstream in(csv_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto parsed = records_from_csv(buffer.str());
  CHECK(parsed.size() == 6);
  for (size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].key == records[i].key);
    CHECK(parsed[i].objective == records[i].objective);
  }
  std::filesystem::remove(csv_path);
}

TEST_CASE("concurrent batches produce the same record set") {
  const auto csv_path =
      std::filesystem::temp_directory_path() / "jobshop-batch-mt.csv";
  std::filesystem::remove(csv_path);
  Rng rng(83);
  std::vector<Instance> instances;
  for (int i = 0; i < 4; ++i)
    instances.push_back(random_tiny_instance(rng, 3, 6, 9));
  std::vector<MethodSpec> methods;
  for (const OpRule r : all_op_rules())
    methods.push_back(MethodSpec::baseline(r));

  const auto sequential = run_batch(instances, methods, {0, 1}, {});
  const auto threaded = run_batch(instances, methods, {0, 1}, csv_path, 4);
  REQUIRE(sequential.size() == threaded.size());

  auto key_of = [](const RunRecord& r) { return r.key + "=" + to_string(r.objective); };
  std::set<std::string> a, b;
  for (const RunRecord& r : sequential) a.insert(key_of(r));
  for (const RunRecord& r : threaded) b.insert(key_of(r));
  CHECK(a == b);

  // the CSV written under concurrency parses back completely
  std::ifstream in(csv_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(records_from_csv(buffer.str()).size() == sequential.size());
  std::filesystem::remove(csv_path);
}

TEST_CASE("csv serialization round-trips rational objectives") {
  RunRecord r;
  r.key = "abc";
  r.instance = "i";
  r.method = "pdr:SPT";
  r.seed = 3;
  r.objective = Rational(47, 4);
  r.normalized_reward = 0.625;
  r.wall_time_ms = 1.5;
  const auto parsed = records_from_csv(records_to_csv({r}));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].objective == Rational(47, 4));
  CHECK(parsed[0].seed == 3);
  CHECK(parsed[0].normalized_reward == doctest::Approx(0.625));
}

TEST_CASE("best-of-seeds aggregation keeps the minimum") {
  RunRecord a;
  a.instance = "i";
  a.method = "m";
  a.seed = 0;
  a.objective = Rational(10);
  RunRecord b = a;
  b.seed = 1;
  b.objective = Rational(8);
  RunRecord c = a;
  c.instance = "j";
  c.objective = Rational(3);
  const auto best = aggregate_best({a, b, c});
  REQUIRE(best.size() == 2);
  CHECK(best[0].objective == Rational(8));
  CHECK(best[1].objective == Rational(3));
}

namespace {

RunRecord record_of(const std::string& instance, const std::string& method,
                    const Rational& objective) {
  RunRecord r;
  r.instance = instance;
  r.method = method;
  r.objective = objective;
  return r;
}

}  // namespace

TEST_CASE("performance profiles reproduce the worked example") {
  // method a scores [10, 20], method b scores [12, 18] on two instances
  const std::vector<RunRecord> records = {
      record_of("i1", "a", Rational(10)), record_of("i2", "a", Rational(20)),
      record_of("i1", "b", Rational(12)), record_of("i2", "b", Rational(18))};
  const auto curves = performance_profiles(records);
  REQUIRE(curves.size() == 2);
  const ProfileCurve& a = curves[0];
  const ProfileCurve& b = curves[1];
  CHECK(a.method == "a");

  CHECK(a.value_at(1.0) == doctest::Approx(0.5));
  CHECK(b.value_at(1.0) == doctest::Approx(0.5));
  CHECK(a.value_at(1.15) == doctest::Approx(1.0));  // 20/18 ~ 1.111
  CHECK(b.value_at(1.15) == doctest::Approx(0.5));
  CHECK(a.value_at(1.2) == doctest::Approx(1.0));
  CHECK(b.value_at(1.2) == doctest::Approx(1.0));

  REQUIRE(a.points.size() == 2);
  CHECK(a.points[1].first == doctest::Approx(20.0 / 18.0));
}

TEST_CASE("single and dominated methods sit at the extremes") {
  const auto single =
      performance_profiles({record_of("i1", "only", Rational(10)),
                            record_of("i2", "only", Rational(4))});
  REQUIRE(single.size() == 1);
  CHECK(single[0].value_at(1.0) == doctest::Approx(1.0));

  const auto two = performance_profiles(
      {record_of("i1", "good", Rational(10)), record_of("i1", "bad", Rational(11)),
       record_of("i2", "good", Rational(5)), record_of("i2", "bad", Rational(9))});
  CHECK(two[1].method == "bad");
  CHECK(two[1].value_at(1.0) == doctest::Approx(0.0));
}

TEST_CASE("profiles validate their preconditions") {
  CHECK_THROWS_AS(performance_profiles({}), ValidationError);
  CHECK_THROWS_AS(
      performance_profiles({record_of("i", "m", Rational(1)),
                            record_of("i", "m", Rational(2))}),
      ValidationError);
  CHECK_THROWS_AS(
      performance_profiles({record_of("i1", "m", Rational(1)),
                            record_of("i2", "n", Rational(2))}),
      ValidationError);  // missing coverage
}

TEST_CASE("random profile curves are monotone steps ending at one") {
  Rng rng(79);
  for (int trial = 0; trial < 40; ++trial) {
    const int instances = static_cast<int>(rng.uniform_int(1, 6));
    const int methods = static_cast<int>(rng.uniform_int(1, 5));
    std::vector<RunRecord> records;
    for (int i = 0; i < instances; ++i)
      for (int m = 0; m < methods; ++m)
        records.push_back(record_of("i" + std::to_string(i),
                                    "m" + std::to_string(m),
                                    Rational(rng.uniform_int(1, 40))));
    const auto curves = performance_profiles(records);
    double best_fraction_at_one = 0;
    for (const ProfileCurve& curve : curves) {
      REQUIRE_FALSE(curve.points.empty());
      double prev_ratio = 0, prev_y = 0;
      for (const auto& [ratio, y] : curve.points) {
        CHECK(ratio >= 1.0);
        CHECK(ratio > prev_ratio);
        CHECK(y > prev_y);
        CHECK(y <= 1.0);
        prev_ratio = ratio;
        prev_y = y;
      }
      CHECK(curve.points.back().second == doctest::Approx(1.0));
      best_fraction_at_one += curve.value_at(1.0);
    }
    // at least one method is best on every instance
    CHECK(best_fraction_at_one >= 1.0 - 1e-9);
  }
}

TEST_CASE("summaries average per method and sort ascending") {
  const auto rows = summarize({record_of("i1", "m", Rational(10)),
                               record_of("i2", "m", Rational(20)),
                               record_of("i1", "n", Rational(12))});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "n");
  CHECK(rows[0].mean_objective == Rational(12));
  CHECK(rows[1].mean_objective == Rational(15));
  CHECK(rows[1].runs == 2);

  const std::string csv = summary_to_csv(rows, 1.0);
  CHECK(csv.find("n,12,1") != std::string::npos);
  const std::string scaled = summary_to_csv(rows, 100.0);
  CHECK(scaled.find("n,0.12,1") != std::string::npos);

  CHECK_THROWS_AS(summarize({}), ValidationError);
}

TEST_CASE("solve json is reproducible without timing") {
  const Instance i2 = make_i2();
  SearchConfig sc;
  sc.max_iterations = 60;
  sc.seed = 11;
  const std::string a = solve_to_json(i2, preset("1.4"), sc, false);
  const std::string b = solve_to_json(i2, preset("1.4"), sc, false);
  CHECK(a == b);
  CHECK(a.find("wall_time_ms") == std::string::npos);
  CHECK(a.find("\"objective\": 12") != std::string::npos);
  const std::string timed = solve_to_json(i2, preset("1.4"), sc, true);
  CHECK(timed.find("wall_time_ms") != std::string::npos);
}
