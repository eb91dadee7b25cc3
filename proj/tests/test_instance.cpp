#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "jobshop/error.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/rng.hpp"
#include "support/test_instances.hpp"

using namespace jobshop;
using jobshop::testing::make_i2;
using jobshop::testing::random_instance;

namespace {

const char* kI2Json = R"({
  "name": "I2",
  "machine_count": 2,
  "jobs": [
    {"weight": 1, "ops": [{"machine": 0, "duration": 3}, {"machine": 1, "duration": 2}]},
    {"weight": 1, "ops": [{"machine": 1, "duration": 2}, {"machine": 0, "duration": 4}]}
  ]
})";

}  // namespace

TEST_CASE("json parsing builds the documented instance") {
  const Instance inst = parse_instance(kI2Json, InstanceFormat::json);
  CHECK(inst.name() == "I2");
  CHECK(inst.machine_count() == 2);
  CHECK(inst.job_count() == 2);
  CHECK(inst.op_count() == 4);
  CHECK(inst.op(0).machine_id == 0);
  CHECK(inst.op(0).duration == 3);
  CHECK(inst.op(3).machine_id == 0);
  CHECK(inst.op(3).duration == 4);
  CHECK(inst.job(0).weight == Rational(1));
  CHECK(inst == make_i2());
}

TEST_CASE("zero duration is rejected as a semantic error") {
  const char* doc = R"({"machine_count": 1,
                        "jobs": [{"ops": [{"machine": 0, "duration": 0}]}]})";
  CHECK_THROWS_AS(parse_instance(doc, InstanceFormat::json), ValidationError);
}

TEST_CASE("malformed json reports a position") {
  try {
    parse_instance("{\n  \"machine_count\": 2,\n  }", InstanceFormat::json);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line >= 1);
  }
}

TEST_CASE("weights parse from integers, decimals and fraction strings") {
  const char* doc = R"({"machine_count": 1, "jobs": [
    {"weight": 2,     "ops": [{"machine": 0, "duration": 1}]},
    {"weight": 0.5,   "ops": [{"machine": 0, "duration": 1}]},
    {"weight": "3/7", "ops": [{"machine": 0, "duration": 1}]},
    {"ops": [{"machine": 0, "duration": 1}]}
  ]})";
  const Instance inst = parse_instance(doc, InstanceFormat::json);
  CHECK(inst.job(0).weight == Rational(2));
  CHECK(inst.job(1).weight == Rational(1, 2));
  CHECK(inst.job(2).weight == Rational(3, 7));
  CHECK(inst.job(3).weight == Rational(1));  // default
  CHECK_FALSE(inst.integral_weights());
}

TEST_CASE("taillard-style text parses into a rectangular instance") {
  const char* doc =
      "3 3\n"
      "0 5 1 3 2 4\n"
      "1 2 2 6 0 3\n"
      "2 4 0 2 1 1\n";
  const Instance inst = parse_instance(doc, InstanceFormat::taillard);
  CHECK(inst.job_count() == 3);
  CHECK(inst.machine_count() == 3);
  CHECK(inst.op_count() == 9);
  for (const Job& job : inst.jobs()) {
    CHECK(job.operations.size() == 3);
    CHECK(job.weight == Rational(1));
    // all machines distinct within a job in this rectangular body
    std::set<int> machines;
    for (const Operation& op : job.operations) machines.insert(op.machine_id);
    CHECK(machines.size() == 3);
  }
  CHECK(inst.op(inst.flat_id(1, 1)).duration == 6);
}

TEST_CASE("taillard parsing rejects short and trailing rows") {
  CHECK_THROWS_AS(parse_instance("2 2\n0 1\n", InstanceFormat::taillard),
                  ParseError);
  CHECK_THROWS_AS(
      parse_instance("1 1\n0 1 0 2\n", InstanceFormat::taillard), ParseError);
  CHECK_THROWS_AS(parse_instance("", InstanceFormat::taillard), ParseError);
}

TEST_CASE("serialize then parse is the identity") {
  const Instance i2 = make_i2({Rational(2), Rational(1, 3)});
  const std::string doc = serialize_instance(i2);
  const Instance back = parse_instance(doc, InstanceFormat::json);
  CHECK(back == i2);
  // one more cycle is byte-identical
  CHECK(serialize_instance(back) == doc);
}

TEST_CASE("empty name round-trips") {
  const Instance inst = testing::make_instance("", 1, {{{0, 5}}});
  const Instance back =
      parse_instance(serialize_instance(inst), InstanceFormat::json);
  CHECK(back.name().empty());
  CHECK(back == inst);
}

TEST_CASE("validate accepts i2 and recirculation") {
  CHECK(validate(make_i2()).empty());
  // same machine twice within one job is legal
  const Instance recirc = testing::make_instance(
      "recirc", 2, {{{0, 2}, {1, 1}, {0, 3}}});
  CHECK(validate(recirc).empty());
}

TEST_CASE("validate flags out-of-range machines and empty jobs") {
  const Instance bad_machine = testing::make_instance("bad", 2, {{{2, 1}}});
  CHECK(validate(bad_machine).size() == 1);

  const Instance empty_job = testing::make_instance("empty", 1, {{}});
  CHECK(validate(empty_job).size() == 1);

  const Instance bad_duration = testing::make_instance("dur", 1, {{{0, 0}}});
  CHECK(validate(bad_duration).size() == 1);
}

TEST_CASE("instance stats sum per-machine loads") {
  const InstanceStats stats = instance_stats(make_i2());
  CHECK(stats.job_count == 2);
  CHECK(stats.op_count == 4);
  CHECK(stats.ops_per_job_min == 2);
  CHECK(stats.ops_per_job_max == 2);
  REQUIRE(stats.machine_load.size() == 2);
  CHECK(stats.machine_load[0] == 7);  // 3 + 4
  CHECK(stats.machine_load[1] == 4);  // 2 + 2

  const InstanceStats single =
      instance_stats(testing::make_instance("s", 1, {{{0, 5}}}));
  CHECK(single.machine_load == std::vector<std::int64_t>{5});
}

TEST_CASE("flat ids are a bijection in (job, op_index) order") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng);
    std::int32_t expected = 0;
    for (std::int32_t j = 0; j < inst.job_count(); ++j)
      for (size_t k = 0; k < inst.job(j).operations.size(); ++k) {
        const std::int32_t f = inst.flat_id(j, static_cast<std::int32_t>(k));
        CHECK(f == expected);
        CHECK(inst.op(f).job_id == j);
        CHECK(inst.op(f).op_index == static_cast<std::int32_t>(k));
        ++expected;
      }
    CHECK(expected == inst.op_count());
  }
}
