#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace testing;

TEST_CASE("check ids are fixed and ordered") {
  const auto& ids = verify_check_ids();
  REQUIRE(ids.size() == 17);
  for (int i = 0; i < 16; ++i) {
    char expected[4];
    std::snprintf(expected, sizeof expected, "P%02d", i + 1);
    CHECK(ids[static_cast<std::size_t>(i)].first == expected);
  }
  CHECK(ids.back().first == "C01");
  CHECK(ids[5].second == "thm3.2ii-counterexample-residual");
}

TEST_CASE("the default suite passes and serializes") {
  auto records = run_verify_suite();
  REQUIRE(records.size() == verify_check_ids().size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].id == verify_check_ids()[i].first);
    if (records[i].id == "C01") {
      CHECK(records[i].verdict == CheckVerdict::EvidenceOnly);
    } else {
      CHECK_MESSAGE(records[i].verdict == CheckVerdict::Pass, records[i].id);
    }
  }
  CHECK(verify_exit_code(records) == 0);

  auto json = verify_report_json(records, ZeroTestConfig{}.seed);
  CHECK(json["version"] == 1);
  CHECK(json["seed"] == ZeroTestConfig{}.seed);
  REQUIRE(json["checks"].size() == records.size());
  std::vector<std::string> keys;
  for (auto it = json["checks"][0].begin(); it != json["checks"][0].end(); ++it) keys.push_back(it.key());
  CHECK(keys.front() == "id");
  CHECK(keys.back() == "ms");
  for (const auto& c : json["checks"]) {
    for (const char* key : {"id", "anchor", "verdict", "max_abs_residual", "ms"}) CHECK(c.contains(key));
    if (c.contains("witness")) {
      CHECK(c["witness"].contains("point"));
      CHECK(c["witness"].contains("value"));
    }
  }
}

TEST_CASE("verdicts do not depend on the seed") {
  auto a = run_verify_suite();
  auto b = run_verify_suite(VerifyOptions{7, std::nullopt});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].verdict == b[i].verdict);
}

TEST_CASE("fault injection fails exactly the faulted check") {
  for (const auto& [id, anchor] : verify_check_ids()) {
    auto records = run_verify_suite(VerifyOptions{ZeroTestConfig{}.seed, id});
    if (id == "C01") {
      CHECK(verify_exit_code(records) == 0);
      continue;
    }
    CHECK_MESSAGE(verify_exit_code(records) == 1, id);
    for (const auto& r : records) {
      if (r.id == id) {
        CHECK(r.verdict == CheckVerdict::Fail);
      } else {
        CHECK(r.verdict != CheckVerdict::Fail);
      }
    }
  }
  CHECK_THROWS_AS(run_verify_suite(VerifyOptions{1, std::string("P99")}), std::invalid_argument);
}

TEST_CASE("report serialization") {
  auto v = is_zero(parse("x1 - 1/2"), ZeroTestConfig{});
  auto j = to_json(v);
  CHECK(j["kind"] == "NonZero");
  auto rep = classify(parse("r^2"), geo("euclidean", {3}), 3, ZeroTestConfig{});
  auto jr = to_json(rep);
  CHECK(jr["classification"] == "proper 2-harmonic");
}
