#include <doctest.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "generators.hpp"
#include "loewner/verify.hpp"

using namespace loewner;

namespace {

std::string observation(const VerificationReport& r, const std::string& id) {
  for (const auto& o : r.observations) {
    if (o.id == id) return o.value;
  }
  return {};
}

}  // namespace

TEST_CASE("report bookkeeping") {
  VerificationReport r;
  r.suite = "demo";
  r.add("a", 1.0, 1.0, Provenance::Paper);
  r.add("b", 2.0, 1.0, Provenance::Derived);
  r.add("c", std::numeric_limits<double>::quiet_NaN(), 1.0, Provenance::Trivial);
  CHECK(r.find("a")->pass);
  CHECK_FALSE(r.find("b")->pass);
  CHECK_FALSE(r.find("c")->pass);
  CHECK(r.find("missing") == nullptr);
  CHECK_FALSE(r.all_passed());
  CHECK(to_string(Provenance::Derived) == "DERIVED");

  const auto j = nlohmann::json::parse(r.to_json(false));
  CHECK(j["suite"] == "demo");
  CHECK(j["checks"].size() == 3);
  CHECK(j["checks"][0]["provenance"] == "PAPER");
  CHECK(j["checks"][2]["measured"].is_null());
  CHECK(j["runtime_s"] == 0.0);
}

TEST_CASE("oracle grid and times") {
  const Scenario sc = Scenario::theorem_one(2.5, 1.0, 3.0);
  CHECK(oracle_grid(sc).size() == 100);
  const auto ts = oracle_times(sc);
  CHECK(ts.size() == 5);
  CHECK(ts.front() == 1.0);
  CHECK(ts.back() == 3.0);
}

TEST_CASE("all suites pass on the caption scenarios") {
  for (const Scenario& sc : testing::caption_scenarios()) {
    INFO("theorem " << to_string(sc.theorem()) << " A=" << sc.amplitude());
    const auto oracle = suite_oracle_equivalence(sc);
    const auto asym = suite_asymptotics(sc);
    const auto geom = suite_geometry(sc);
    for (const auto* r : {&oracle, &asym, &geom}) {
      for (const auto& c : r->checks) {
        INFO(c.id << " measured " << c.measured << " threshold " << c.threshold);
        CHECK(c.pass);
      }
    }
    REQUIRE(oracle.find("oracle.max_abs_dw") != nullptr);
    CHECK(oracle.find("oracle.max_abs_dw")->threshold == 1e-7);
    CHECK(oracle.find("oracle.splice_max_dw_at_t0")->measured <= 1e-12);
  }
}

TEST_CASE("geometry suite records the expected departure angle") {
  const auto r = suite_geometry(Scenario::theorem_one(2.0, 1.0, 3.0));
  REQUIRE(r.find("geometry.departure_angle") != nullptr);
  CHECK(observation(r, "geometry.expected_departure_angle") == "pi/4");
  CHECK(r.find("geometry.case3_implicit_residual") != nullptr);

  const auto r2 = suite_geometry(Scenario::theorem_two(3.0, 1.0, 3.0));
  CHECK(r2.find("geometry.rectilinearity")->measured <= 1e-10);
}

TEST_CASE("case (iii) adjudication always includes the distinguishing run") {
  const auto r = suite_case3_adjudication(1.0);
  CHECK(r.all_passed());
  CHECK(r.find("case3.t0=1.forms_coincide") != nullptr);
  CHECK(r.find("case3.t0=2.25.exactly_one_form_consistent") != nullptr);
  CHECK(observation(r, "case3.t0=2.25.consistent_form") == "corrected (4 t0 log)");
  CHECK(std::stod(observation(r, "case3.t0=2.25.literal_form_residual")) > 1e-3);

  const auto only = suite_case3_adjudication(2.25);
  CHECK(only.checks.size() == 2);
}

TEST_CASE("reports are byte-identical without timing") {
  const Scenario sc = Scenario::theorem_two(3.0, 1.0, 3.0);
  CHECK(suite_geometry(sc).to_json(false) == suite_geometry(sc).to_json(false));
  CHECK(suite_case3_adjudication(1.0).to_json(false) ==
        suite_case3_adjudication(1.0).to_json(false));
}
