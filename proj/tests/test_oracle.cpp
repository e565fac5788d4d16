#include <doctest.h>

#include <json.hpp>

#include "pic/bounds.hpp"
#include "pic/oracle.hpp"

using namespace pic;

TEST_CASE("minimum linear length on hand-checked instances") {
  // no absent receivers: every receiver of size m-1 needs its missing unit
  auto none = PliableInstance::make(3, {});
  CHECK(min_linear_length(none, 2, 3) == 3);

  // one absent receiver costs exactly one
  auto one = PliableInstance::make(3, {mask_from_messages({1, 2}, 3)});
  CHECK(min_linear_length(one, 2, 3) == 2);

  auto p2 = parse_instance(R"({"m":5,"absent":[[1,2],[1,2,4],[1,3],[1,3,5]]})");
  CHECK(min_linear_length(p2, 2, 5) == 4);

  // ceiling below the optimum finds nothing
  CHECK(!min_linear_length(p2, 2, 3).has_value());

  CHECK_THROWS_AS(min_linear_length(PliableInstance::make(6, {}), 2, 6),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_linear_length(p2, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(min_linear_length(p2, 2, 9), std::invalid_argument);
}

TEST_CASE("brute-force L* on tiny instances") {
  CHECK(brute_force_L_star(PliableInstance::make(3, {})) == 0);
  CHECK(brute_force_L_star(PliableInstance::make(3, {bit_of(1)})) == 1);
  // perfect 2-nested on m=3: P0={3}, P1={1}, P2={2}
  auto perfect = PliableInstance::make(
      3, {bit_of(3), bit_of(1) | bit_of(3), bit_of(2) | bit_of(3)});
  CHECK(brute_force_L_star(perfect) == 2);
  CHECK_THROWS_AS(brute_force_L_star(PliableInstance::make(5, {})),
                  std::invalid_argument);
}

TEST_CASE("sweep at m=3 agrees everywhere and serializes cleanly") {
  auto records = sweep(3, 4, 2);
  CHECK(!records.empty());
  for (const auto& r : records) {
    // only canonical representatives
    CHECK(canonicalize(r.instance).first.absent == r.instance.absent);
    REQUIRE(r.closed_form.has_value());
    REQUIRE(r.oracle_len.has_value());
    CHECK(r.agree);
    CHECK(*r.closed_form == *r.oracle_len);
    // bound sandwich
    CHECK(r.lb_chain <= r.lb_algo);
    CHECK(r.lb_algo <= *r.oracle_len);
  }

  auto csv = sweep_to_csv(records);
  CHECK(csv.rfind("canonical_absent,n_absent,lb_chain,lb_algo,closed_form,"
                  "oracle_len,agree\n", 0) == 0);
  CHECK(csv.find("false") == std::string::npos);

  auto j = nlohmann::json::parse(sweep_to_json(records));
  REQUIRE(j.is_array());
  CHECK(j.size() == records.size());
  CHECK(j[0]["m"] == 3);

  CHECK_THROWS_AS(sweep(6, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(sweep(3, 4, 5), std::invalid_argument);
}
