#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include <random>

#include "pic/instance.hpp"

using namespace pic;

namespace {

PliableInstance p1() {
  return parse_instance(R"({"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]})");
}

PliableInstance p2() {
  return parse_instance(R"({"m":5,"absent":[[1,2],[1,2,4],[1,3],[1,3,5]]})");
}

}  // namespace

TEST_CASE("mask helpers") {
  CHECK(bit_of(1) == 1u);
  CHECK(bit_of(3) == 4u);
  CHECK(mask_from_messages({2, 4}, 4) == (bit_of(2) | bit_of(4)));
  CHECK(mask_messages(bit_of(1) | bit_of(5)) == std::vector<int>{1, 5});
  CHECK(proper_subset_of(bit_of(1), bit_of(1) | bit_of(2)));
  CHECK(!proper_subset_of(bit_of(1), bit_of(1)));
  // perm sends 1->2, 2->1, 3->3
  CHECK(apply_permutation(bit_of(1) | bit_of(3), {2, 1, 3}) ==
        (bit_of(2) | bit_of(3)));
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(PliableInstance::make(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(PliableInstance::make(25, {}), std::invalid_argument);
  // the full set cannot be absent
  CHECK_THROWS_AS(PliableInstance::make(2, {bit_of(1) | bit_of(2)}),
                  std::invalid_argument);
  // duplicates rejected
  CHECK_THROWS_AS(PliableInstance::make(3, {bit_of(1), bit_of(1)}),
                  std::invalid_argument);
  // out-of-range message
  CHECK_THROWS_AS(PliableInstance::make(3, {bit_of(4)}),
                  std::invalid_argument);
  auto ok = PliableInstance::make(3, {bit_of(2), 0});
  CHECK(ok.absent == std::vector<Mask>{0, bit_of(2)});  // sorted
  CHECK(ok.is_absent(0));
  CHECK(ok.is_present(bit_of(1)));
  CHECK(!ok.is_present(ok.full()));
}

TEST_CASE("instance JSON round trip and errors") {
  auto inst = p1();
  CHECK(inst.m == 6);
  CHECK(inst.absent.size() == 3);
  auto again = parse_instance(instance_to_json(inst));
  CHECK(again.m == inst.m);
  CHECK(again.absent == inst.absent);

  CHECK_THROWS_AS(parse_instance("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(R"({"m":3})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(R"({"m":3,"absent":[[0]]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(R"({"m":2,"absent":[[1,2]]})"),
                  std::invalid_argument);
}

TEST_CASE("longest nested chain") {
  auto chain = longest_nested_chain(p1());
  CHECK(chain.length() == 2);
  CHECK(chain.links[0] == bit_of(3));
  // ties broken toward the lexicographically least mask sequence
  CHECK(chain.links[1] == mask_from_messages({1, 2, 3, 4}, 6));

  CHECK(longest_nested_chain(PliableInstance::make(4, {})).length() == 0);
  CHECK(longest_nested_chain(PliableInstance::make(4, {bit_of(2)})).length() ==
        1);
}

TEST_CASE("maximal chains of P2") {
  auto chains = all_maximal_chains(p2(), 2);
  REQUIRE(chains.size() == 2);
  CHECK(chains[0].links == std::vector<Mask>{mask_from_messages({1, 2}, 5),
                                             mask_from_messages({1, 2, 4}, 5)});
  CHECK(chains[1].links == std::vector<Mask>{mask_from_messages({1, 3}, 5),
                                             mask_from_messages({1, 3, 5}, 5)});
}

TEST_CASE("canonicalize is idempotent and relabel-invariant") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);  // 2..6
    const Mask full = (Mask{1} << m) - 1;
    std::vector<Mask> fam;
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      Mask h = static_cast<Mask>(rng()) & full;
      if (h == full) h = 0;
      fam.push_back(h);
    }
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    auto inst = PliableInstance::make(m, fam);

    auto [canon, perm] = canonicalize(inst);
    // idempotence
    auto [canon2, perm2] = canonicalize(canon);
    CHECK(canon2.absent == canon.absent);
    // the permutation witnesses the canonical form
    std::vector<Mask> mapped;
    for (Mask h : inst.absent) mapped.push_back(apply_permutation(h, perm));
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == canon.absent);

    // relabeling the input does not change the canonical form
    std::vector<int> shuffle(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) shuffle[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(shuffle.begin(), shuffle.end(), rng);
    std::vector<Mask> relabeled;
    for (Mask h : inst.absent) relabeled.push_back(apply_permutation(h, shuffle));
    auto [canon3, perm3] =
        canonicalize(PliableInstance::make(m, std::move(relabeled)));
    CHECK(canon3.absent == canon.absent);
  }
}
