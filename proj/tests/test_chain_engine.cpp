#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include <random>

#include "pic/chain_engine.hpp"
#include "pic/instance.hpp"

using namespace pic;

namespace {

PliableInstance p1() {
  return parse_instance(R"({"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]})");
}

PliableInstance p2() {
  return parse_instance(R"({"m":5,"absent":[[1,2],[1,2,4],[1,3],[1,3,5]]})");
}

DecodingChoice random_total(const PliableInstance& inst, std::mt19937& rng) {
  DecodingChoice d;
  const Mask full = inst.full();
  for (Mask h = 0; h < full; ++h) {
    if (inst.is_absent(h)) continue;
    const auto options = mask_messages(full & ~h);
    d[h] = options[rng() % options.size()];
  }
  return d;
}

PliableInstance random_instance(std::mt19937& rng, int max_m) {
  const int m = 2 + static_cast<int>(rng() % (max_m - 1));
  const Mask full = (Mask{1} << m) - 1;
  std::vector<Mask> fam;
  const int n = static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) {
    Mask h = static_cast<Mask>(rng()) & full;
    if (h == full) h = 0;
    fam.push_back(h);
  }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return PliableInstance::make(m, fam);
}

}  // namespace

TEST_CASE("skip-smallest run on P1 follows the two-hit script") {
  auto inst = p1();
  DecodingChoice d = total_min_choice(inst);
  d[0] = 3;
  d[mask_from_messages({1, 3}, 6)] = 2;
  d[mask_from_messages({1, 2, 3}, 6)] = 4;
  auto trace = run_chain(inst, d, skip_smallest_policy());
  REQUIRE(trace.hits.size() == 2);
  CHECK(trace.hits[0] == bit_of(3));
  CHECK(trace.hits[1] == mask_from_messages({1, 2, 3, 4}, 6));
  CHECK(popcount(trace.skipped) == 2);
  CHECK(trace.order.size() == 6);
}

TEST_CASE("no absent receivers means no skips") {
  auto inst = PliableInstance::make(5, {});
  auto trace = run_chain(inst, total_min_choice(inst), skip_smallest_policy());
  CHECK(trace.skipped == 0);
  CHECK(trace.hits.empty());
  CHECK(trace.order == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("look-ahead policy on P1 skips at most once for any D") {
  auto inst = p1();
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_total(inst, rng);
    auto trace = run_chain(inst, d, look_ahead_policy());
    CHECK(popcount(trace.skipped) <= 1);
  }
}

TEST_CASE("run_chain validates policy steps and D") {
  auto inst = p1();
  DecodingChoice d = total_min_choice(inst);
  d[0] = 3;
  // policy that skips a message already in the chain
  ChainPolicy bad = [](const PliableInstance&, const DecodingChoice&,
                       Mask chain) {
    return ChainStep{ChainStep::skip, mask_messages(chain).front(), 0};
  };
  CHECK_THROWS_AS(run_chain(inst, d, bad), std::invalid_argument);

  DecodingChoice partial;  // missing D(emptyset)
  CHECK_THROWS_AS(run_chain(inst, partial, skip_smallest_policy()),
                  std::invalid_argument);
}

TEST_CASE("min_skips matches the paper's P1 and P2 values") {
  auto inst = p1();
  // adversarial steering: into {3}, then along {1,2,3,4}
  DecodingChoice d = total_min_choice(inst);
  d[0] = 3;
  CHECK(min_skips(inst, d) == 1);

  CHECK(min_skips(PliableInstance::make(4, {}),
                  total_min_choice(PliableInstance::make(4, {}))) == 0);

  auto q2 = p2();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(min_skips(q2, random_total(q2, rng)) <= 1);
}

TEST_CASE("L* on the reference instances") {
  CHECK(compute_L_star(p1()) == 1);
  CHECK(compute_L_star(p2()) == 1);
  CHECK(compute_L_star(PliableInstance::make(6, {})) == 0);
  CHECK_THROWS_AS(compute_L_star(PliableInstance::make(13, {bit_of(1)})),
                  std::invalid_argument);
  // cap override
  CHECK(compute_L_star(PliableInstance::make(13, {bit_of(1)}), 13) == 1);
}

TEST_CASE("L* is bounded by the longest nested chain") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_instance(rng, 6);
    CHECK(compute_L_star(inst) <= longest_nested_chain(inst).length());
  }
}

TEST_CASE("L* is relabel-invariant") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 5);
    std::vector<int> perm(static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Mask> relabeled;
    for (Mask h : inst.absent) relabeled.push_back(apply_permutation(h, perm));
    auto other = PliableInstance::make(inst.m, std::move(relabeled));
    CHECK(compute_L_star(inst) == compute_L_star(other));
  }
}

TEST_CASE("acyclic certificate on scripted and random runs") {
  auto inst = p1();
  DecodingChoice d = total_min_choice(inst);
  d[0] = 3;
  auto trace = run_chain(inst, d, look_ahead_policy());
  auto g = acyclic_certificate(inst, trace, d);
  CHECK(g.acyclic);
  CHECK(g.vertices.size() + static_cast<std::size_t>(popcount(trace.skipped)) ==
        6);

  // a path graph for the absent-free run
  auto free_inst = PliableInstance::make(4, {});
  auto free_d = total_min_choice(free_inst);
  auto free_trace = run_chain(free_inst, free_d, skip_smallest_policy());
  auto free_g = acyclic_certificate(free_inst, free_trace, free_d);
  CHECK(free_g.acyclic);
  CHECK(free_g.vertices.size() == 4);

  // tampered trace is rejected
  auto broken = trace;
  for (auto& s : broken.steps)
    if (s.kind == ChainStep::decode) {
      s.message = s.message == 1 ? 2 : 1;
      break;
    }
  CHECK_THROWS_AS(acyclic_certificate(inst, broken, d), std::invalid_argument);
}
