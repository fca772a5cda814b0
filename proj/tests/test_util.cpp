#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <numeric>
#include <set>

#include "tuplesim/errors.hpp"
#include "tuplesim/threads.hpp"
#include "tuplesim/util.hpp"

using namespace tuplesim;

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
  // Streaming in two chunks equals one pass.
  CHECK(fnv1a("bar", fnv1a("foo")) == fnv1a("foobar"));
}

TEST_CASE("hex64 renders fixed-width lowercase hex") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xdeadbeefull) == "00000000deadbeef");
  CHECK(hex64(UINT64_MAX) == "ffffffffffffffff");
}

TEST_CASE("rng is deterministic per seed") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_below(1000) == b.next_below(1000));
  Rng c(8);
  bool all_equal = true;
  Rng a2(7);
  for (int i = 0; i < 100; ++i) all_equal &= (a2.next_below(1000) == c.next_below(1000));
  CHECK_FALSE(all_equal);
}

TEST_CASE("rng draws stay in range") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    CHECK(rng.next_below(13) < 13);
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(rng.next_below(1) == 0);
}

TEST_CASE("rng shuffle is a permutation and seed-stable") {
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;
  Rng rng(3);
  rng.shuffle(w);
  CHECK(w != v);  // 50! leaves no realistic chance of identity
  std::multiset<int> sorted_w(w.begin(), w.end());
  std::multiset<int> sorted_v(v.begin(), v.end());
  CHECK(sorted_w == sorted_v);

  std::vector<int> w2 = v;
  Rng rng2(3);
  rng2.shuffle(w2);
  CHECK(w == w2);
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 10007;
  std::vector<int> hits(n, 0);
  parallel_for(n, [&](std::size_t i) { hits[i] += 1; });
  for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
}

TEST_CASE("parallel_for result is independent of nesting") {
  const std::size_t n = 64;
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> inner(8, 0.0);
    parallel_for(inner.size(), [&](std::size_t j) {
      inner[j] = static_cast<double>(i * 8 + j);
    });
    double sum = 0.0;
    for (double x : inner) sum += x;
    out[i] = sum;
  });
  for (std::size_t i = 0; i < n; ++i) {
    double expect = 0.0;
    for (std::size_t j = 0; j < 8; ++j) expect += static_cast<double>(i * 8 + j);
    CHECK(out[i] == expect);
  }
}

TEST_CASE("parallel_for rethrows a worker exception") {
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(parallel_for(100,
                               [&](std::size_t i) {
                                 ran.fetch_add(1);
                                 if (i == 37) throw data_error("boom");
                               }),
                  data_error);
  CHECK(ran.load() >= 1);
}

TEST_CASE("thread_budget respects the environment cap") {
  CHECK(thread_budget() >= 1);
}
