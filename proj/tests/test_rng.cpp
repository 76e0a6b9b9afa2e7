/*
   Copyright 2026 The levyfn Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdint>
#include <set>

#include "doctest.h"
#include "levyfn/rng.hpp"

using namespace levyfn;

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("generator walks the counter") {
  Philox4x32 g(Philox4x32::Key{0, 0});
  const auto b0 = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  const auto b1 = Philox4x32::block({1, 0, 0, 0}, {0, 0});
  for (int i = 0; i < 4; ++i) CHECK(g() == b0[i]);
  for (int i = 0; i < 4; ++i) CHECK(g() == b1[i]);
}

TEST_CASE("substreams are reproducible and distinct") {
  auto a = Philox4x32::substream(42, 7);
  auto b = Philox4x32::substream(42, 7);
  for (int i = 0; i < 100; ++i) REQUIRE(a() == b());
  std::set<std::uint32_t> firsts;
  for (std::uint64_t id = 0; id < 1000; ++id) firsts.insert(Philox4x32::substream(42, id)());
  CHECK(firsts.size() >= 999);
  CHECK(Philox4x32::substream(1, 0)() != Philox4x32::substream(2, 0)());
}

TEST_CASE("open uniforms") {
  auto g = Philox4x32::substream(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform_open(g);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(mix64(0) != mix64(1));
}
