#include <doctest.h>

#include <cmath>
#include <set>

#include "jtrace/rng.hpp"

using jtrace::Philox4x32;
using jtrace::Rng;

TEST_SUITE("rng") {

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(Philox4x32::block(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42, 7);
  Rng b(42, 7);
  Rng c(42, 8);
  int same_c = 0;
  for (int i = 0; i < 64; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    if (x == c.normal()) ++same_c;
  }
  CHECK(same_c == 0);
}

TEST_CASE("discard matches consumption") {
  Philox4x32 a(3, 1);
  Philox4x32 b(3, 1);
  for (int i = 0; i < 11; ++i) (void)a();
  b.discard(11);
  for (int i = 0; i < 9; ++i) CHECK(a() == b());
}

TEST_CASE("split children differ from the parent and each other") {
  Rng root(5, 0);
  Rng c0 = root.split(0);
  Rng c1 = root.split(1);
  CHECK(c0.stream() != c1.stream());
  CHECK(c0.stream() != root.stream());
  CHECK(root.split(0).stream() == c0.stream());
}

TEST_CASE("uniform_int covers the closed range") {
  Rng r(9, 9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(2, 6);
    REQUIRE(v >= 2);
    REQUIRE(v <= 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("normal and gamma moments") {
  Rng r(11, 2);
  const int n = 40000;
  double s = 0, s2 = 0, g = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
    g += r.gamma(2.5);
  }
  // Five standard errors.
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(g / n - 2.5) < 5.0 * std::sqrt(2.5 / n));
}

TEST_CASE("uniform stays in range") {
  Rng r(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-2.0, 3.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 3.0);
  }
}

}
