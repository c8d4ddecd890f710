#include <doctest.h>

#include "delaudit/bytes.hpp"
#include "delaudit/rational.hpp"
#include "delaudit/rng.hpp"
#include "delaudit/tape.hpp"

using namespace delaudit;

TEST_CASE("hex round trip") {
  Bytes b = {'\x00', '\x7f', '\xff', 'a'};
  CHECK(to_hex(b) == "007fff61");
  CHECK(from_hex("007fff61") == b);
  CHECK_THROWS(from_hex("0g"));
}

TEST_CASE("encoders are injective on nested structures") {
  // Same flat byte content, different structure.
  Bytes a = enc::pair("ab", "c");
  Bytes b = enc::pair("a", "bc");
  CHECK(a != b);
  std::map<Bytes, Bytes> m1{{"a", "1"}, {"b", "2"}};
  std::map<Bytes, Bytes> m2{{"b", "2"}, {"a", "1"}};
  CHECK(enc::sorted_map(m1) == enc::sorted_map(m2));
}

TEST_CASE("rational arithmetic is exact") {
  Rat half(1, 2);
  Rat third(1, 3);
  CHECK((half + third) == Rat(5, 6));
  CHECK((half - third) == Rat(1, 6));
  CHECK((half * third) == Rat(1, 6));
  CHECK((half / third) == Rat(3, 2));
  CHECK(Rat(2, 4) == half);
  CHECK(Rat(-1, -2) == half);
  CHECK(Rat(1, -2) == Rat(-1, 2));
  CHECK(third < half);
  CHECK(Rat::from_double_exact(0.25) == Rat(1, 4));
  CHECK(Rat::from_double_exact(3.0) == Rat(3));
}

TEST_CASE("lower_bound_of is a lower bound within 2^-49") {
  for (double x : {0.1, 1.0, 2.718281828459045, 148.4131591025766, 1e-6}) {
    Rat lb = Rat::lower_bound_of(static_cast<long double>(x));
    CHECK(lb.to_double() <= x);
    CHECK(lb.to_double() >= x * (1 - 4e-15));
  }
}

TEST_CASE("tape bits are pure functions of (seed, index)") {
  RandomTape t1(42, 128);
  RandomTape t2(42, 128);
  for (int i = 0; i < 128; ++i) CHECK(t1.next_bit() == t2.next_bit());
  RandomTape t3(43, 128);
  int diff = 0;
  RandomTape t1b(42, 128);
  for (int i = 0; i < 128; ++i) diff += t1b.next_bit() != t3.next_bit();
  CHECK(diff > 20);
}

TEST_CASE("tape budget is enforced and cursor only advances") {
  RandomTape t(7, 8);
  t.next_bits(8);
  CHECK(t.cursor() == 8);
  CHECK_THROWS_AS(t.next_bit(), TapeBudgetError);
}

TEST_CASE("overrides rewrite single bits, suffix stays seed-derived") {
  RandomTape base(9, 64);
  RandomTape over = base;
  over.set_override(3, !base.peek_bit(3));
  for (uint64_t i = 0; i < 64; ++i) {
    if (i == 3) {
      CHECK(over.peek_bit(i) != base.peek_bit(i));
    } else {
      CHECK(over.peek_bit(i) == base.peek_bit(i));
      CHECK(over.peek_bit(i) == over.base_bit(i));
    }
  }
}

TEST_CASE("from_bits fixes the whole prefix") {
  std::vector<bool> bits = {true, false, true, true};
  RandomTape t = RandomTape::from_bits(bits);
  CHECK(t.budget() == 4);
  CHECK(t.next_bits(4) == 0b1011);
}

TEST_CASE("regions confine reads") {
  RandomTape t(5, 32);
  RandomTape r = t.region(8, 8);
  for (int i = 0; i < 8; ++i) CHECK(r.peek_bit(i) == t.peek_bit(8 + i));
  r.next_bits(8);
  CHECK_THROWS_AS(r.next_bit(), TapeSplitError);
}

TEST_CASE("rng below is in range and deterministic per seed") {
  Rng a(1), b(1);
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.below(17);
    CHECK(x == b.below(17));
    CHECK(x < 17);
  }
  CHECK(Rng(2).child("x").next() != Rng(2).child("y").next());
}
