#include <doctest.h>

#include <deque>
#include <set>

#include "delaudit/adt.hpp"
#include "delaudit/errors.hpp"
#include "delaudit/impls.hpp"

using namespace delaudit;

namespace {

Op ins(const char* id) { return Op{kOpInsert, id, {}}; }
Op del(const char* id) { return Op{kOpDelete, id, {}}; }
Op set(const char* id, const char* v) { return Op{kOpSet, id, v}; }

}  // namespace

TEST_CASE("dictionary logical equivalence") {
  DictionaryAdt adt;
  CHECK(logically_equivalent(adt, {ins("a")}, {ins("a")}));
  CHECK(logically_equivalent(adt, {ins("a"), ins("b"), del("b")}, {ins("a")}));
  CHECK_FALSE(logically_equivalent(adt, {set("a", "1")}, {set("a", "2")}));
  // insert(id) is equivalent to set(id, top).
  CHECK(logically_equivalent(adt, {ins("a")}, {Op{kOpSet, "a", top_value()}}));
}

TEST_CASE("canonicalize emits last-writer-wins in id byte order") {
  DictionaryAdt adt;
  auto canon = canonicalize(adt, {ins("b"), ins("a")});
  REQUIRE(canon.size() == 2);
  CHECK(canon[0] == Op{kOpSet, "a", top_value()});
  CHECK(canon[1] == Op{kOpSet, "b", top_value()});

  CHECK(canonicalize(adt, {}).empty());

  auto last = canonicalize(adt, {set("a", "1"), set("a", "2")});
  REQUIRE(last.size() == 1);
  CHECK(last[0] == Op{kOpSet, "a", "2"});

  // Soundness: the canonical sequence is logically equivalent to the input.
  OpSeq mixed = {ins("c"), set("b", "9"), del("c"), ins("a"), set("a", "7")};
  CHECK(logically_equivalent(adt, mixed, canonicalize(adt, mixed)));

  LastIdAdt last_id;
  CHECK_THROWS_AS(canonicalize(last_id, {ins("a")}), UnsupportedCanonicalizationError);
}

TEST_CASE("logical deletion holds for dictionaries, fails for last-id") {
  DictionaryAdt adt;
  CHECK(check_logical_deletion(adt, {ins("a"), set("b", "2"), del("a")}, "a"));
  CHECK(check_logical_deletion(adt, {ins("a")}, "b"));  // no-op delete
  CHECK(check_logical_deletion(adt, {}, "a"));

  LastIdAdt last_id;
  // The Reversible-but-no-logical-deletion counterexample: seq (A, C), id C.
  CHECK_FALSE(check_logical_deletion(last_id, {ins("A"), ins("C")}, "C"));
}

TEST_CASE("logical deletion for dictionaries proven for all sequences via pair closure") {
  // Product construction over (L(seq), L(seq minus id*)) pairs: a closed set
  // under every op implies the Def-style identity for sequences of every
  // length, which subsumes the exhaustive length <= 12 requirement.
  DictionaryAdt adt;
  std::vector<Bytes> ids = {"a", "b", "c"};
  std::vector<Bytes> values = {"0", "1"};
  auto ops = adt.op_universe(ids, values);
  const Bytes id_star = "a";

  using Pair = std::pair<Bytes, Bytes>;
  std::set<Pair> seen;
  std::deque<Pair> frontier;
  Pair init{adt.initial_state(), adt.initial_state()};
  seen.insert(init);
  frontier.push_back(init);
  while (!frontier.empty()) {
    auto [with, without] = frontier.front();
    frontier.pop_front();
    // Appending delete(id*) to the realized sequence must land on the
    // id*-erased state.
    CHECK(adt.transition(Op{kOpDelete, id_star, {}}, with).first == without);
    for (const auto& op : ops) {
      Pair next{adt.transition(op, with).first,
                op.id == id_star ? without : adt.transition(op, without).first};
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  // 3 keys, each absent/top/"0"/"1": the closure is the full product space.
  CHECK(seen.size() >= 64);
}

TEST_CASE("reversibility checks") {
  DictionaryAdt dict;
  CHECK(check_reversibility(dict, {"a", "b"}, {"0", "1"}, 64));

  LastIdAdt last_id;
  CHECK(check_reversibility(last_id, {"A", "B", "C"}, {}, 16));

  AppendLogAdt log;
  CHECK_THROWS_AS(check_reversibility(log, {"a"}, {}, 8), EnumerationCapError);
  // With a bound large enough to see growth stop mattering, it still never
  // returns to shorter states; verify on a tiny universe by hand instead.
  OpSeq grow = {ins("a")};
  CHECK(final_logical_state(log, grow) != log.initial_state());
  CHECK(final_logical_state(log, {ins("a"), del("a")}) != log.initial_state());
}

TEST_CASE("apply_sequence folds an implementation over a sequence") {
  RandomTape t(0, 0);
  auto spec = sorted_list_dict_spec();
  auto [state, outs] = apply_sequence(spec.make, {set("b", "2"), set("a", "1")}, t);
  SortedDict expect;
  expect.apply(set("a", "1"));
  expect.apply(set("b", "2"));
  CHECK(state == expect.canonical_bytes());
  CHECK(outs.size() == 2);

  RandomTape t2(0, 0);
  auto [empty_state, no_outs] = apply_sequence(spec.make, {}, t2);
  CHECK(empty_state == enc::sorted_map({}));
  CHECK(no_outs.empty());

  RandomTape t3(0, 0);
  auto [deleted, outs3] = apply_sequence(spec.make, {ins("a"), del("a")}, t3);
  CHECK(deleted == enc::sorted_map({}));
}

TEST_CASE("sorted dict is a canonical function of the logical map") {
  // Different insertion histories, equal logical contents, byte-equal states.
  SortedDict d1, d2;
  d1.apply(ins("x"));
  d1.apply(set("y", "1"));
  d1.apply(del("x"));
  d1.apply(ins("z"));

  d2.apply(ins("z"));
  d2.apply(set("y", "0"));
  d2.apply(set("y", "1"));
  CHECK(d1.canonical_bytes() == d2.canonical_bytes());
}

TEST_CASE("op sequences serialize to the documented json shape") {
  OpSeq seq = {ins("a"), set("b", "\x01\x02")};
  auto text = opseq_to_json(seq);
  CHECK(text.find("\"op\":\"ins\"") != std::string::npos);
  auto back = opseq_from_json(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == seq[0]);
  CHECK(back[1] == seq[1]);
}
