// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "orbent/errors.hpp"
#include "orbent/words.hpp"

using namespace orbent;

namespace {

VariableSignature one_selfadjoint() {
  return VariableSignature({make_group("x", 1, SlotKind::SelfAdjoint)});
}

VariableSignature one_unitary() {
  return VariableSignature({make_group("u", 1, SlotKind::Unitary)});
}

// Independent counter: words of degree d over L letters, summed recursively.
std::int64_t recursive_count(std::int64_t letters, int degree) {
  if (degree == 0) return 0;
  std::int64_t this_level = 1;
  for (int i = 0; i < degree; ++i) this_level *= letters;
  return this_level + recursive_count(letters, degree - 1);
}

}  // namespace

TEST_CASE("one self-adjoint slot, degree 2: [x, x^2]") {
  const auto words = enumerate_words(one_selfadjoint(), 2);
  REQUIRE(words.size() == 2);
  CHECK(format_word(one_selfadjoint(), words[0]) == "x");
  CHECK(format_word(one_selfadjoint(), words[1]) == "x x");
}

TEST_CASE("star normalization collapses x* at construction") {
  const auto sig = one_selfadjoint();
  const StarWord starred = normalize(sig, StarWord{{Letter{0, true}}});
  CHECK(starred == StarWord{{Letter{0, false}}});
}

TEST_CASE("one unitary slot, degree 2: u, u*, u^2, uu*, u*u, u*^2") {
  const auto sig = one_unitary();
  const auto words = enumerate_words(sig, 2);
  REQUIRE(words.size() == 6);
  CHECK(format_word(sig, words[0]) == "u");
  CHECK(format_word(sig, words[1]) == "u*");
  CHECK(format_word(sig, words[2]) == "u u");
  CHECK(format_word(sig, words[3]) == "u u*");
  CHECK(format_word(sig, words[4]) == "u* u");
  CHECK(format_word(sig, words[5]) == "u* u*");
}

TEST_CASE("two self-adjoint slots, degree 3: 14 words, counter cross-check") {
  const VariableSignature sig(
      {make_group("x", 2, SlotKind::SelfAdjoint)});
  const auto words = enumerate_words(sig, 3);
  CHECK(words.size() == 14);
  CHECK(count_words(sig, 3) == 14);
  CHECK(count_words(sig, 3) == recursive_count(sig.letter_count(), 3));
  // each exactly once
  std::set<std::string> seen;
  for (const auto& w : words) seen.insert(format_word(sig, w));
  CHECK(seen.size() == words.size());
  // graded-lex order
  CHECK(std::is_sorted(words.begin(), words.end(), [](const auto& a, const auto& b) {
    return graded_lex_less(a, b);
  }));
}

TEST_CASE("mixed signature counts match the independent recursion") {
  const VariableSignature sig({make_group("x", 2, SlotKind::SelfAdjoint),
                               make_group("v", 1, SlotKind::Unitary)});
  for (int m = 0; m <= 5; ++m) {
    CHECK(count_words(sig, m) == recursive_count(sig.letter_count(), m));
    CHECK(static_cast<std::int64_t>(enumerate_words(sig, m).size()) ==
          count_words(sig, m));
  }
}

TEST_CASE("enumerated words are closed under adjoints") {
  const VariableSignature sig({make_group("x", 1, SlotKind::SelfAdjoint),
                               make_group("v", 1, SlotKind::Unitary)});
  const auto words = enumerate_words(sig, 4);
  std::set<std::string> seen;
  for (const auto& w : words) seen.insert(format_word(sig, w));
  for (const auto& w : words) {
    CHECK(seen.count(format_word(sig, adjoint_word(sig, w))) == 1);
  }
}

TEST_CASE("empty signature yields the empty list") {
  CHECK(enumerate_words(VariableSignature{}, 3).empty());
}

TEST_CASE("word literal round trip: v1 x2 v1* x1") {
  const VariableSignature sig({make_group("x", 2, SlotKind::SelfAdjoint),
                               make_group("v", 2, SlotKind::Unitary)});
  const StarWord w = parse_word(sig, "v1 x2 v1* x1");
  REQUIRE(w.degree() == 4);
  CHECK(format_word(sig, w) == "v1 x2 v1* x1");
  CHECK(w.letters[0] == Letter{2, false});
  CHECK(w.letters[1] == Letter{1, false});
  CHECK(w.letters[2] == Letter{2, true});
  CHECK(w.letters[3] == Letter{0, false});
  CHECK_THROWS_AS(parse_word(sig, "w1"), WordError);
  CHECK(parse_word(sig, "1").empty());
  CHECK(format_word(sig, StarWord{}) == "1");
}

namespace {

// y over the conjugated alphabet, mapped to v x v* over the base alphabet.
struct ConjFixture {
  VariableSignature extended{
      {make_group("y", 2, SlotKind::SelfAdjoint),
       make_group("x", 1, SlotKind::SelfAdjoint),
       make_group("v", 2, SlotKind::Unitary)}};
  VariableSignature base{{make_group("x", 1, SlotKind::SelfAdjoint),
                          make_group("v", 2, SlotKind::Unitary)}};
  ConjugationMap map{extended, base};

  ConjFixture() {
    map.set_conjugated(0, 1, 0);  // y1 -> v1 x v1*
    map.set_conjugated(1, 2, 0);  // y2 -> v2 x v2*
    map.set_plain(2, 0);          // x -> x
    map.set_plain(3, 1);          // v1 -> v1
    map.set_plain(4, 2);          // v2 -> v2
  }
};

}  // namespace

TEST_CASE("conjugation_expand rewrites y into v x v*") {
  ConjFixture f;
  const StarWord y1 = parse_word(f.extended, "y1");
  CHECK(format_word(f.base, conjugation_expand(f.map, y1)) == "v1 x v1*");

  const StarWord y1y1 = parse_word(f.extended, "y1 y1");
  CHECK(format_word(f.base, conjugation_expand(f.map, y1y1)) ==
        "v1 x v1* v1 x v1*");  // no simplification at the symbolic level

  const StarWord y1y2 = parse_word(f.extended, "y1 y2");
  CHECK(format_word(f.base, conjugation_expand(f.map, y1y2)) ==
        "v1 x v1* v2 x v2*");
}

TEST_CASE("conjugation_expand degree bookkeeping and multiplicativity") {
  ConjFixture f;
  const auto words = enumerate_words(f.extended, 3);
  for (size_t i = 0; i < words.size(); i += 7) {
    for (size_t j = 0; j < words.size(); j += 11) {
      const StarWord lhs =
          conjugation_expand(f.map, concat(words[i], words[j]));
      const StarWord rhs = concat(conjugation_expand(f.map, words[i]),
                                  conjugation_expand(f.map, words[j]));
      CHECK(lhs == rhs);
    }
    int expect = 0;
    for (const Letter& l : words[i].letters) expect += l.slot <= 1 ? 3 : 1;
    CHECK(conjugation_expand(f.map, words[i]).degree() == expect);
  }
}

TEST_CASE("unmapped conjugated slot errors") {
  ConjFixture f;
  ConjugationMap partial(f.extended, f.base);
  partial.set_conjugated(0, 1, 0);
  const StarWord y2 = parse_word(f.extended, "y2");
  CHECK_THROWS_WITH_AS(conjugation_expand(partial, y2),
                       "unknown conjugated variable 'y2'", WordError);
}

TEST_CASE("adjoint of a conjugated letter expands consistently") {
  ConjFixture f;
  // (v1 x v1*)* = v1 x v1* for self-adjoint x: expansion then adjoint agrees
  // with adjoint then expansion.
  const auto words = enumerate_words(f.extended, 2);
  for (const auto& w : words) {
    const StarWord a = conjugation_expand(f.map, adjoint_word(f.extended, w));
    const StarWord b = adjoint_word(f.base, conjugation_expand(f.map, w));
    CHECK(a == b);
  }
}

TEST_CASE("signature rejects duplicate labels and bad slots") {
  CHECK_THROWS_AS(VariableSignature({make_group("x", 1, SlotKind::SelfAdjoint),
                                     make_group("x", 2, SlotKind::SelfAdjoint)}),
                  WordError);
  CHECK_THROWS_AS(make_group("x", 0, SlotKind::SelfAdjoint), WordError);
  const auto sig = one_selfadjoint();
  CHECK_THROWS_AS(sig.slot_kind(5), WordError);
}

TEST_CASE("cyclic shifts preserve length and letters") {
  const VariableSignature sig({make_group("x", 2, SlotKind::SelfAdjoint)});
  const StarWord w = parse_word(sig, "x1 x2 x2");
  CHECK(format_word(sig, cyclic_shift(w, 1)) == "x2 x2 x1");
  CHECK(cyclic_shift(w, 3) == w);
  CHECK(cyclic_shift(w, -1) == cyclic_shift(w, 2));
}
