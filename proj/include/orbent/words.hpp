// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orbent {

enum class SlotKind : std::uint8_t { SelfAdjoint, Unitary };

/// One named group of indeterminates, e.g. a self-adjoint multi-variable
/// X = (X_1,...,X_r) or a tuple of unitaries v = (v_1,...,v_s).
struct VariableGroup {
  std::string label;
  std::vector<SlotKind> kinds;  // one entry per slot; arity = kinds.size()
};

VariableGroup make_group(std::string label, int arity, SlotKind kind);

/// An ordered alphabet of indeterminate slots, flattened over groups.
/// Slot indices run 0..slot_count()-1 in group order.
class VariableSignature {
 public:
  VariableSignature() = default;
  explicit VariableSignature(std::vector<VariableGroup> groups);

  int slot_count() const { return static_cast<int>(slot_kinds_.size()); }
  SlotKind slot_kind(int slot) const;
  int group_count() const { return static_cast<int>(groups_.size()); }
  const VariableGroup& group(int g) const { return groups_.at(g); }
  int first_slot(int g) const { return offsets_.at(g); }
  int slot_index(int g, int j) const;
  std::pair<int, int> locate(int slot) const;  // (group, position in group)

  /// "x" for arity-1 groups, "x3" for slot 2 of a group labelled "x".
  std::string slot_name(int slot) const;
  std::optional<int> find_slot(std::string_view name) const;

  /// Letters available at each word position: 1 per self-adjoint slot,
  /// 2 (plain and starred) per unitary slot.
  int letter_count() const;

  bool operator==(const VariableSignature& other) const;

 private:
  std::vector<VariableGroup> groups_;
  std::vector<int> offsets_;
  std::vector<SlotKind> slot_kinds_;
};

/// Returns a signature whose groups are those of `a` followed by those of `b`.
/// Labels must stay unique across the result.
VariableSignature concat_signatures(const VariableSignature& a,
                                    const VariableSignature& b);

struct Letter {
  int slot = 0;
  bool star = false;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter&, const Letter&) = default;
};

/// A *-monomial: an ordered word of letters. Degree 0 is the identity.
struct StarWord {
  std::vector<Letter> letters;

  int degree() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const StarWord&, const StarWord&) = default;
};

/// Degree first, then lexicographic on (slot, star).
bool graded_lex_less(const StarWord& a, const StarWord& b);

/// Erases stars on self-adjoint slots (X* = X). The only normalization
/// performed; no cancellation of u u* etc.
StarWord normalize(const VariableSignature& sig, StarWord w);

/// Reverses the word and flips stars, then normalizes.
StarWord adjoint_word(const VariableSignature& sig, const StarWord& w);

StarWord concat(const StarWord& a, const StarWord& b);
StarWord cyclic_shift(const StarWord& w, int k);

/// Word literal syntax: whitespace-separated letters, trailing '*' marks the
/// adjoint, e.g. "v1 x2 v1* x1". The empty word prints as "1".
std::string format_word(const VariableSignature& sig, const StarWord& w);
StarWord parse_word(const VariableSignature& sig, std::string_view text);

/// All normalized *-monomials of degree 1..max_degree, each exactly once, in
/// graded lexicographic order. Empty signature or max_degree 0 yields {}.
std::vector<StarWord> enumerate_words(const VariableSignature& sig,
                                      int max_degree);
std::int64_t count_words(const VariableSignature& sig, int max_degree);

/// Expansion of one extended-alphabet slot over a base alphabet: either a
/// plain copy of a base slot or a conjugated letter u x u*.
struct SlotExpansion {
  int base_slot = -1;
  int conjugating_slot = -1;  // unitary base slot; -1 means plain copy
  bool conjugated() const { return conjugating_slot >= 0; }
};

/// Maps every slot of an extended signature onto the base signature.
class ConjugationMap {
 public:
  ConjugationMap(VariableSignature extended, VariableSignature base);

  void set_plain(int extended_slot, int base_slot);
  void set_conjugated(int extended_slot, int unitary_slot, int base_slot);

  const VariableSignature& extended() const { return extended_; }
  const VariableSignature& base() const { return base_; }
  const std::optional<SlotExpansion>& expansion(int slot) const;

 private:
  VariableSignature extended_;
  VariableSignature base_;
  std::vector<std::optional<SlotExpansion>> by_slot_;
};

/// Rewrites a word over the extended alphabet into the base alphabet,
/// replacing each conjugated letter y by u x u*. Degree grows by 2 per
/// conjugated letter. Throws WordError on a slot without an expansion.
StarWord conjugation_expand(const ConjugationMap& map, const StarWord& w);

}  // namespace orbent
