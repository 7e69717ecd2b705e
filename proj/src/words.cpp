// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "orbent/errors.hpp"

namespace orbent {

VariableGroup make_group(std::string label, int arity, SlotKind kind) {
  if (arity < 1) throw WordError("group arity must be >= 1");
  return VariableGroup{std::move(label),
                       std::vector<SlotKind>(static_cast<size_t>(arity), kind)};
}

VariableSignature::VariableSignature(std::vector<VariableGroup> groups)
    : groups_(std::move(groups)) {
  offsets_.reserve(groups_.size());
  for (const auto& g : groups_) {
    if (g.label.empty()) throw WordError("group label must be nonempty");
    if (g.kinds.empty()) throw WordError("group arity must be >= 1");
    for (const auto& other : groups_) {
      if (&other != &g && other.label == g.label)
        throw WordError("duplicate group label '" + g.label + "'");
    }
    offsets_.push_back(static_cast<int>(slot_kinds_.size()));
    slot_kinds_.insert(slot_kinds_.end(), g.kinds.begin(), g.kinds.end());
  }
}

SlotKind VariableSignature::slot_kind(int slot) const {
  if (slot < 0 || slot >= slot_count())
    throw WordError("slot index " + std::to_string(slot) + " out of range");
  return slot_kinds_[static_cast<size_t>(slot)];
}

int VariableSignature::slot_index(int g, int j) const {
  const auto& grp = groups_.at(static_cast<size_t>(g));
  if (j < 0 || j >= static_cast<int>(grp.kinds.size()))
    throw WordError("slot position out of range in group '" + grp.label + "'");
  return offsets_[static_cast<size_t>(g)] + j;
}

std::pair<int, int> VariableSignature::locate(int slot) const {
  if (slot < 0 || slot >= slot_count())
    throw WordError("slot index " + std::to_string(slot) + " out of range");
  int g = static_cast<int>(groups_.size()) - 1;
  while (g > 0 && offsets_[static_cast<size_t>(g)] > slot) --g;
  return {g, slot - offsets_[static_cast<size_t>(g)]};
}

std::string VariableSignature::slot_name(int slot) const {
  auto [g, j] = locate(slot);
  const auto& grp = groups_[static_cast<size_t>(g)];
  if (grp.kinds.size() == 1) return grp.label;
  return grp.label + std::to_string(j + 1);
}

std::optional<int> VariableSignature::find_slot(std::string_view name) const {
  // Longest label match wins so that labels like "y1" and "y12" coexist.
  int found = -1;
  size_t best = 0;
  for (int g = 0; g < group_count(); ++g) {
    const auto& grp = groups_[static_cast<size_t>(g)];
    if (name.substr(0, grp.label.size()) != grp.label) continue;
    std::string_view rest = name.substr(grp.label.size());
    int j;
    if (rest.empty()) {
      if (grp.kinds.size() != 1) continue;
      j = 0;
    } else {
      if (!std::all_of(rest.begin(), rest.end(),
                       [](unsigned char c) { return std::isdigit(c); }))
        continue;
      j = std::stoi(std::string(rest)) - 1;
      if (j < 0 || j >= static_cast<int>(grp.kinds.size())) continue;
      if (grp.kinds.size() == 1) continue;  // arity-1 groups print bare labels
    }
    if (grp.label.size() >= best) {
      best = grp.label.size();
      found = slot_index(g, j);
    }
  }
  if (found < 0) return std::nullopt;
  return found;
}

int VariableSignature::letter_count() const {
  int n = 0;
  for (SlotKind k : slot_kinds_) n += (k == SlotKind::Unitary) ? 2 : 1;
  return n;
}

bool VariableSignature::operator==(const VariableSignature& other) const {
  if (slot_kinds_ != other.slot_kinds_) return false;
  if (groups_.size() != other.groups_.size()) return false;
  for (size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].label != other.groups_[i].label ||
        groups_[i].kinds != other.groups_[i].kinds)
      return false;
  }
  return true;
}

VariableSignature concat_signatures(const VariableSignature& a,
                                    const VariableSignature& b) {
  std::vector<VariableGroup> groups;
  groups.reserve(static_cast<size_t>(a.group_count() + b.group_count()));
  for (int g = 0; g < a.group_count(); ++g) groups.push_back(a.group(g));
  for (int g = 0; g < b.group_count(); ++g) groups.push_back(b.group(g));
  return VariableSignature(std::move(groups));
}

bool graded_lex_less(const StarWord& a, const StarWord& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.letters < b.letters;
}

StarWord normalize(const VariableSignature& sig, StarWord w) {
  for (auto& l : w.letters) {
    if (sig.slot_kind(l.slot) == SlotKind::SelfAdjoint) l.star = false;
  }
  return w;
}

StarWord adjoint_word(const VariableSignature& sig, const StarWord& w) {
  StarWord out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(Letter{it->slot, !it->star});
  return normalize(sig, std::move(out));
}

StarWord concat(const StarWord& a, const StarWord& b) {
  StarWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

StarWord cyclic_shift(const StarWord& w, int k) {
  if (w.empty()) return w;
  const int n = w.degree();
  k = ((k % n) + n) % n;
  StarWord out;
  out.letters.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.letters.push_back(w.letters[static_cast<size_t>((i + k) % n)]);
  return out;
}

std::string format_word(const VariableSignature& sig, const StarWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (i) os << ' ';
    os << sig.slot_name(w.letters[i].slot);
    if (w.letters[i].star) os << '*';
  }
  return os.str();
}

StarWord parse_word(const VariableSignature& sig, std::string_view text) {
  StarWord out;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    if (tok == "1" && out.empty()) continue;  // identity literal
    bool star = false;
    if (!tok.empty() && tok.back() == '*') {
      star = true;
      tok.pop_back();
    }
    auto slot = sig.find_slot(tok);
    if (!slot) throw WordError("unknown letter '" + tok + "' in word literal");
    out.letters.push_back(Letter{*slot, star});
  }
  return normalize(sig, std::move(out));
}

namespace {

std::vector<Letter> letter_alphabet(const VariableSignature& sig) {
  std::vector<Letter> letters;
  letters.reserve(static_cast<size_t>(sig.letter_count()));
  for (int s = 0; s < sig.slot_count(); ++s) {
    letters.push_back(Letter{s, false});
    if (sig.slot_kind(s) == SlotKind::Unitary) letters.push_back(Letter{s, true});
  }
  return letters;
}

}  // namespace

std::vector<StarWord> enumerate_words(const VariableSignature& sig,
                                      int max_degree) {
  if (max_degree < 0) throw WordError("max_degree must be >= 0");
  const auto letters = letter_alphabet(sig);
  std::vector<StarWord> out;
  if (letters.empty()) return out;
  out.reserve(static_cast<size_t>(count_words(sig, max_degree)));
  const int L = static_cast<int>(letters.size());
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (;;) {
      StarWord w;
      w.letters.reserve(static_cast<size_t>(d));
      for (int i : idx) w.letters.push_back(letters[static_cast<size_t>(i)]);
      out.push_back(std::move(w));
      int pos = d - 1;
      while (pos >= 0 && ++idx[static_cast<size_t>(pos)] == L) {
        idx[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return out;
}

std::int64_t count_words(const VariableSignature& sig, int max_degree) {
  const std::int64_t L = sig.letter_count();
  std::int64_t total = 0, power = 1;
  for (int d = 1; d <= max_degree; ++d) {
    power *= L;
    total += power;
  }
  return total;
}

ConjugationMap::ConjugationMap(VariableSignature extended, VariableSignature base)
    : extended_(std::move(extended)),
      base_(std::move(base)),
      by_slot_(static_cast<size_t>(extended_.slot_count())) {}

void ConjugationMap::set_plain(int extended_slot, int base_slot) {
  base_.slot_kind(base_slot);  // bounds check
  by_slot_.at(static_cast<size_t>(extended_slot)) = SlotExpansion{base_slot, -1};
}

void ConjugationMap::set_conjugated(int extended_slot, int unitary_slot,
                                    int base_slot) {
  if (base_.slot_kind(unitary_slot) != SlotKind::Unitary)
    throw WordError("conjugating slot must be unitary");
  base_.slot_kind(base_slot);
  by_slot_.at(static_cast<size_t>(extended_slot)) =
      SlotExpansion{base_slot, unitary_slot};
}

const std::optional<SlotExpansion>& ConjugationMap::expansion(int slot) const {
  return by_slot_.at(static_cast<size_t>(slot));
}

StarWord conjugation_expand(const ConjugationMap& map, const StarWord& w) {
  StarWord out;
  out.letters.reserve(w.letters.size() * 3);
  for (const Letter& l : w.letters) {
    const auto& exp = map.expansion(l.slot);
    if (!exp)
      throw WordError("unknown conjugated variable '" +
                      map.extended().slot_name(l.slot) + "'");
    if (!exp->conjugated()) {
      out.letters.push_back(Letter{exp->base_slot, l.star});
    } else {
      // (u x u*)* = u x* u*; the star on x disappears again for a
      // self-adjoint base slot during normalization.
      out.letters.push_back(Letter{exp->conjugating_slot, false});
      out.letters.push_back(Letter{exp->base_slot, l.star});
      out.letters.push_back(Letter{exp->conjugating_slot, true});
    }
  }
  return normalize(map.base(), std::move(out));
}

}  // namespace orbent
