#pragma once

#include "models.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blinks {

struct ModelPoint {
  std::string model;
  Param at;
  bool operator==(const ModelPoint&) const = default;
};

enum class LetterType { Triangular, Isomorphism };

// One letter of a word, applied left to right within the word: either a
// triangular map carrying its proper base points (src.at the base point,
// dst.at the base point of the inverse), or an automorphism of a single
// model written as a generator word.
struct Letter {
  LetterType type = LetterType::Triangular;
  ModelPoint src;
  ModelPoint dst;
  long long k = 0;        // triangular index; 0 when not recorded
  std::string tag;        // label identifying a concrete map, for cancellation
  bool inverted = false;  // marks the formal inverse of the tagged map
  std::string action;     // isomorphism generator word; empty = identity
};

struct Word {
  std::vector<Letter> letters;  // letters[0] acts first
};

inline Letter triangular_letter(ModelPoint src, ModelPoint dst, long long k = 0,
                                std::string tag = std::string(), bool inverted = false) {
  Letter l;
  l.type = LetterType::Triangular;
  l.src = std::move(src);
  l.dst = std::move(dst);
  l.k = k;
  l.tag = std::move(tag);
  l.inverted = inverted;
  return l;
}

inline Letter iso_letter(const std::string& model, std::string action) {
  Letter l;
  l.type = LetterType::Isomorphism;
  l.src = {model, param(0)};
  l.dst = {model, param(0)};
  l.action = std::move(action);
  return l;
}

// The quadratic map connecting the two degree-4 models, base point at the
// origin of one and landing in the open orbit of the other.
inline Letter connecting_phi0() {
  return triangular_letter({"F2_D2", param(0)}, {"F0_D0", param(1)}, 2, "phi0");
}

inline std::string invert_action_string(const std::string& action) {
  std::vector<std::string> toks;
  std::string tok;
  std::stringstream ss(action);
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) toks.push_back(tok);
  std::string out;
  for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
    std::string t = *it;
    if (t.size() > 3 && t.substr(t.size() - 3) == "^-1") t = t.substr(0, t.size() - 3);
    else t += "^-1";
    if (!out.empty()) out += ",";
    out += t;
  }
  return out;
}

inline Letter letter_inverse(const Letter& l) {
  Letter out = l;
  std::swap(out.src, out.dst);
  if (l.type == LetterType::Triangular) out.inverted = !l.inverted;
  else out.action = invert_action_string(l.action);
  return out;
}

inline Word word_inverse(const Word& w) {
  Word out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(letter_inverse(*it));
  return out;
}

inline Word word_power(const Word& w, long long n) {
  if (n < 1) throw std::invalid_argument("word_power: exponent must be positive");
  if (!w.letters.empty() && w.letters.back().dst.model != w.letters.front().src.model)
    throw std::invalid_argument("word_power: not a self-word");
  Word out;
  for (long long i = 0; i < n; ++i)
    out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  return out;
}

// Validates models, adjacency and letter admissibility; throws on failure.
inline void check_word(const Word& w) {
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    const Letter& l = w.letters[i];
    const ModelDescriptor& ms = find_model(l.src.model);
    const ModelDescriptor& md = find_model(l.dst.model);
    if (i + 1 < w.letters.size() && l.dst.model != w.letters[i + 1].src.model)
      throw std::invalid_argument("word: letters " + std::to_string(i) + " and " +
                                  std::to_string(i + 1) + " are not adjacent");
    if (l.type == LetterType::Triangular) {
      if (l.k != 0 && l.k < 2) throw std::invalid_argument("word: triangular index below 2");
      if (!letter_admissible(ms, l.src.at, md, l.dst.at))
        throw std::invalid_argument("word: inadmissible triangular letter at position " +
                                    std::to_string(i));
    } else {
      if (l.src.model != l.dst.model)
        throw std::invalid_argument("word: isomorphism letter must stay on one model");
      apply_action(ms, l.action, param(0));  // validates the generator word
    }
  }
}

enum class Position { Special, General };

// Two consecutive triangular letters are in special position when the base
// point of the second is the base point of the first one's inverse.
inline Position position(const Letter& l1, const Letter& l2) {
  if (l1.type != LetterType::Triangular || l2.type != LetterType::Triangular)
    throw std::invalid_argument("position: both letters must be triangular");
  if (l1.dst.model != l2.src.model)
    throw std::invalid_argument("position: letters are not adjacent");
  return l1.dst.at == l2.src.at ? Position::Special : Position::General;
}

using CancelOracle = std::function<bool(const Letter&, const Letter&)>;

// Default cancellation knowledge: only a letter and its formal inverse
// compose to an isomorphism.
inline bool formal_cancel(const Letter& l1, const Letter& l2) {
  return !l1.tag.empty() && l1.tag == l2.tag && l1.inverted != l2.inverted &&
         l1.src == l2.dst && l1.dst == l2.src;
}

// Composes two special-position triangular letters (l1 first): an identity
// isomorphism when the oracle certifies cancellation, otherwise a triangular
// letter keeping the outer base points; its index is not recorded.
inline Letter compose_special(const Letter& l1, const Letter& l2,
                              const CancelOracle& oracle = formal_cancel) {
  if (position(l1, l2) != Position::Special)
    throw std::invalid_argument("compose_special: letters in general position");
  if (oracle && oracle(l1, l2)) {
    Letter id = iso_letter(l1.src.model, "");
    id.src = l1.src;
    id.dst = l1.src;
    return id;
  }
  return triangular_letter(l1.src, l2.dst);
}

// Whether an isomorphism letter is the identity map of its model, decided
// exactly on the composed matrix.
inline bool action_is_identity(const Letter& l) {
  if (l.action.empty()) return true;
  const ModelDescriptor& m = find_model(l.src.model);
  return mobius_is_identity(action_to_mobius(m, l.action));
}

enum class ReduceStrategy { Leftmost, Rightmost };

namespace detail {

inline void erase_pair_into(Word& w, std::size_t i, Letter replacement) {
  w.letters[i] = std::move(replacement);
  w.letters.erase(w.letters.begin() + static_cast<std::ptrdiff_t>(i) + 1);
}

inline bool merge_adjacent_isos_once(Word& w) {
  auto& ls = w.letters;
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    if (ls[i].type != LetterType::Isomorphism || ls[i + 1].type != LetterType::Isomorphism)
      continue;
    std::string joined = ls[i].action;
    if (!joined.empty() && !ls[i + 1].action.empty()) joined += ",";
    joined += ls[i + 1].action;
    erase_pair_into(w, i, iso_letter(ls[i].src.model, std::move(joined)));
    return true;
  }
  return false;
}

// Absorbs one isomorphism into a neighboring triangular letter, moving the
// base point on that side through the action.  Only a non-identity action
// turns the letter into a different concrete map, so only then do the tag
// and the inverse marker have to go; `identity_only` restricts the pass to
// the lossless case.
inline bool absorb_iso_once(Word& w, bool identity_only) {
  auto& ls = w.letters;
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    const bool a_iso = ls[i].type == LetterType::Isomorphism;
    const bool b_iso = ls[i + 1].type == LetterType::Isomorphism;
    if (a_iso == b_iso) continue;
    const Letter& iso = a_iso ? ls[i] : ls[i + 1];
    const bool identity = action_is_identity(iso);
    if (identity_only && !identity) continue;
    const ModelDescriptor& m = find_model(iso.src.model);
    Letter t = a_iso ? ls[i + 1] : ls[i];
    if (a_iso)
      t.src.at = apply_action(m, iso.action, t.src.at, /*invert=*/true);
    else
      t.dst.at = apply_action(m, iso.action, t.dst.at, /*invert=*/false);
    if (!identity) {
      t.tag.clear();
      t.inverted = false;
    }
    erase_pair_into(w, i, std::move(t));
    return true;
  }
  return false;
}

// Composes one special-position pair; `cancelling_only` restricts the pass
// to pairs the oracle certifies, which compose to an identity isomorphism
// and must win over merges that would discard the cancellation data.
inline bool compose_pair_once(Word& w, const CancelOracle& oracle, ReduceStrategy strategy,
                              bool cancelling_only) {
  auto& ls = w.letters;
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    if (ls[i].type != LetterType::Triangular || ls[i + 1].type != LetterType::Triangular)
      continue;
    if (position(ls[i], ls[i + 1]) != Position::Special) continue;
    if (cancelling_only && !(oracle && oracle(ls[i], ls[i + 1]))) continue;
    pick = i;
    if (strategy == ReduceStrategy::Leftmost) break;
  }
  if (!pick) return false;
  erase_pair_into(w, *pick, compose_special(ls[*pick], ls[*pick + 1], oracle));
  return true;
}

}  // namespace detail

// Rewrites the word to a minimal one: isomorphisms are absorbed into the
// neighboring triangular letters and special-position pairs are composed,
// until every consecutive pair is in general position.  Lossless rewrites
// (merging isomorphisms, absorbing identity actions, certified
// cancellations) run before the ones that forget which concrete map a
// letter was, so no certifiable cancellation is ever masked.
inline Word reduce(Word w, const CancelOracle& oracle = formal_cancel,
                   ReduceStrategy strategy = ReduceStrategy::Leftmost) {
  for (std::size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (w.letters[i].dst.model != w.letters[i + 1].src.model)
      throw std::invalid_argument("reduce: letters are not adjacent");
  for (;;) {
    if (detail::merge_adjacent_isos_once(w)) continue;
    if (detail::absorb_iso_once(w, /*identity_only=*/true)) continue;
    if (detail::compose_pair_once(w, oracle, strategy, /*cancelling_only=*/true)) continue;
    if (detail::absorb_iso_once(w, /*identity_only=*/false)) continue;
    if (detail::compose_pair_once(w, oracle, strategy, /*cancelling_only=*/false)) continue;
    break;
  }
  return w;
}

inline std::size_t triangular_count(const Word& w) {
  std::size_t n = 0;
  for (const auto& l : w.letters)
    if (l.type == LetterType::Triangular) ++n;
  return n;
}

inline std::size_t word_length(const Word& w, const CancelOracle& oracle = formal_cancel) {
  return triangular_count(reduce(w, oracle));
}

inline bool is_reduced(const Word& w, const CancelOracle& oracle = formal_cancel) {
  const Word r = reduce(w, oracle);
  if (r.letters.size() != w.letters.size()) return false;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (r.letters[i].type != w.letters[i].type) return false;
    if (!(r.letters[i].src == w.letters[i].src) || !(r.letters[i].dst == w.letters[i].dst))
      return false;
  }
  return true;
}

// The proper base points of the map the word represents: nullopt when the
// word reduces to an isomorphism.
inline std::optional<std::pair<ModelPoint, ModelPoint>> proper_base_points(
    const Word& w, const CancelOracle& oracle = formal_cancel) {
  const Word r = reduce(w, oracle);
  if (triangular_count(r) == 0) return std::nullopt;
  return std::make_pair(r.letters.front().src, r.letters.back().dst);
}

// First proper prefix (length 2..n-1) that collapses to an isomorphism.
inline std::optional<std::size_t> cancel_scan(const Word& w,
                                              const CancelOracle& oracle = formal_cancel) {
  const std::size_t n = w.letters.size();
  for (std::size_t i = 2; i < n; ++i) {
    Word prefix;
    prefix.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(i));
    if (word_length(prefix, oracle) == 0) return i;
  }
  return std::nullopt;
}

enum class NormalClass { Biregular, SpecialTriangular, GeneralPair };

// Normal form of a self-word under cyclic conjugation: core = conj^{-1} o w o
// conj with the conjugator letters applied left to right.
struct NormalForm {
  NormalClass cls = NormalClass::Biregular;
  Word core;
  Word conjugator;
};

inline NormalForm normal_form(const Word& w, const CancelOracle& oracle = formal_cancel) {
  NormalForm nf;
  Word cur = reduce(w, oracle);
  std::size_t budget = triangular_count(cur) + 1;
  for (;;) {
    const std::size_t len = triangular_count(cur);
    if (len == 0) {
      nf.cls = NormalClass::Biregular;
      break;
    }
    const Letter first = cur.letters.front();
    const Letter last = cur.letters.back();
    if (last.dst.model != first.src.model)
      throw std::invalid_argument("normal_form: not a self-word");
    if (len == 1) {
      nf.cls = (first.src.at == first.dst.at) ? NormalClass::SpecialTriangular
                                              : NormalClass::GeneralPair;
      break;
    }
    if (position(last, first) == Position::General) {
      nf.cls = NormalClass::GeneralPair;
      break;
    }
    if (budget-- == 0) throw std::logic_error("normal_form: no progress within budget");
    Word next;
    next.letters.push_back(compose_special(last, first, oracle));
    next.letters.insert(next.letters.end(), cur.letters.begin() + 1, cur.letters.end() - 1);
    nf.conjugator.letters.insert(nf.conjugator.letters.begin(), last);
    Word reduced = reduce(std::move(next), oracle);
    if (triangular_count(reduced) >= len)
      throw std::logic_error("normal_form: length did not decrease");
    cur = std::move(reduced);
  }
  nf.core = std::move(cur);
  return nf;
}

// A triangular self-letter is tame when its base points lie in one orbit of
// the boundary action.
inline bool is_tame_triangular(const Letter& l) {
  if (l.type != LetterType::Triangular)
    throw std::invalid_argument("is_tame_triangular: letter is not triangular");
  if (l.src.model != l.dst.model)
    throw std::invalid_argument("is_tame_triangular: letter connects different models");
  return same_orbit(find_model(l.src.model), l.src.at, l.dst.at);
}

inline nlohmann::json model_point_to_json(const ModelPoint& p) {
  return {{"model", p.model}, {"at", param_str(p.at)}};
}

inline ModelPoint model_point_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("model") || !j.contains("at"))
    throw std::invalid_argument("model point json: need model and at");
  return {j["model"].get<std::string>(), parse_param(j["at"].get<std::string>())};
}

inline nlohmann::json word_to_json(const Word& w) {
  nlohmann::json letters = nlohmann::json::array();
  for (const auto& l : w.letters) {
    nlohmann::json lj;
    if (l.type == LetterType::Triangular) {
      lj["type"] = "tri";
      lj["src"] = model_point_to_json(l.src);
      lj["dst"] = model_point_to_json(l.dst);
      if (l.k != 0) lj["k"] = l.k;
      if (!l.tag.empty()) {
        lj["tag"] = l.tag;
        lj["inverse"] = l.inverted;
      }
    } else {
      lj["type"] = "iso";
      lj["model"] = l.src.model;
      lj["action"] = l.action;
    }
    letters.push_back(std::move(lj));
  }
  return {{"letters", std::move(letters)}};
}

inline Word word_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("letters") || !j["letters"].is_array())
    throw std::invalid_argument("word json: missing letters");
  Word w;
  for (const auto& lj : j["letters"]) {
    const std::string type = lj.value("type", "");
    if (type == "tri") {
      if (!lj.contains("src") || !lj.contains("dst"))
        throw std::invalid_argument("word json: triangular letter needs src and dst");
      Letter l = triangular_letter(model_point_from_json(lj["src"]),
                                   model_point_from_json(lj["dst"]), lj.value("k", 0LL),
                                   lj.value("tag", std::string()), lj.value("inverse", false));
      w.letters.push_back(std::move(l));
    } else if (type == "iso") {
      if (!lj.contains("model"))
        throw std::invalid_argument("word json: isomorphism letter needs a model");
      w.letters.push_back(
          iso_letter(lj["model"].get<std::string>(), lj.value("action", std::string())));
    } else {
      throw std::invalid_argument("word json: unknown letter type");
    }
  }
  return w;
}

}  // namespace blinks
