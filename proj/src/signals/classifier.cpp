#include "coinpulse/signals/classifier.hpp"

#include <fmt/format.h>

#include "coinpulse/corpus/text.hpp"
#include "coinpulse/error.hpp"
#include "coinpulse/parallel.hpp"
#include "coinpulse/toml_lite.hpp"

namespace coinpulse {

std::string_view to_string(SignalLabel l) { return l == SignalLabel::buy ? "buy" : "not_buy"; }

std::string_view to_string(RawLabel l) {
  switch (l) {
    case RawLabel::bullish: return "bullish";
    case RawLabel::bearish: return "bearish";
    case RawLabel::neutral: return "neutral";
  }
  return "neutral";
}

std::string_view to_string(VerdictSource s) { return s == VerdictSource::lexicon ? "lexicon" : "external"; }

std::optional<RawLabel> parse_raw_label(std::string_view text) {
  if (text == "bullish") return RawLabel::bullish;
  if (text == "bearish") return RawLabel::bearish;
  if (text == "neutral") return RawLabel::neutral;
  return std::nullopt;
}

namespace {

Lexicon from_document(const TomlDocument& doc) {
  Lexicon lex;
  lex.relevance_terms = doc.get_string_array("relevance_terms").value_or(std::vector<std::string>{});
  lex.bullish_terms = doc.get_string_array("bullish_terms").value_or(std::vector<std::string>{});
  lex.bearish_terms = doc.get_string_array("bearish_terms").value_or(std::vector<std::string>{});
  return lex;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view toml_text) { return from_document(TomlDocument::parse(toml_text)); }

Lexicon Lexicon::load(const std::filesystem::path& path) { return from_document(TomlDocument::load(path)); }

LexiconClassifier::LexiconClassifier(const Lexicon& lexicon, const CoinRegistry* registry) : registry_(registry) {
  auto add = [&](const std::vector<std::string>& terms, Kind kind) {
    for (const auto& term : terms) {
      const auto tokens = word_tokens(term);
      if (tokens.empty()) throw InputError(fmt::format("lexicon: empty term '{}'", term));
      std::string phrase;
      for (const auto& t : tokens) {
        if (!phrase.empty()) phrase.push_back(' ');
        phrase += t;
      }
      max_tokens_ = std::max(max_tokens_, tokens.size());
      phrases_[phrase] |= kind;
    }
  };
  add(lexicon.relevance_terms, relevance);
  add(lexicon.bullish_terms, bullish);
  add(lexicon.bearish_terms, bearish);
  for (const auto& [phrase, kinds] : phrases_) {
    if ((kinds & bullish) && (kinds & bearish)) {
      throw InputError(fmt::format("lexicon: term '{}' is both bullish and bearish", phrase));
    }
  }
}

ClassifierVerdict LexiconClassifier::classify_one(std::string_view text) const {
  const auto tokens = word_tokens(text);
  bool relevant = false;
  int bull = 0;
  int bear = 0;
  std::string phrase;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    phrase.clear();
    for (std::size_t len = 1; len <= max_tokens_ && start + len <= tokens.size(); ++len) {
      if (len > 1) phrase.push_back(' ');
      phrase += tokens[start + len - 1];
      const auto it = phrases_.find(phrase);
      if (it == phrases_.end()) continue;
      if (it->second & relevance) relevant = true;
      if (it->second & bullish) ++bull;
      if (it->second & bearish) ++bear;
    }
  }
  if (!relevant && registry_ != nullptr) relevant = !registry_->detect_mentions(text).empty();
  if (!relevant) return ClassifierVerdict::irrelevant(VerdictSource::lexicon);
  const RawLabel raw = bull > bear ? RawLabel::bullish : (bear > bull ? RawLabel::bearish : RawLabel::neutral);
  return ClassifierVerdict::labeled(raw, VerdictSource::lexicon);
}

std::vector<ClassifierVerdict> LexiconClassifier::classify(std::span<const std::string> texts) const {
  std::vector<ClassifierVerdict> out(texts.size());
  parallel_for(texts.size(), [&](std::size_t i) { out[i] = classify_one(texts[i]); });
  return out;
}

namespace serial {

std::vector<ClassifierVerdict> classify(const LexiconClassifier& classifier, std::span<const std::string> texts) {
  std::vector<ClassifierVerdict> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(classifier.classify_one(t));
  return out;
}

}  // namespace serial

}  // namespace coinpulse
