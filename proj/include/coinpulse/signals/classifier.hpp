#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coinpulse/corpus/registry.hpp"

namespace coinpulse {

enum class SignalLabel { buy, not_buy };
/// Three-class label as produced by a classifier, before the buy/not-buy collapse.
enum class RawLabel { bullish, bearish, neutral };
enum class VerdictSource { lexicon, external };

std::string_view to_string(SignalLabel l);
std::string_view to_string(RawLabel l);
std::string_view to_string(VerdictSource s);
std::optional<RawLabel> parse_raw_label(std::string_view text);

/// bullish -> buy; bearish and neutral -> not_buy.
constexpr SignalLabel collapse(RawLabel raw) {
  return raw == RawLabel::bullish ? SignalLabel::buy : SignalLabel::not_buy;
}

/// `label` and `raw_label` are set iff `relevant`.
struct ClassifierVerdict {
  bool relevant = false;
  std::optional<SignalLabel> label;
  VerdictSource source = VerdictSource::lexicon;
  std::optional<RawLabel> raw_label;

  static ClassifierVerdict irrelevant(VerdictSource source) { return {false, std::nullopt, source, std::nullopt}; }
  static ClassifierVerdict labeled(RawLabel raw, VerdictSource source) { return {true, collapse(raw), source, raw}; }

  friend bool operator==(const ClassifierVerdict&, const ClassifierVerdict&) = default;
};

/// Term lists for the offline classifier. Terms are matched as whole words
/// (or whole-word phrases), case-insensitively.
struct Lexicon {
  std::vector<std::string> relevance_terms;
  std::vector<std::string> bullish_terms;
  std::vector<std::string> bearish_terms;

  /// Reads `relevance_terms`, `bullish_terms`, `bearish_terms` arrays.
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::string_view toml_text);
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  /// One verdict per text, in input order.
  virtual std::vector<ClassifierVerdict> classify(std::span<const std::string> texts) const = 0;
};

/// Deterministic keyword classifier. A text is relevant when it contains a
/// relevance term or mentions a registry coin; the raw label compares bullish
/// and bearish term counts, with ties going to neutral.
class LexiconClassifier final : public Classifier {
 public:
  /// Throws InputError if the bullish and bearish lists overlap. `registry`
  /// may be null, in which case only relevance terms decide relevance. It must
  /// outlive the classifier.
  LexiconClassifier(const Lexicon& lexicon, const CoinRegistry* registry);

  ClassifierVerdict classify_one(std::string_view text) const;
  /// Parallel over texts.
  std::vector<ClassifierVerdict> classify(std::span<const std::string> texts) const override;

 private:
  enum Kind : unsigned { relevance = 1, bullish = 2, bearish = 4 };
  std::unordered_map<std::string, unsigned> phrases_;
  std::size_t max_tokens_ = 1;
  const CoinRegistry* registry_;
};

inline ClassifierVerdict lexicon_classify(std::string_view text, const Lexicon& lexicon,
                                          const CoinRegistry* registry = nullptr) {
  return LexiconClassifier(lexicon, registry).classify_one(text);
}

namespace serial {
/// Single-threaded reference for LexiconClassifier::classify.
std::vector<ClassifierVerdict> classify(const LexiconClassifier& classifier, std::span<const std::string> texts);
}  // namespace serial

}  // namespace coinpulse
