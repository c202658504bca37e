#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coinpulse {

struct CoinEntry {
  std::string id;
  std::vector<std::string> aliases;
  std::vector<std::string> tags;
};

/// Sorted, deduplicated coin ids.
using MentionSet = std::vector<std::string>;

/// Coin ids with their match aliases and attribute tags. Coins are kept in
/// ascending id order regardless of input order.
class CoinRegistry {
 public:
  CoinRegistry() = default;
  /// Throws InputError on duplicate ids, empty alias lists, or an alias that
  /// normalizes to the same phrase for two different coins.
  explicit CoinRegistry(std::vector<CoinEntry> coins);

  static CoinRegistry load(const std::filesystem::path& path);
  static CoinRegistry parse(std::string_view json_text);

  const std::vector<CoinEntry>& coins() const { return coins_; }
  std::size_t size() const { return coins_.size(); }
  const CoinEntry* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Coins whose aliases occur in `text` on word boundaries, case-insensitive,
  /// with $ and # prefixes ignored.
  MentionSet detect_mentions(std::string_view text) const;

 private:
  std::vector<CoinEntry> coins_;
  std::unordered_map<std::string, std::size_t> phrase_to_coin_;
  std::size_t max_phrase_tokens_ = 0;
};

/// Free-function form of CoinRegistry::detect_mentions.
inline MentionSet detect_coin_mentions(std::string_view text, const CoinRegistry& registry) {
  return registry.detect_mentions(text);
}

}  // namespace coinpulse
