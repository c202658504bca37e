#include "coinpulse/corpus/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "coinpulse/corpus/text.hpp"
#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

std::string normalize_phrase(std::string_view alias, std::size_t& token_count) {
  const auto tokens = word_tokens(alias);
  token_count = tokens.size();
  std::string phrase;
  for (const auto& t : tokens) {
    if (!phrase.empty()) phrase.push_back(' ');
    phrase += t;
  }
  return phrase;
}

}  // namespace

CoinRegistry::CoinRegistry(std::vector<CoinEntry> coins) : coins_(std::move(coins)) {
  std::sort(coins_.begin(), coins_.end(), [](const CoinEntry& a, const CoinEntry& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < coins_.size(); ++i) {
    const auto& coin = coins_[i];
    if (coin.id.empty()) throw InputError("registry: coin with empty id");
    if (i > 0 && coins_[i - 1].id == coin.id) throw InputError(fmt::format("registry: duplicate coin id '{}'", coin.id));
    if (coin.aliases.empty()) throw InputError(fmt::format("registry: coin '{}' has no aliases", coin.id));
    for (const auto& alias : coin.aliases) {
      std::size_t n = 0;
      const std::string phrase = normalize_phrase(alias, n);
      if (n == 0) throw InputError(fmt::format("registry: coin '{}' has an empty alias '{}'", coin.id, alias));
      const auto [it, inserted] = phrase_to_coin_.emplace(phrase, i);
      if (!inserted && it->second != i) {
        throw InputError(fmt::format("registry: alias '{}' maps to both '{}' and '{}'", alias,
                                     coins_[it->second].id, coin.id));
      }
      max_phrase_tokens_ = std::max(max_phrase_tokens_, n);
    }
  }
}

CoinRegistry CoinRegistry::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(fmt::format("registry: invalid json: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("coins") || !doc["coins"].is_array()) {
    throw InputError("registry: expected an object with a 'coins' array");
  }
  std::vector<CoinEntry> coins;
  for (const auto& c : doc["coins"]) {
    try {
      CoinEntry e;
      e.id = c.at("id").get<std::string>();
      e.aliases = c.at("aliases").get<std::vector<std::string>>();
      if (c.contains("tags")) e.tags = c["tags"].get<std::vector<std::string>>();
      coins.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("registry: malformed coin entry: {}", e.what()));
    }
  }
  return CoinRegistry(std::move(coins));
}

CoinRegistry CoinRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read registry file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const CoinEntry* CoinRegistry::find(std::string_view id) const {
  const auto idx = index_of(id);
  return idx ? &coins_[*idx] : nullptr;
}

std::optional<std::size_t> CoinRegistry::index_of(std::string_view id) const {
  const auto it = std::lower_bound(coins_.begin(), coins_.end(), id,
                                   [](const CoinEntry& e, std::string_view v) { return e.id < v; });
  if (it == coins_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - coins_.begin());
}

MentionSet CoinRegistry::detect_mentions(std::string_view text) const {
  const auto tokens = word_tokens(text);
  std::vector<bool> hit(coins_.size(), false);
  std::string phrase;
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    phrase.clear();
    for (std::size_t len = 1; len <= max_phrase_tokens_ && start + len <= tokens.size(); ++len) {
      if (len > 1) phrase.push_back(' ');
      phrase += tokens[start + len - 1];
      if (const auto it = phrase_to_coin_.find(phrase); it != phrase_to_coin_.end()) hit[it->second] = true;
    }
  }
  MentionSet out;
  for (std::size_t i = 0; i < coins_.size(); ++i) {
    if (hit[i]) out.push_back(coins_[i].id);
  }
  return out;
}

}  // namespace coinpulse
