#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coinpulse/corpus/registry.hpp"
#include "coinpulse/corpus/time.hpp"
#include "coinpulse/corpus/tweet.hpp"

namespace testing {

inline coinpulse::Timestamp at(const char* rfc3339) { return coinpulse::parse_rfc3339(rfc3339); }

inline coinpulse::Tweet tweet(std::string id, const char* when, std::string text,
                              coinpulse::AuthorClass cls = coinpulse::AuthorClass::influencer,
                              std::string author = "a1") {
  coinpulse::Tweet t;
  t.id = std::move(id);
  t.author_id = std::move(author);
  t.author_class = cls;
  t.created_at = at(when);
  t.text = std::move(text);
  return t;
}

inline coinpulse::CoinRegistry small_registry() {
  return coinpulse::CoinRegistry({{"BTC", {"btc", "bitcoin"}, {"pow", "store-of-value"}},
                                  {"ETH", {"eth", "ethereum"}, {"smart-contracts", "pos"}},
                                  {"SOL", {"sol", "solana"}, {"smart-contracts", "pos"}},
                                  {"DOGE", {"doge", "dogecoin"}, {"meme", "pow"}}});
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("coinpulse_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<double> normals(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace testing
