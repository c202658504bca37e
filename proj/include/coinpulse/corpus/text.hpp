#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coinpulse {

/// Splits text into lowercase word tokens. Word characters are ASCII letters,
/// digits, '_' and every byte of a multi-byte UTF-8 sequence, so "$BTC",
/// "#btc" and "BTC!" all yield "btc" and "dog" never matches inside "doge".
std::vector<std::string> word_tokens(std::string_view text);

}  // namespace coinpulse
