#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coinpulse/error.hpp"
#include "coinpulse/signals/classifier.hpp"

namespace coinpulse {

/// Name of the environment variable holding the classifier bearer token.
inline constexpr const char* kClassifierTokenEnv = "COINPULSE_CLASSIFIER_TOKEN";

struct ExternalClassifierConfig {
  /// "http://host:port/path"
  std::string endpoint;
  std::size_t batch_size = 32;
  double timeout_seconds = 30.0;
  /// Extra attempts after the first one fails transiently.
  int retries = 3;
  std::chrono::milliseconds backoff_base{250};
  /// Sent as "Authorization: Bearer <token>" when non-empty.
  std::string token;
};

/// The service answered, but not in the wire format (bad JSON, wrong shape,
/// unknown label, or a verdict count that differs from the request).
class ClassifierProtocolError : public Error {
 public:
  using Error::Error;
};

/// A batch could not be classified after all retries. [first, last] are
/// indices into the caller's input.
class ClassifierBatchError : public Error {
 public:
  ClassifierBatchError(std::size_t first, std::size_t last, int attempts, const std::string& cause);
  std::size_t first() const { return first_; }
  std::size_t last() const { return last_; }
  int attempts() const { return attempts_; }

 private:
  std::size_t first_;
  std::size_t last_;
  int attempts_;
};

/// Request body {"texts": [...]}.
std::string encode_classifier_request(std::span<const std::string> texts);

/// Decodes {"verdicts": [...]}. Entries are either a bare label string
/// ("bullish", implies relevant) or {"relevant": bool, "label": "..."|null}.
std::vector<ClassifierVerdict> decode_classifier_response(const std::string& body, std::size_t expected);

/// Client for a remote classification service. Batches are sent one at a
/// time; transient failures (transport errors, 429, 5xx) are retried with
/// exponential backoff, other failures fail the batch at once.
class ExternalClassifier final : public Classifier {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit ExternalClassifier(ExternalClassifierConfig config, Sleeper sleeper = {});

  /// Classifies one batch. Throws InputError if the batch exceeds
  /// config.batch_size.
  std::vector<ClassifierVerdict> classify_batch(std::span<const std::string> batch, std::size_t offset = 0) const;

  /// Splits `texts` into batches of config.batch_size.
  std::vector<ClassifierVerdict> classify(std::span<const std::string> texts) const override;

  const ExternalClassifierConfig& config() const { return config_; }

 private:
  ExternalClassifierConfig config_;
  std::string base_url_;
  std::string path_;
  Sleeper sleep_;
};

inline std::vector<ClassifierVerdict> external_classify(std::span<const std::string> batch,
                                                        const ExternalClassifierConfig& config) {
  return ExternalClassifier(config).classify_batch(batch);
}

}  // namespace coinpulse
