#include "coinpulse/signals/external.hpp"

#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

namespace coinpulse {

using nlohmann::json;

ClassifierBatchError::ClassifierBatchError(std::size_t first, std::size_t last, int attempts, const std::string& cause)
    : Error(fmt::format("classifier batch [{}, {}] failed after {} attempt(s): {}", first, last, attempts, cause)),
      first_(first),
      last_(last),
      attempts_(attempts) {}

std::string encode_classifier_request(std::span<const std::string> texts) {
  json body;
  body["texts"] = json::array();
  for (const auto& t : texts) body["texts"].push_back(t);
  return body.dump();
}

std::vector<ClassifierVerdict> decode_classifier_response(const std::string& body, std::size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ClassifierProtocolError(fmt::format("invalid json: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("verdicts") || !doc["verdicts"].is_array()) {
    throw ClassifierProtocolError("response lacks a 'verdicts' array");
  }
  const auto& verdicts = doc["verdicts"];
  if (verdicts.size() != expected) {
    throw ClassifierProtocolError(fmt::format("length mismatch: sent {} texts, got {} verdicts", expected, verdicts.size()));
  }
  std::vector<ClassifierVerdict> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    bool relevant = true;
    const json* label = &v;
    if (v.is_object()) {
      const auto rel = v.find("relevant");
      if (rel == v.end() || !rel->is_boolean()) {
        throw ClassifierProtocolError(fmt::format("verdict {}: missing boolean 'relevant'", i));
      }
      relevant = rel->get<bool>();
      const auto lab = v.find("label");
      label = lab == v.end() ? nullptr : &*lab;
    }
    if (!relevant) {
      out.push_back(ClassifierVerdict::irrelevant(VerdictSource::external));
      continue;
    }
    if (label == nullptr || !label->is_string()) {
      throw ClassifierProtocolError(fmt::format("verdict {}: relevant without a label", i));
    }
    const auto raw = parse_raw_label(label->get<std::string>());
    if (!raw) throw ClassifierProtocolError(fmt::format("verdict {}: unknown label '{}'", i, label->get<std::string>()));
    out.push_back(ClassifierVerdict::labeled(*raw, VerdictSource::external));
  }
  return out;
}

ExternalClassifier::ExternalClassifier(ExternalClassifierConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleep_(std::move(sleeper)) {
  if (config_.batch_size == 0) throw InputError("classifier: batch_size must be >= 1");
  if (config_.retries < 0) throw InputError("classifier: retries must be >= 0");
  const auto scheme = config_.endpoint.find("://");
  if (scheme == std::string::npos) throw InputError(fmt::format("classifier: endpoint '{}' lacks a scheme", config_.endpoint));
  const auto slash = config_.endpoint.find('/', scheme + 3);
  base_url_ = config_.endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<ClassifierVerdict> ExternalClassifier::classify_batch(std::span<const std::string> batch,
                                                                  std::size_t offset) const {
  if (batch.size() > config_.batch_size) {
    throw InputError(fmt::format("classifier: batch of {} exceeds batch_size {}", batch.size(), config_.batch_size));
  }
  if (batch.empty()) return {};
  const std::size_t first = offset;
  const std::size_t last = offset + batch.size() - 1;

  httplib::Client client(base_url_);
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  const auto secs = static_cast<time_t>(timeout.count());
  const auto usecs = static_cast<time_t>((timeout.count() - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!config_.token.empty()) headers.emplace("Authorization", "Bearer " + config_.token);

  const std::string body = encode_classifier_request(batch);
  std::string last_cause;
  const int attempts = config_.retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) sleep_(config_.backoff_base * (1LL << (attempt - 1)));
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_cause = fmt::format("transport error: {}", httplib::to_string(res.error()));
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_cause = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) throw ClassifierBatchError(first, last, attempt + 1, fmt::format("HTTP {}", res->status));
    return decode_classifier_response(res->body, batch.size());
  }
  throw ClassifierBatchError(first, last, attempts, last_cause);
}

std::vector<ClassifierVerdict> ExternalClassifier::classify(std::span<const std::string> texts) const {
  std::vector<ClassifierVerdict> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
    const auto n = std::min(config_.batch_size, texts.size() - start);
    auto part = classify_batch(texts.subspan(start, n), start);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace coinpulse
