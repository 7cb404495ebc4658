#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rbam {

/// Decoding settings sent with every completion request.
struct GenerationParams {
  double temperature = 0.7;
  double top_p = 1.0;
  bool sampling_enabled = false;  // false: greedy
  int max_new_tokens = 1;

  std::vector<std::string> violations() const;
  /// Sorted-key JSON; the byte form is part of the cache key.
  nlohmann::json to_json() const;
  static GenerationParams from_json(const nlohmann::json& j);

  bool operator==(const GenerationParams&) const = default;
};

struct BackendResponse {
  std::string raw_text;
  double latency_seconds = 0.0;
  std::string backend_id;
  bool cached = false;
};

/// A completion source. Implementations must tolerate concurrent calls.
class Backend {
public:
  virtual ~Backend() = default;

  /// Returns the generation verbatim. Throws BackendError once retries are
  /// exhausted.
  virtual BackendResponse complete(std::string_view prompt, const GenerationParams& params) = 0;

  virtual std::string id() const = 0;

  /// Checks reachability before a run; throws BackendError if unreachable.
  virtual void probe() {}

  /// Number of external (network or inner-backend) calls issued so far.
  virtual std::size_t external_calls() const = 0;
};

/// SHA-256 (hex) over the prompt bytes, a NUL, and the canonical params JSON.
std::string record_replay_key(std::string_view prompt, const GenerationParams& params);

/// In-process backend driven by a responder function. Optionally reports a
/// scripted latency instead of the measured one, and can hold each call for
/// a while so tests can observe concurrency.
class MockBackend final : public Backend {
public:
  using Responder = std::function<std::string(std::string_view prompt, std::size_t call_index)>;

  explicit MockBackend(Responder responder, std::string backend_id = "mock");

  /// Cycles through `answers` in call order.
  static std::unique_ptr<MockBackend> scripted(std::vector<std::string> answers);
  static std::unique_ptr<MockBackend> constant(std::string answer);

  void set_scripted_latency(std::optional<double> seconds) { scripted_latency_ = seconds; }
  void set_hold(std::chrono::milliseconds hold) { hold_ = hold; }
  /// Fails every call whose index satisfies the predicate.
  void set_failure(std::function<bool(std::size_t call_index)> fail) { fail_ = std::move(fail); }
  /// Invoked after each completed call with the number of calls so far.
  void set_after_call(std::function<void(std::size_t calls)> hook) { after_call_ = std::move(hook); }

  BackendResponse complete(std::string_view prompt, const GenerationParams& params) override;
  std::string id() const override { return id_; }
  std::size_t external_calls() const override { return calls_.load(); }
  std::size_t max_in_flight() const { return max_in_flight_.load(); }

private:
  Responder responder_;
  std::string id_;
  std::optional<double> scripted_latency_;
  std::chrono::milliseconds hold_{0};
  std::function<bool(std::size_t)> fail_;
  std::function<void(std::size_t)> after_call_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
};

struct RetryPolicy {
  int max_attempts = 3;
  double initial_backoff_seconds = 1.0;
  double backoff_multiplier = 2.0;
};

struct HttpSettings {
  std::string base_url = "http://localhost:8000/v1";
  std::string model;
  std::string api_key;  // empty: read api_key_env
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 120.0;
  RetryPolicy retry;
};

/// OpenAI-compatible completions client: POST <base_url>/completions with
/// {model, prompt, max_tokens, temperature, top_p}; the answer is
/// choices[0].text.
class HttpBackend final : public Backend {
public:
  explicit HttpBackend(HttpSettings settings);

  BackendResponse complete(std::string_view prompt, const GenerationParams& params) override;
  std::string id() const override;
  void probe() override;
  std::size_t external_calls() const override { return requests_.load(); }

  /// Request body as sent on the wire.
  nlohmann::json request_body(std::string_view prompt, const GenerationParams& params) const;

private:
  struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path below the origin, no trailing slash
  };

  std::string api_key() const;

  HttpSettings settings_;
  Endpoint endpoint_;
  std::atomic<std::size_t> requests_{0};
};

struct CacheEntry {
  std::string key;
  std::string raw_text;
  double latency_seconds = 0.0;
  GenerationParams params;
};

/// Append-only JSONL store of recorded completions. Lookups are concurrent;
/// appends go through one lock and are flushed per line. A torn final line
/// (interrupted write) is skipped on load.
class ReplayCache {
public:
  explicit ReplayCache(std::string path);

  std::optional<CacheEntry> find(const std::string& key) const;
  void append(const CacheEntry& entry);
  std::size_t size() const;
  const std::string& path() const { return path_; }

private:
  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
};

/// Serves recorded completions from a cache. On a miss it forwards to the
/// inner backend and records the answer; without an inner backend a miss is
/// a BackendError. Cached answers carry their original latency.
class CachingBackend final : public Backend {
public:
  CachingBackend(std::shared_ptr<ReplayCache> cache, std::unique_ptr<Backend> inner = nullptr);

  BackendResponse complete(std::string_view prompt, const GenerationParams& params) override;
  std::string id() const override;
  void probe() override;
  std::size_t external_calls() const override;

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

private:
  std::shared_ptr<ReplayCache> cache_;
  std::unique_ptr<Backend> inner_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

}  // namespace rbam
