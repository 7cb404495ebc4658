#include "rbam/backend.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "rbam/error.hpp"

namespace rbam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

void update_max(std::atomic<std::size_t>& max, std::size_t value) {
  auto cur = max.load();
  while (value > cur && !max.compare_exchange_weak(cur, value)) {
  }
}

}  // namespace

// GenerationParams ----------------------------------------------------------

std::vector<std::string> GenerationParams::violations() const {
  std::vector<std::string> v;
  if (max_new_tokens < 1) v.push_back("max_new_tokens must be >= 1");
  if (!(top_p >= 0.0 && top_p <= 1.0)) v.push_back("top_p must lie in [0, 1]");
  if (!(temperature >= 0.0)) v.push_back("temperature must be >= 0");
  return v;
}

nlohmann::json GenerationParams::to_json() const {
  // nlohmann::json objects keep keys sorted, which makes dump() canonical.
  return {{"max_new_tokens", max_new_tokens},
          {"sampling_enabled", sampling_enabled},
          {"temperature", temperature},
          {"top_p", top_p}};
}

GenerationParams GenerationParams::from_json(const nlohmann::json& j) {
  GenerationParams p;
  try {
    p.temperature = j.value("temperature", p.temperature);
    p.top_p = j.value("top_p", p.top_p);
    p.sampling_enabled = j.value("sampling_enabled", p.sampling_enabled);
    p.max_new_tokens = j.value("max_new_tokens", p.max_new_tokens);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generation params: ") + e.what());
  }
  return p;
}

std::string record_replay_key(std::string_view prompt, const GenerationParams& params) {
  std::string material(prompt);
  material.push_back('\0');
  material += params.to_json().dump();
  return sha256_hex(material);
}

// MockBackend ---------------------------------------------------------------

MockBackend::MockBackend(Responder responder, std::string backend_id)
    : responder_(std::move(responder)), id_(std::move(backend_id)) {}

std::unique_ptr<MockBackend> MockBackend::scripted(std::vector<std::string> answers) {
  if (answers.empty()) throw ConfigError("scripted mock needs at least one answer");
  return std::make_unique<MockBackend>(
      [answers = std::move(answers)](std::string_view, std::size_t i) {
        return answers[i % answers.size()];
      });
}

std::unique_ptr<MockBackend> MockBackend::constant(std::string answer) {
  return std::make_unique<MockBackend>(
      [answer = std::move(answer)](std::string_view, std::size_t) { return answer; });
}

BackendResponse MockBackend::complete(std::string_view prompt, const GenerationParams&) {
  const std::size_t index = calls_.fetch_add(1);
  update_max(max_in_flight_, in_flight_.fetch_add(1) + 1);
  const auto start = Clock::now();
  BackendResponse r;
  try {
    if (hold_.count() > 0) std::this_thread::sleep_for(hold_);
    if (fail_ && fail_(index)) throw BackendError("mock failure on call " + std::to_string(index));
    r.raw_text = responder_(prompt, index);
  } catch (...) {
    in_flight_.fetch_sub(1);
    if (after_call_) after_call_(index + 1);
    throw;
  }
  r.latency_seconds = scripted_latency_ ? *scripted_latency_ : seconds_since(start);
  r.backend_id = id_;
  in_flight_.fetch_sub(1);
  if (after_call_) after_call_(index + 1);
  return r;
}

// HttpBackend ---------------------------------------------------------------

HttpBackend::HttpBackend(HttpSettings settings) : settings_(std::move(settings)) {
  const auto& url = settings_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  endpoint_.origin = url.substr(0, path_start);
  endpoint_.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!endpoint_.prefix.empty() && endpoint_.prefix.back() == '/') endpoint_.prefix.pop_back();
  if (settings_.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
}

std::string HttpBackend::id() const {
  return "http:" + (settings_.model.empty() ? settings_.base_url : settings_.model);
}

std::string HttpBackend::api_key() const {
  if (!settings_.api_key.empty()) return settings_.api_key;
  if (settings_.api_key_env.empty()) return {};
  const char* v = std::getenv(settings_.api_key_env.c_str());
  return v ? v : "";
}

nlohmann::json HttpBackend::request_body(std::string_view prompt,
                                         const GenerationParams& params) const {
  return {{"model", settings_.model},
          {"prompt", std::string(prompt)},
          {"max_tokens", params.max_new_tokens},
          {"temperature", params.temperature},
          {"top_p", params.top_p}};
}

BackendResponse HttpBackend::complete(std::string_view prompt, const GenerationParams& params) {
  const std::string payload =
      request_body(prompt, params).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

  httplib::Headers headers;
  if (const auto key = api_key(); !key.empty())
    headers.emplace("Authorization", "Bearer " + key);

  const auto timeout = std::chrono::duration<double>(settings_.timeout_seconds);
  double backoff = settings_.retry.initial_backoff_seconds;
  std::string last_error;
  for (int attempt = 1; attempt <= settings_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= settings_.retry.backoff_multiplier;
    }
    httplib::Client client(endpoint_.origin);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    ++requests_;
    const auto start = Clock::now();
    auto res = client.Post(endpoint_.prefix + "/completions", headers, payload, "application/json");
    const double latency = seconds_since(start);

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      BackendResponse r;
      r.raw_text = j.at("choices").at(0).at("text").get<std::string>();
      r.latency_seconds = latency;
      r.backend_id = id();
      return r;
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed response body: ") + e.what();
    }
  }
  throw BackendError("completion failed after " + std::to_string(settings_.retry.max_attempts) +
                     " attempts: " + last_error);
}

void HttpBackend::probe() {
  httplib::Client client(endpoint_.origin);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(std::chrono::seconds(10));
  httplib::Headers headers;
  if (const auto key = api_key(); !key.empty())
    headers.emplace("Authorization", "Bearer " + key);
  auto res = client.Get(endpoint_.prefix + "/models", headers);
  if (!res)
    throw BackendError("backend unreachable at " + settings_.base_url + ": " +
                       httplib::to_string(res.error()));
}

// ReplayCache ---------------------------------------------------------------

ReplayCache::ReplayCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // no cache yet
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      CacheEntry e;
      e.key = j.at("key").get<std::string>();
      e.raw_text = j.at("raw_text").get<std::string>();
      e.latency_seconds = j.at("latency_seconds").get<double>();
      e.params = GenerationParams::from_json(j.value("params", nlohmann::json::object()));
      entries_.emplace(e.key, std::move(e));  // first recording wins
    } catch (const nlohmann::json::exception&) {
      if (in.peek() != std::char_traits<char>::eof())
        throw Error("corrupt cache line in " + path_);
      // torn last line from an interrupted append
    }
  }
}

std::optional<CacheEntry> ReplayCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ReplayCache::append(const CacheEntry& entry) {
  std::lock_guard lock(mutex_);
  if (entries_.count(entry.key)) return;
  nlohmann::ordered_json j;
  j["key"] = entry.key;
  j["raw_text"] = entry.raw_text;
  j["latency_seconds"] = entry.latency_seconds;
  j["params"] = entry.params.to_json();
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to cache " + path_);
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  out.flush();
  entries_.emplace(entry.key, entry);
}

std::size_t ReplayCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

// CachingBackend ------------------------------------------------------------

CachingBackend::CachingBackend(std::shared_ptr<ReplayCache> cache, std::unique_ptr<Backend> inner)
    : cache_(std::move(cache)), inner_(std::move(inner)) {}

std::string CachingBackend::id() const { return inner_ ? inner_->id() : "replay"; }

void CachingBackend::probe() {
  if (inner_) inner_->probe();
}

std::size_t CachingBackend::external_calls() const {
  return inner_ ? inner_->external_calls() : 0;
}

BackendResponse CachingBackend::complete(std::string_view prompt, const GenerationParams& params) {
  const auto key = record_replay_key(prompt, params);
  if (auto hit = cache_->find(key)) {
    ++hits_;
    return {hit->raw_text, hit->latency_seconds, "replay", true};
  }
  ++misses_;
  if (!inner_) throw BackendError("replay cache miss for key " + key);
  auto r = inner_->complete(prompt, params);
  cache_->append({key, r.raw_text, r.latency_seconds, params});
  return r;
}

}  // namespace rbam
