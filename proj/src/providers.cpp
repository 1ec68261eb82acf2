#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "pokeleague/llm_gateway.hpp"

namespace pokeleague {

using json = nlohmann::json;

std::string_view to_string(ProviderKind k) {
  switch (k) {
    case ProviderKind::OpenAiCompatible: return "openai";
    case ProviderKind::Anthropic: return "anthropic";
    case ProviderKind::Gemini: return "gemini";
    case ProviderKind::Mock: return "mock";
  }
  return "?";
}

std::optional<ProviderKind> parse_provider_kind(std::string_view s) {
  for (auto k : {ProviderKind::OpenAiCompatible, ProviderKind::Anthropic, ProviderKind::Gemini, ProviderKind::Mock})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string default_api_key_env(ProviderKind k) {
  switch (k) {
    case ProviderKind::OpenAiCompatible: return "OPENAI_API_KEY";
    case ProviderKind::Anthropic: return "ANTHROPIC_API_KEY";
    case ProviderKind::Gemini: return "GEMINI_API_KEY";
    case ProviderKind::Mock: return "";
  }
  return "";
}

std::string default_endpoint(ProviderKind k) {
  switch (k) {
    case ProviderKind::OpenAiCompatible: return "https://api.openai.com";
    case ProviderKind::Anthropic: return "https://api.anthropic.com";
    case ProviderKind::Gemini: return "https://generativelanguage.googleapis.com";
    case ProviderKind::Mock: return "";
  }
  return "";
}

std::string default_path(ProviderKind k, const std::string& model) {
  switch (k) {
    case ProviderKind::OpenAiCompatible: return "/v1/chat/completions";
    case ProviderKind::Anthropic: return "/v1/messages";
    case ProviderKind::Gemini: return "/v1beta/models/" + model + ":generateContent";
    case ProviderKind::Mock: return "";
  }
  return "";
}

ProviderConfig provider_from_json(const json& j, const std::filesystem::path& base_dir) {
  ProviderConfig c;
  const auto kind_name = j.value("kind", std::string("openai"));
  auto kind = parse_provider_kind(kind_name);
  if (!kind) throw std::invalid_argument("unknown provider kind \"" + kind_name + "\"");
  c.kind = *kind;
  c.endpoint = j.value("endpoint", default_endpoint(c.kind));
  c.path = j.value("path", std::string());
  c.model = j.value("model", std::string());
  c.api_key_env = j.value("api_key_env", default_api_key_env(c.kind));
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.timeout_s = j.value("timeout_s", c.timeout_s);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_ms = j.value("backoff_ms", c.backoff_ms);
  c.rate_capacity = j.value("rate_capacity", c.rate_capacity);
  c.rate_refill_per_s = j.value("rate_refill_per_s", c.rate_refill_per_s);
  if (j.contains("script")) {
    std::filesystem::path p = j["script"].get<std::string>();
    c.mock_script = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
  if (c.timeout_s <= 0) throw std::invalid_argument("provider timeout_s must be > 0");
  if (c.max_retries < 0) throw std::invalid_argument("provider max_retries must be >= 0");
  if (c.kind == ProviderKind::Mock && c.mock_script.empty())
    throw std::invalid_argument("mock provider needs a \"script\" file");
  return c;
}

json to_json(const ProviderConfig& c) {
  json j = {{"kind", to_string(c.kind)},
            {"endpoint", c.endpoint},
            {"path", c.path},
            {"model", c.model},
            {"api_key_env", c.api_key_env},
            {"temperature", c.temperature},
            {"max_tokens", c.max_tokens},
            {"timeout_s", c.timeout_s},
            {"max_retries", c.max_retries},
            {"backoff_ms", c.backoff_ms},
            {"rate_capacity", c.rate_capacity},
            {"rate_refill_per_s", c.rate_refill_per_s}};
  if (!c.mock_script.empty()) j["script"] = c.mock_script.string();
  return j;
}

TokenBucket::TokenBucket(double capacity, double refill_per_s)
    : capacity_(capacity), refill_per_s_(refill_per_s), tokens_(capacity), last_(Clock::now()) {}

bool TokenBucket::try_acquire(Clock::time_point now) {
  std::lock_guard lock(mu_);
  const double elapsed = std::chrono::duration<double>(now - last_).count();
  if (elapsed > 0) {
    tokens_ = std::min(capacity_, tokens_ + elapsed * refill_per_s_);
    last_ = now;
  }
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

void TokenBucket::acquire() {
  while (!try_acquire(Clock::now())) std::this_thread::sleep_for(std::chrono::milliseconds(20));
}

std::shared_ptr<TokenBucket> rate_limiter_for(const std::string& provider_name, const ProviderConfig& cfg) {
  if (cfg.rate_capacity <= 0) return nullptr;
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<TokenBucket>> buckets;
  std::lock_guard lock(mu);
  auto& b = buckets[provider_name];
  if (!b) b = std::make_shared<TokenBucket>(cfg.rate_capacity, cfg.rate_refill_per_s);
  return b;
}

HttpChatClient::HttpChatClient(ProviderConfig config, Sleeper sleeper, std::shared_ptr<TokenBucket> limiter)
    : config_(std::move(config)), sleeper_(std::move(sleeper)), limiter_(std::move(limiter)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

HttpChatClient::WireRequest HttpChatClient::build_request(const ProviderConfig& cfg, const std::string& key,
                                                          const std::string& system, const std::string& user) {
  WireRequest w;
  w.path = cfg.path.empty() ? default_path(cfg.kind, cfg.model) : cfg.path;
  json body;
  switch (cfg.kind) {
    case ProviderKind::OpenAiCompatible:
      w.headers.emplace_back("Authorization", "Bearer " + key);
      body = {{"model", cfg.model},
              {"messages", json::array({{{"role", "system"}, {"content", system}},
                                        {{"role", "user"}, {"content", user}}})},
              {"temperature", cfg.temperature},
              {"max_tokens", cfg.max_tokens}};
      break;
    case ProviderKind::Anthropic:
      w.headers.emplace_back("x-api-key", key);
      w.headers.emplace_back("anthropic-version", "2023-06-01");
      body = {{"model", cfg.model},
              {"system", system},
              {"messages", json::array({{{"role", "user"}, {"content", user}}})},
              {"temperature", cfg.temperature},
              {"max_tokens", cfg.max_tokens}};
      break;
    case ProviderKind::Gemini:
      w.headers.emplace_back("x-goog-api-key", key);
      body = {{"systemInstruction", {{"parts", json::array({{{"text", system}}})}}},
              {"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", user}}})}}})},
              {"generationConfig", {{"temperature", cfg.temperature}, {"maxOutputTokens", cfg.max_tokens}}}};
      break;
    case ProviderKind::Mock:
      throw std::invalid_argument("mock provider has no wire format");
  }
  w.body = body.dump();
  return w;
}

std::optional<std::string> HttpChatClient::extract_text(ProviderKind kind, const std::string& body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    switch (kind) {
      case ProviderKind::OpenAiCompatible: {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        return std::nullopt;
      }
      case ProviderKind::Anthropic: {
        std::string out;
        for (const auto& block : j.at("content"))
          if (block.value("type", "") == "text") out += block.at("text").get<std::string>();
        return out;
      }
      case ProviderKind::Gemini: {
        std::string out;
        for (const auto& part : j.at("candidates").at(0).at("content").at("parts"))
          if (part.contains("text")) out += part["text"].get<std::string>();
        return out;
      }
      case ProviderKind::Mock: return std::nullopt;
    }
  } catch (const json::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

RawExchange HttpChatClient::complete(const std::string& system, const std::string& user, Phase) {
  RawExchange x;
  x.system = system;
  x.prompt = user;

  const char* key = config_.api_key_env.empty() ? nullptr : std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) {
    x.status = ExchangeStatus::AuthError;
    x.error = "environment variable " + (config_.api_key_env.empty() ? std::string("<unset>") : config_.api_key_env) +
              " is not set";
    return x;
  }

  const auto wire = build_request(config_, key, system, user);
  httplib::Headers headers;
  for (const auto& [k, v] : wire.headers) headers.emplace(k, v);

  const auto started = std::chrono::steady_clock::now();
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);
  const int max_attempts = 1 + config_.max_retries;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (limiter_) limiter_->acquire();
    x.attempt = attempt;

    httplib::Client cli(config_.endpoint);
    cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    auto res = cli.Post(wire.path, headers, wire.body, "application/json");

    bool retryable = false;
    if (!res) {
      const auto err = res.error();
      x.status = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                  err == httplib::Error::Write)
                     ? ExchangeStatus::Timeout
                     : ExchangeStatus::ProviderError;
      x.http_status = 0;
      x.error = "transport error: " + httplib::to_string(err);
      retryable = true;
    } else {
      x.http_status = res->status;
      x.response = res->body;
      if (res->status >= 200 && res->status < 300) {
        if (auto text = extract_text(config_.kind, res->body)) {
          x.status = ExchangeStatus::Ok;
          x.response = *text;
          x.error.clear();
        } else {
          x.status = ExchangeStatus::ProviderError;
          x.error = "could not extract completion text from provider response";
        }
        break;
      }
      if (res->status == 401 || res->status == 403) {
        x.status = ExchangeStatus::AuthError;
        x.error = "provider rejected credentials (HTTP " + std::to_string(res->status) + ")";
        break;
      }
      if (res->status == 429) {
        x.status = ExchangeStatus::RateLimited;
        x.error = "rate limited (HTTP 429)";
        retryable = true;
      } else {
        x.status = ExchangeStatus::ProviderError;
        x.error = "HTTP " + std::to_string(res->status);
        retryable = res->status >= 500;
      }
    }
    if (!retryable || attempt == max_attempts) break;
    sleeper_(std::chrono::milliseconds(static_cast<long long>(config_.backoff_ms) << (attempt - 1)));
  }
  x.latency_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  return x;
}

MockChatClient::MockChatClient(std::vector<std::string> team_responses, std::vector<std::string> action_responses)
    : team_(std::move(team_responses)), action_(std::move(action_responses)) {}

std::unique_ptr<MockChatClient> MockChatClient::from_file(const std::filesystem::path& script) {
  std::ifstream in(script);
  if (!in) throw std::runtime_error("cannot open mock script: " + script.string());
  json doc = json::parse(in);
  auto read = [&](const char* key) {
    std::vector<std::string> out;
    if (!doc.contains(key)) return out;
    for (const auto& r : doc[key]) out.push_back(r.is_string() ? r.get<std::string>() : r.dump());
    return out;
  };
  return std::make_unique<MockChatClient>(read("team"), read("action"));
}

RawExchange MockChatClient::complete(const std::string& system, const std::string& user, Phase phase) {
  RawExchange x;
  x.system = system;
  x.prompt = user;
  x.attempt = 1;
  std::lock_guard lock(mu_);
  auto& pool = phase == Phase::TeamSelect ? team_ : action_;
  auto& next = phase == Phase::TeamSelect ? next_team_ : next_action_;
  if (pool.empty()) {
    x.status = ExchangeStatus::ProviderError;
    x.error = "mock script has no responses for this phase";
    return x;
  }
  x.response = pool[next++ % pool.size()];
  x.status = ExchangeStatus::Ok;
  x.http_status = 200;
  return x;
}

std::unique_ptr<ChatClient> make_chat_client(const std::string& provider_name, const ProviderConfig& cfg) {
  if (cfg.kind == ProviderKind::Mock) return MockChatClient::from_file(cfg.mock_script);
  return std::make_unique<HttpChatClient>(cfg, Sleeper{}, rate_limiter_for(provider_name, cfg));
}

}  // namespace pokeleague
