#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pokeleague/agents.hpp"
#include "pokeleague/exchange.hpp"

namespace pokeleague {

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

/// Neutral preamble sent as the system message on every call.
extern const std::string kSystemPrompt;
/// Sentence appended to repair re-prompts.
extern const std::string kRepairSuffix;

std::string build_team_prompt(const PoolView& pool);
std::string build_battle_prompt(const Dex& dex, const BattleView& view, std::span<const Action> legal,
                                bool include_history = false);
std::string build_repair_prompt(const std::string& original, const std::string& error);

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

struct ParseError {
  enum class Kind {
    NoJsonFound,
    WrongArity,
    IndexOutOfRange,
    DuplicateIndex,
    UnknownActionType,
    IllegalAction,
    MalformedField,
  };
  Kind kind;
  long long value = 0;
  std::string message;
};
std::string_view to_string(ParseError::Kind k);

struct ParsedTeam {
  TeamPick team;
  std::string reasoning;
};

struct ParsedAction {
  Action action;
  std::string reasoning;
};

template <class T>
using ParseResult = std::variant<T, ParseError>;

/// First balanced JSON object in free text (prose, markdown fences, ...).
std::optional<nlohmann::json> extract_first_json_object(std::string_view text);

ParseResult<ParsedTeam> parse_team_response(std::string_view raw, std::size_t pool_size);
ParseResult<ParsedAction> parse_action_response(std::string_view raw, std::span<const Action> legal);

/// The documented response JSON for an action; parse_action_response inverts it.
std::string render_action_response(const Action& action, const std::string& reasoning);

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

enum class ProviderKind { OpenAiCompatible, Anthropic, Gemini, Mock };
std::string_view to_string(ProviderKind k);
std::optional<ProviderKind> parse_provider_kind(std::string_view s);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::OpenAiCompatible;
  std::string endpoint;  // scheme://host[:port]
  std::string path;      // empty: the provider's default route
  std::string model;
  std::string api_key_env;
  double temperature = 0.7;
  int max_tokens = 1024;
  double timeout_s = 60.0;
  int max_retries = 3;
  int backoff_ms = 500;
  // token bucket shared by every client of the same provider name
  double rate_capacity = 0.0;  // 0 disables limiting
  double rate_refill_per_s = 1.0;
  std::filesystem::path mock_script;
};

ProviderConfig provider_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ProviderConfig& c);
std::string default_api_key_env(ProviderKind k);
std::string default_endpoint(ProviderKind k);
std::string default_path(ProviderKind k, const std::string& model);

enum class Phase { TeamSelect, Battle };

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// One logical completion; transport retries happen inside.
  virtual RawExchange complete(const std::string& system, const std::string& user, Phase phase) = 0;
};

/// Thread-safe token bucket. acquire() blocks until a token is available.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;
  TokenBucket(double capacity, double refill_per_s);
  void acquire();
  bool try_acquire(Clock::time_point now);

 private:
  std::mutex mu_;
  double capacity_;
  double refill_per_s_;
  double tokens_;
  Clock::time_point last_;
};

/// Shared per-provider-name buckets.
std::shared_ptr<TokenBucket> rate_limiter_for(const std::string& provider_name, const ProviderConfig& cfg);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// OpenAI-compatible chat completions, Anthropic messages or Gemini
/// generateContent, chosen by config.kind. Retries transport errors, 429
/// and 5xx with exponential backoff.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(ProviderConfig config, Sleeper sleeper = {},
                          std::shared_ptr<TokenBucket> limiter = nullptr);
  RawExchange complete(const std::string& system, const std::string& user, Phase phase) override;

  struct WireRequest {
    std::string path;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
  };
  /// Request shape for one call; exposed for tests.
  static WireRequest build_request(const ProviderConfig& cfg, const std::string& key, const std::string& system,
                                   const std::string& user);
  /// Pulls the completion text out of a provider response body.
  static std::optional<std::string> extract_text(ProviderKind kind, const std::string& body);

 private:
  ProviderConfig config_;
  Sleeper sleeper_;
  std::shared_ptr<TokenBucket> limiter_;
};

/// Offline provider: cycles canned responses from a script file of the form
/// {"team": [text, ...], "action": [text, ...]}.
class MockChatClient final : public ChatClient {
 public:
  MockChatClient(std::vector<std::string> team_responses, std::vector<std::string> action_responses);
  static std::unique_ptr<MockChatClient> from_file(const std::filesystem::path& script);
  RawExchange complete(const std::string& system, const std::string& user, Phase phase) override;

 private:
  std::mutex mu_;
  std::vector<std::string> team_;
  std::vector<std::string> action_;
  std::size_t next_team_ = 0;
  std::size_t next_action_ = 0;
};

std::unique_ptr<ChatClient> make_chat_client(const std::string& provider_name, const ProviderConfig& cfg);

// ---------------------------------------------------------------------------
// LLM-backed agent
// ---------------------------------------------------------------------------

struct GatewayOptions {
  int max_repair_attempts = 3;
  bool include_history = false;
};

class LlmAgent final : public Agent {
 public:
  LlmAgent(std::string id, const Dex& dex, std::unique_ptr<ChatClient> client, GatewayOptions options = {});
  const std::string& id() const override { return id_; }
  AgentDecision select_team(const PoolView& pool) override;
  AgentDecision choose_action(const BattleView& view, std::span<const Action> legal) override;

 private:
  template <class Parsed, class ParseFn>
  AgentDecision run(const std::string& prompt, Phase phase, ParseFn parse);

  std::string id_;
  const Dex& dex_;
  std::unique_ptr<ChatClient> client_;
  GatewayOptions options_;
};

}  // namespace pokeleague
