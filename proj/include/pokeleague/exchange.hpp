#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace pokeleague {

enum class ExchangeStatus { Ok, AuthError, Timeout, RateLimited, ProviderError };
std::string_view to_string(ExchangeStatus s);

/// One prompt/response round trip with a provider, kept verbatim for audit.
struct RawExchange {
  std::string system;
  std::string prompt;
  std::string response;
  long long latency_ms = 0;
  int attempt = 0;  // transport attempts used, 1-based
  ExchangeStatus status = ExchangeStatus::Ok;
  int http_status = 0;
  std::string error;
  std::string parse_outcome;  // "ok" or the parse error, filled by the caller

  bool ok() const { return status == ExchangeStatus::Ok; }
};

nlohmann::json to_json(const RawExchange& x);

}  // namespace pokeleague
