#include "pokeleague/llm_gateway.hpp"

namespace pokeleague {

LlmAgent::LlmAgent(std::string id, const Dex& dex, std::unique_ptr<ChatClient> client, GatewayOptions options)
    : id_(std::move(id)), dex_(dex), client_(std::move(client)), options_(options) {
  if (!client_) throw std::invalid_argument("LlmAgent needs a chat client");
  if (options_.max_repair_attempts < 0) throw std::invalid_argument("max_repair_attempts must be >= 0");
}

// One initial request plus up to max_repair_attempts re-prompts. Each re-prompt
// carries the original prompt and the specific parse error.
template <class Parsed, class ParseFn>
AgentDecision LlmAgent::run(const std::string& prompt, Phase phase, ParseFn parse) {
  std::vector<RawExchange> exchanges;
  std::vector<std::string> errors;
  std::string current = prompt;
  for (int attempt = 0; attempt <= options_.max_repair_attempts; ++attempt) {
    RawExchange x = client_->complete(kSystemPrompt, current, phase);
    if (!x.ok()) {
      x.parse_outcome = "not parsed";
      const std::string reason = id_ + ": provider call failed (" + std::string(to_string(x.status)) + "): " + x.error;
      exchanges.push_back(std::move(x));
      errors.push_back(reason);
      throw AgentFailure(reason, std::move(exchanges), std::move(errors));
    }
    auto result = parse(x.response);
    if (auto* ok = std::get_if<Parsed>(&result)) {
      x.parse_outcome = "ok";
      exchanges.push_back(std::move(x));
      AgentDecision d;
      if constexpr (std::is_same_v<Parsed, ParsedTeam>)
        d.choice = ok->team;
      else
        d.choice = ok->action;
      d.reasoning = ok->reasoning;
      d.exchanges = std::move(exchanges);
      d.repair_errors = std::move(errors);
      return d;
    }
    const auto& err = std::get<ParseError>(result);
    const std::string message = std::string(to_string(err.kind)) + ": " + err.message;
    x.parse_outcome = message;
    exchanges.push_back(std::move(x));
    errors.push_back(message);
    current = build_repair_prompt(prompt, err.message);
  }
  throw AgentFailure(id_ + ": no valid response after " + std::to_string(options_.max_repair_attempts) +
                         " repair attempts",
                     std::move(exchanges), std::move(errors));
}

AgentDecision LlmAgent::select_team(const PoolView& pool) {
  const auto prompt = build_team_prompt(pool);
  const auto size = pool.species.size();
  return run<ParsedTeam>(prompt, Phase::TeamSelect,
                         [size](const std::string& raw) { return parse_team_response(raw, size); });
}

AgentDecision LlmAgent::choose_action(const BattleView& view, std::span<const Action> legal) {
  const auto prompt = build_battle_prompt(dex_, view, legal, options_.include_history);
  return run<ParsedAction>(prompt, Phase::Battle,
                           [legal](const std::string& raw) { return parse_action_response(raw, legal); });
}

}  // namespace pokeleague
