#include "forge/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "forge/error.hpp"

namespace forge {

using nlohmann::json;

void LlmConfig::validate() const {
  if (endpoint_url.empty()) throw ConfigurationError("LLM endpoint URL is empty");
  if (!(temperature >= 0.0)) throw ConfigurationError("temperature must be non-negative");
  if (api_key_env.empty()) throw ConfigurationError("API key variable name is empty");
  parse_url(endpoint_url);
}

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigurationError("endpoint URL needs an http:// or https:// scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigurationError("unsupported URL scheme '" + scheme + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.origin.size() <= scheme_end + 3) throw ConfigurationError("endpoint URL has no host");
  return out;
}

std::string chat_request_body(const LlmConfig& cfg, const std::vector<ChatMessage>& messages) {
  json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  body["messages"] = json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  return body.dump();
}

std::string parse_chat_response(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("choices")) {
    throw ProtocolError("response has no 'choices' field");
  }
  const auto& choices = doc["choices"];
  if (!choices.is_array() || choices.empty()) throw ProtocolError("'choices' is empty");
  const auto& first = choices[0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
      !first["message"].contains("content") || !first["message"]["content"].is_string()) {
    throw ProtocolError("first choice has no message content");
  }
  return first["message"]["content"].get<std::string>();
}

std::string chat(const LlmConfig& cfg, const std::vector<ChatMessage>& messages) {
  cfg.validate();
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigurationError("environment variable " + cfg.api_key_env + " is not set");
  }
  const ParsedUrl url = parse_url(cfg.endpoint_url);
  const std::string body = chat_request_body(cfg, messages);

  httplib::Client client(url.origin);
  client.set_bearer_token_auth(key);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string last_failure;
  auto delay = cfg.backoff_base;
  for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = client.Post(url.path, body, "application/json");
    if (!res) {
      last_failure = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "server returned status " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw ProtocolError("server returned status " + std::to_string(res->status));
    }
    return parse_chat_response(res->body);
  }
  throw TransportError("giving up after " + std::to_string(cfg.max_retries + 1) +
                       " attempts: " + last_failure);
}

LlmProposer::LlmProposer(LlmConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string LlmProposer::propose(const PromptBundle& prompt) {
  return chat(cfg_, {{"system", prompt.system}, {"user", prompt.user}});
}

RandomProposer::RandomProposer(std::uint64_t seed, std::size_t n_qubits, std::size_t n_blocks,
                               std::vector<int> allowed_ids)
    : rng_(seed), n_qubits_(n_qubits), n_blocks_(n_blocks), allowed_ids_(std::move(allowed_ids)) {
  if (n_qubits_ < 2) throw ValidationError("random proposer needs at least 2 qubits");
  if (n_blocks_ < 1) throw ValidationError("random proposer needs at least 1 block");
  if (allowed_ids_.empty()) throw ValidationError("random proposer needs at least one block id");
  for (int id : allowed_ids_) {
    if (id < 0 || id >= kNumBlockTemplates) {
      throw ValidationError("block id " + std::to_string(id) + " is outside 0-5");
    }
  }
}

AnsatzGenome RandomProposer::next() {
  std::uniform_int_distribution<std::size_t> pick_id(0, allowed_ids_.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_a(0, n_qubits_ - 1);
  std::uniform_int_distribution<std::size_t> pick_b(0, n_qubits_ - 2);
  AnsatzGenome g;
  for (std::size_t k = 0; k < n_blocks_; ++k) {
    GenomeBlock block;
    block.block_id = allowed_ids_[pick_id(rng_)];
    block.a = pick_a(rng_);
    block.b = pick_b(rng_);
    if (block.b >= block.a) ++block.b;
    g.blocks.push_back(block);
  }
  return g;
}

std::string RandomProposer::propose(const PromptBundle&) { return format_genome(next()); }

ExhaustiveProposer::ExhaustiveProposer(std::size_t n_qubits, std::size_t n_blocks,
                                       std::vector<int> allowed_ids)
    : n_blocks_(n_blocks) {
  if (n_qubits < 2) throw ValidationError("exhaustive proposer needs at least 2 qubits");
  if (n_blocks < 1) throw ValidationError("exhaustive proposer needs at least 1 block");
  std::sort(allowed_ids.begin(), allowed_ids.end());
  allowed_ids.erase(std::unique(allowed_ids.begin(), allowed_ids.end()), allowed_ids.end());
  if (allowed_ids.empty()) throw ValidationError("exhaustive proposer needs at least one block id");
  for (int id : allowed_ids) {
    if (id < 0 || id >= kNumBlockTemplates) {
      throw ValidationError("block id " + std::to_string(id) + " is outside 0-5");
    }
    for (std::size_t a = 0; a < n_qubits; ++a) {
      for (std::size_t b = 0; b < n_qubits; ++b) {
        if (a != b) choices_.push_back({id, a, b});
      }
    }
  }
  space_ = 1;
  for (std::size_t k = 0; k < n_blocks_; ++k) {
    space_ *= choices_.size();
    if (space_ > kMaxSpace) {
      throw ResourceError("exhaustive space exceeds " + std::to_string(kMaxSpace) + " genomes");
    }
  }
}

AnsatzGenome ExhaustiveProposer::next() {
  if (cursor_ >= space_) {
    throw EndOfSpaceError("all " + std::to_string(space_) + " genomes have been proposed");
  }
  AnsatzGenome g;
  g.blocks.resize(n_blocks_);
  std::uint64_t rest = cursor_++;
  for (std::size_t k = n_blocks_; k-- > 0;) {
    g.blocks[k] = choices_[rest % choices_.size()];
    rest /= choices_.size();
  }
  return g;
}

std::string ExhaustiveProposer::propose(const PromptBundle&) { return format_genome(next()); }

}  // namespace forge
