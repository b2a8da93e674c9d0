#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "forge/search.hpp"

namespace forge {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct LlmConfig {
  std::string endpoint_url;
  std::string model = "gpt-4";
  double temperature = 0.7;
  std::size_t max_retries = 4;
  std::chrono::milliseconds timeout{60000};
  /// Name of the environment variable holding the bearer token.
  std::string api_key_env = "ANSATZ_FORGE_API_KEY";
  std::chrono::milliseconds backoff_base{1000};

  void validate() const;
};

/// Splits `http(s)://host[:port]/path` into scheme+authority and path.
struct ParsedUrl {
  std::string origin;
  std::string path;
};
ParsedUrl parse_url(const std::string& url);

/// The JSON request body (no credentials).
std::string chat_request_body(const LlmConfig& cfg, const std::vector<ChatMessage>& messages);

/// Content of the first choice. Throws ProtocolError on any other shape.
std::string parse_chat_response(const std::string& body);

/// One chat-completions round trip with retry on transport errors, 429 and
/// 5xx (waits base, 2*base, 4*base, ...).
std::string chat(const LlmConfig& cfg, const std::vector<ChatMessage>& messages);

class LlmProposer : public Proposer {
 public:
  explicit LlmProposer(LlmConfig cfg);
  std::string propose(const PromptBundle& prompt) override;

 private:
  LlmConfig cfg_;
};

/// Uniformly random valid genomes in bracket syntax; ignores the prompt.
class RandomProposer : public Proposer {
 public:
  RandomProposer(std::uint64_t seed, std::size_t n_qubits, std::size_t n_blocks,
                 std::vector<int> allowed_ids = {0, 1, 2, 3, 4, 5});
  std::string propose(const PromptBundle& prompt) override;
  AnsatzGenome next();

 private:
  std::mt19937_64 rng_;
  std::size_t n_qubits_;
  std::size_t n_blocks_;
  std::vector<int> allowed_ids_;
};

/// Every valid genome once, lexicographic in (id, a, b) per block with the
/// first block most significant.
class ExhaustiveProposer : public Proposer {
 public:
  static constexpr std::uint64_t kMaxSpace = 10000;

  ExhaustiveProposer(std::size_t n_qubits, std::size_t n_blocks, std::vector<int> allowed_ids);
  std::string propose(const PromptBundle& prompt) override;
  AnsatzGenome next();
  std::uint64_t space_size() const { return space_; }

 private:
  std::vector<GenomeBlock> choices_;
  std::size_t n_blocks_;
  std::uint64_t space_;
  std::uint64_t cursor_ = 0;
};

}  // namespace forge
