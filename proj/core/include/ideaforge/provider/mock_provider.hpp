#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideaforge/provider/provider.hpp"

namespace ideaforge::provider {

// One scripted rule. When the prompt contains `match`, the provider fails
// the next `fail_times` requests transiently (exercising retry paths), then
// replies with `response`. Response templates: {{n}} expands to a per-rule
// counter starting at 1, {{hash8}} to the first 8 hex chars of the request
// digest. Rules with {{n}} are stateful, so scripts using them should be
// driven sequentially.
struct MockRule {
  std::string match;
  std::string response;
  int fail_times = 0;
};

struct MockScript {
  size_t embedding_dim = 64;
  std::vector<MockRule> rules;
};

MockScript mock_script_from_json(const nlohmann::json& doc);
MockScript load_mock_script(const std::filesystem::path& path);

// Fully offline provider. Scripted rules take precedence; prompts matching
// no rule fall through to deterministic built-ins keyed on the marker
// phrases of each pipeline stage (planning, relevance scoring, seed
// batches, expansion, filtering, style editing, pairwise judging), so an
// end-to-end run works with an empty script. Every reply is a pure
// function of the request, which keeps replays byte-identical.
class MockProvider : public Provider {
 public:
  MockProvider();
  explicit MockProvider(MockScript script);

  std::string name() const override { return "mock"; }
  Completion complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(
      const EmbeddingRequest& request) override;

 private:
  std::string scripted_reply(const std::string& prompt,
                             const std::string& digest, bool& matched);
  std::string built_in_reply(const std::string& prompt,
                             const std::string& digest);

  MockScript script_;
  std::mutex mutex_;
  std::vector<int> failures_left_;
  std::vector<uint64_t> counters_;
};

}  // namespace ideaforge::provider
