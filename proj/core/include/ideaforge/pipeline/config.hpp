#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::pipeline {

// Everything a run needs, loaded from one JSON file. The canonical
// serialization of the parsed struct (not the file bytes) is digested into
// the run manifest, so reformatting a config does not invalidate outputs
// but changing any effective value does.
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::vector<std::string> topics;

  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path assets_dir = "assets";

  std::string chat_model = "mock-chat";
  std::string embed_model = "mock-embed";
  // "synthetic" for the seeded offline literature source, "live" for the
  // scholar API.
  std::string paper_source = "synthetic";

  // Retrieval caps.
  size_t retrieval_per_call = 20;
  size_t retrieval_max_papers = 120;
  size_t retrieval_max_actions = 30;

  // Seed idea generation.
  size_t ideas_per_topic = 4000;
  size_t batch_size = 5;
  double rag_probability = 0.5;
  size_t rag_pool = 20;
  size_t rag_sample = 10;
  size_t max_prompt_tokens = 32000;
  double generation_temperature = 1.0;
  int generation_max_tokens = 4096;

  // Deduplication.
  double dedup_threshold = 0.8;
  bool dedup_compare_all_prior = true;
  size_t curve_bucket = 500;

  // Expansion and filtering.
  size_t expand_top = 0;  // 0 expands every kept idea
  size_t novelty_top = 10;

  // Tournament.
  size_t ranking_rounds = 5;

  // Shared LLM plumbing.
  int re_asks = 3;
  int max_parallel = 4;
  std::uint64_t budget_max_requests = 0;
  double budget_max_cost_units = 0.0;
  double cost_per_token = 0.001;

  // Asset locations, relative to assets_dir unless absolute.
  std::filesystem::path proposal_template = "templates/proposal_template.txt";
  std::filesystem::path style_prompt = "prompts/style_normalize.txt";
  std::filesystem::path seed_demo_dir = "demos/seed";
  std::filesystem::path proposal_demo = "demos/proposal_example.txt";

  std::filesystem::path resolve_asset(
      const std::filesystem::path& path) const {
    return path.is_absolute() ? path : assets_dir / path;
  }
};

// Parses and validates; throws ConfigError on unknown top-level keys, bad
// values, or unknown topics.
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);

// Stable serialization of every effective value, used for the run digest.
nlohmann::json config_to_json(const PipelineConfig& config);
std::string config_digest(const PipelineConfig& config);

}  // namespace ideaforge::pipeline
