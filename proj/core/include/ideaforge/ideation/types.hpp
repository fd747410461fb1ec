#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::ideation {

// A short fielded idea, the unit of overgeneration. Kept deliberately
// compact; promising ones are expanded into full proposals later.
struct SeedIdea {
  std::string title;
  std::string problem;
  std::string existing_methods;
  std::string motivation;
  std::string proposed_method;
  std::string experiment_plan;

  std::string topic_name;
  int batch_index = -1;
  bool rag_used = false;
};

bool same_content(const SeedIdea& a, const SeedIdea& b);

nlohmann::json seed_to_json(const SeedIdea& idea);
SeedIdea seed_from_json(const nlohmann::json& row);

// Canonical fielded layout ("Title: ...\nProblem: ..."); parsing it back
// yields an identical idea.
std::string format_seed_idea(const SeedIdea& idea);

// Tolerant parse of one fielded idea: labels may be reordered, numbered,
// bold-marked, or vary in case. Throws ParseError naming the first
// missing field.
SeedIdea parse_seed_idea(const std::string& text);

// Splits a batch reply on "###" separator lines (or "Idea N" headers) and
// parses each chunk. Chunks that fail to parse are skipped; the batch
// fails only if nothing parses.
std::vector<SeedIdea> parse_seed_batch(const std::string& text);

struct GenerationConfig {
  size_t ideas_per_topic = 4000;
  size_t batch_size = 5;
  double rag_probability = 0.5;  // chance a batch prompt carries papers
  size_t rag_pool = 20;          // top retrieved papers eligible
  size_t rag_sample = 10;        // papers sampled into the prompt
  size_t max_prompt_tokens = 32000;
  int re_asks = 3;
  std::string model;
  double temperature = 1.0;
  int max_tokens = 4096;
  std::vector<SeedIdea> demos;
};

}  // namespace ideaforge::ideation
