#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::proposal {

// A full project proposal in the fixed seven-section format.
struct ProjectProposal {
  std::string title;
  std::string problem_statement;
  std::string motivation;
  std::string proposed_method;
  std::string experiment_plan;  // the step-by-step section
  std::string test_case_examples;
  std::string fallback_plan;

  std::string provenance = "ai";  // "ai" | "human"
  std::string topic_name;
  std::string source_idea_title;  // seed idea this was expanded from
};

inline constexpr size_t kSectionCount = 7;

// Canonical section headings, in order.
const std::vector<std::string>& section_headings();

nlohmann::json proposal_to_json(const ProjectProposal& proposal);
ProjectProposal proposal_from_json(const nlohmann::json& row);

// Canonical numbered layout ("1. Title\n...\n\n2. Problem Statement\n...").
std::string format_proposal(const ProjectProposal& proposal);

// Tolerant parse: numbered or plain headings, optional colons, markdown
// marks, case-insensitive. Throws ParseError naming the first missing
// section.
ProjectProposal parse_proposal(const std::string& text);

size_t proposal_word_count(const ProjectProposal& proposal);

}  // namespace ideaforge::proposal
