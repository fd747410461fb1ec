#include "ideaforge/ideation/types.hpp"

#include <array>
#include <cctype>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::ideation {

using nlohmann::json;

namespace {

struct FieldSpec {
  const char* label;
  std::string SeedIdea::* member;
  std::vector<std::string> aliases;
};

const std::array<FieldSpec, 6>& field_specs() {
  static const std::array<FieldSpec, 6> specs = {{
      {"Title", &SeedIdea::title, {"title"}},
      {"Problem", &SeedIdea::problem, {"problem", "problem statement"}},
      {"Existing Methods",
       &SeedIdea::existing_methods,
       {"existing methods", "existing method", "prior work"}},
      {"Motivation", &SeedIdea::motivation, {"motivation"}},
      {"Proposed Method",
       &SeedIdea::proposed_method,
       {"proposed method", "method"}},
      {"Experiment Plan",
       &SeedIdea::experiment_plan,
       {"experiment plan", "experiments", "experiment design"}},
  }};
  return specs;
}

// Strips numbering ("1.", "2)"), markdown emphasis, and heading marks from
// a potential label line, returning the lowercase label when the line
// looks like "Label:" or "Label -", plus the inline remainder.
bool match_label(const std::string& line, std::string& label_out,
                 std::string& rest_out) {
  std::string s = util::trim(line);
  while (!s.empty() && (s.front() == '#' || s.front() == '*')) s.erase(0, 1);
  size_t i = 0;
  while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
    s = s.substr(i + 1);
  }
  s = util::trim(s);
  size_t colon = s.find(':');
  if (colon == std::string::npos) return false;
  std::string label = s.substr(0, colon);
  while (!label.empty() && (label.back() == '*' || label.back() == '#')) {
    label.pop_back();
  }
  label = util::to_lower(util::trim(label));
  if (label.empty() || label.size() > 24) return false;
  label_out = label;
  rest_out = util::trim(s.substr(colon + 1));
  // Remainder may carry trailing bold marks from "**Title:** text".
  while (!rest_out.empty() && rest_out.front() == '*') rest_out.erase(0, 1);
  rest_out = util::trim(rest_out);
  return true;
}

const FieldSpec* spec_for_label(const std::string& label) {
  for (const auto& spec : field_specs()) {
    for (const auto& alias : spec.aliases) {
      if (label == alias) return &spec;
    }
  }
  return nullptr;
}

}  // namespace

bool same_content(const SeedIdea& a, const SeedIdea& b) {
  return a.title == b.title && a.problem == b.problem &&
         a.existing_methods == b.existing_methods &&
         a.motivation == b.motivation &&
         a.proposed_method == b.proposed_method &&
         a.experiment_plan == b.experiment_plan;
}

json seed_to_json(const SeedIdea& idea) {
  return json{{"title", idea.title},
              {"problem", idea.problem},
              {"existing_methods", idea.existing_methods},
              {"motivation", idea.motivation},
              {"proposed_method", idea.proposed_method},
              {"experiment_plan", idea.experiment_plan},
              {"topic", idea.topic_name},
              {"batch_index", idea.batch_index},
              {"rag_used", idea.rag_used}};
}

SeedIdea seed_from_json(const json& row) {
  SeedIdea idea;
  idea.title = row.at("title").get<std::string>();
  idea.problem = row.value("problem", "");
  idea.existing_methods = row.value("existing_methods", "");
  idea.motivation = row.value("motivation", "");
  idea.proposed_method = row.value("proposed_method", "");
  idea.experiment_plan = row.value("experiment_plan", "");
  idea.topic_name = row.value("topic", "");
  idea.batch_index = row.value("batch_index", -1);
  idea.rag_used = row.value("rag_used", false);
  return idea;
}

std::string format_seed_idea(const SeedIdea& idea) {
  std::string out;
  for (const auto& spec : field_specs()) {
    out += std::string(spec.label) + ": " + idea.*(spec.member) + "\n";
  }
  return out;
}

SeedIdea parse_seed_idea(const std::string& text) {
  SeedIdea idea;
  std::array<bool, 6> seen{};
  const FieldSpec* current = nullptr;

  for (const std::string& line : util::split_lines(text)) {
    std::string label;
    std::string rest;
    if (match_label(line, label, rest)) {
      if (const FieldSpec* spec = spec_for_label(label)) {
        current = spec;
        size_t index = static_cast<size_t>(spec - field_specs().data());
        seen[index] = true;
        idea.*(spec->member) = rest;
        continue;
      }
    }
    if (current) {
      std::string& field = idea.*(current->member);
      std::string trimmed = util::trim(line);
      if (!trimmed.empty()) {
        if (!field.empty()) field += " ";
        field += trimmed;
      }
    }
  }

  for (size_t i = 0; i < field_specs().size(); ++i) {
    if (!seen[i] || util::trim(idea.*(field_specs()[i].member)).empty()) {
      throw ParseError(std::string("seed idea missing field: ") +
                           field_specs()[i].label,
                       field_specs()[i].label);
    }
  }
  return idea;
}

std::vector<SeedIdea> parse_seed_batch(const std::string& text) {
  std::vector<std::string> chunks;
  std::string current;
  for (const std::string& line : util::split_lines(text)) {
    std::string t = util::trim(line);
    bool separator = t == "###" || t.rfind("### ", 0) == 0 ||
                     util::starts_with_icase(t, "idea ");
    if (separator) {
      if (!util::trim(current).empty()) chunks.push_back(current);
      current.clear();
      continue;
    }
    current += line;
    current += '\n';
  }
  if (!util::trim(current).empty()) chunks.push_back(current);

  std::vector<SeedIdea> ideas;
  for (const auto& chunk : chunks) {
    try {
      ideas.push_back(parse_seed_idea(chunk));
    } catch (const ParseError&) {
      // Malformed chunk inside an otherwise good batch; skip it.
    }
  }
  return ideas;
}

}  // namespace ideaforge::ideation
