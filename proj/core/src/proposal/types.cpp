#include "ideaforge/proposal/types.hpp"

#include <array>
#include <cctype>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::proposal {

using nlohmann::json;

namespace {

struct SectionSpec {
  const char* heading;
  std::string ProjectProposal::* member;
  std::vector<std::string> aliases;
};

const std::array<SectionSpec, 7>& section_specs() {
  static const std::array<SectionSpec, 7> specs = {{
      {"Title", &ProjectProposal::title, {"title"}},
      {"Problem Statement",
       &ProjectProposal::problem_statement,
       {"problem statement", "problem"}},
      {"Motivation", &ProjectProposal::motivation, {"motivation"}},
      {"Proposed Method",
       &ProjectProposal::proposed_method,
       {"proposed method", "method"}},
      {"Step-by-Step Experiment Plan",
       &ProjectProposal::experiment_plan,
       {"step-by-step experiment plan", "step by step experiment plan",
        "experiment plan", "experiments"}},
      {"Test Case Examples",
       &ProjectProposal::test_case_examples,
       {"test case examples", "test cases", "test case example"}},
      {"Fallback Plan", &ProjectProposal::fallback_plan, {"fallback plan"}},
  }};
  return specs;
}

// Recognizes a section heading line: optional markdown/number prefixes,
// optional trailing colon. Content may follow inline after a colon.
bool match_heading(const std::string& line, const SectionSpec*& spec_out,
                   std::string& rest_out) {
  std::string s = util::trim(line);
  while (!s.empty() && (s.front() == '#' || s.front() == '*')) s.erase(0, 1);
  s = util::trim(s);
  size_t i = 0;
  while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')' || s[i] == ':')) {
    s = s.substr(i + 1);
  }
  s = util::trim(s);
  std::string rest;
  size_t colon = s.find(':');
  std::string head = s;
  if (colon != std::string::npos) {
    head = s.substr(0, colon);
    rest = util::trim(s.substr(colon + 1));
  }
  while (!head.empty() && (head.back() == '*' || head.back() == '#')) {
    head.pop_back();
  }
  head = util::to_lower(util::trim(head));
  if (head.empty()) return false;
  for (const auto& spec : section_specs()) {
    for (const auto& alias : spec.aliases) {
      if (head == alias) {
        spec_out = &spec;
        while (!rest.empty() && rest.front() == '*') rest.erase(0, 1);
        rest_out = util::trim(rest);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

const std::vector<std::string>& section_headings() {
  static const std::vector<std::string> headings = [] {
    std::vector<std::string> out;
    for (const auto& spec : section_specs()) out.emplace_back(spec.heading);
    return out;
  }();
  return headings;
}

json proposal_to_json(const ProjectProposal& p) {
  return json{{"title", p.title},
              {"problem_statement", p.problem_statement},
              {"motivation", p.motivation},
              {"proposed_method", p.proposed_method},
              {"experiment_plan", p.experiment_plan},
              {"test_case_examples", p.test_case_examples},
              {"fallback_plan", p.fallback_plan},
              {"provenance", p.provenance},
              {"topic", p.topic_name},
              {"source_idea_title", p.source_idea_title}};
}

ProjectProposal proposal_from_json(const json& row) {
  ProjectProposal p;
  p.title = row.at("title").get<std::string>();
  p.problem_statement = row.value("problem_statement", "");
  p.motivation = row.value("motivation", "");
  p.proposed_method = row.value("proposed_method", "");
  p.experiment_plan = row.value("experiment_plan", "");
  p.test_case_examples = row.value("test_case_examples", "");
  p.fallback_plan = row.value("fallback_plan", "");
  p.provenance = row.value("provenance", "ai");
  p.topic_name = row.value("topic", "");
  p.source_idea_title = row.value("source_idea_title", "");
  return p;
}

std::string format_proposal(const ProjectProposal& proposal) {
  std::string out;
  size_t number = 1;
  for (const auto& spec : section_specs()) {
    out += std::to_string(number++) + ". " + spec.heading + "\n";
    out += proposal.*(spec.member);
    out += "\n\n";
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  out += "\n";
  return out;
}

ProjectProposal parse_proposal(const std::string& text) {
  ProjectProposal proposal;
  std::array<bool, 7> seen{};
  const SectionSpec* current = nullptr;

  for (const std::string& line : util::split_lines(text)) {
    const SectionSpec* spec = nullptr;
    std::string rest;
    if (match_heading(line, spec, rest)) {
      current = spec;
      seen[static_cast<size_t>(spec - section_specs().data())] = true;
      std::string& field = proposal.*(spec->member);
      if (!rest.empty()) {
        field = rest;
      }
      continue;
    }
    if (current) {
      std::string& field = proposal.*(current->member);
      std::string trimmed = util::trim(line);
      if (trimmed.empty()) {
        if (!field.empty() && field.back() != '\n') field += '\n';
      } else {
        if (!field.empty() && field.back() != '\n' && field.back() != ' ') {
          field += '\n';
        }
        field += line;
      }
    }
  }

  for (auto& spec : section_specs()) {
    std::string& field = proposal.*(spec.member);
    field = util::trim(field);
  }
  for (size_t i = 0; i < section_specs().size(); ++i) {
    if (!seen[i] ||
        util::trim(proposal.*(section_specs()[i].member)).empty()) {
      throw ParseError(std::string("proposal missing section: ") +
                           section_specs()[i].heading,
                       section_specs()[i].heading);
    }
  }
  return proposal;
}

size_t proposal_word_count(const ProjectProposal& p) {
  return util::word_count(p.title) + util::word_count(p.problem_statement) +
         util::word_count(p.motivation) +
         util::word_count(p.proposed_method) +
         util::word_count(p.experiment_plan) +
         util::word_count(p.test_case_examples) +
         util::word_count(p.fallback_plan);
}

}  // namespace ideaforge::proposal
