#include "ideaforge/ideation/prompt.hpp"

#include "ideaforge/util/text.hpp"

namespace ideaforge::ideation {

PromptBuild build_seed_prompt(const retrieval::Topic& topic,
                              const GenerationConfig& config,
                              const std::vector<retrieval::PaperRecord>& papers,
                              const std::vector<std::string>& prior_titles,
                              size_t batch_size) {
  std::string head = "Generate " + std::to_string(batch_size) + " " +
                     std::string(kSeedBatchMarker) + " " + topic.name +
                     ".\n";
  head += "Focus: " + topic.description + ".\n\n";
  head +=
      "Write each idea with exactly these fields, one per line, in this "
      "order:\n"
      "Title: a concise name for the method\n"
      "Problem: the research problem being addressed\n"
      "Existing Methods: how current approaches fall short\n"
      "Motivation: why the proposed approach should help\n"
      "Proposed Method: the method, concretely\n"
      "Experiment Plan: how to validate it\n\n";
  head += "Separate consecutive ideas with a line containing only ###.\n";
  head += "Generate exactly " + std::to_string(batch_size) + " ideas.\n\n";

  if (!config.demos.empty()) {
    head += "Examples of the expected style and granularity:\n\n";
    for (const auto& demo : config.demos) {
      head += format_seed_idea(demo);
      head += "###\n";
    }
    head += "\n";
  }

  if (!papers.empty()) {
    head += "Relevant papers you may draw inspiration from:\n";
    for (const auto& p : papers) {
      head += "- " + p.title + ": " + p.abstract_text + "\n";
    }
    head += "\n";
  }

  std::string tail =
      "Now generate the ideas. Make each one clearly different from every "
      "prior idea and from the others in this batch.\n";

  PromptBuild build;
  if (prior_titles.empty()) {
    build.text = head + tail;
    return build;
  }

  const std::string intro = "Ideas already generated (do not repeat them):\n";
  size_t fixed = util::approx_tokens(head) + util::approx_tokens(intro) +
                 util::approx_tokens(tail);

  // Budget per title: its text plus the "- " and newline.
  std::vector<size_t> title_tokens(prior_titles.size());
  for (size_t i = 0; i < prior_titles.size(); ++i) {
    title_tokens[i] = util::approx_tokens(prior_titles[i]) + 1;
  }
  size_t budget =
      config.max_prompt_tokens > fixed ? config.max_prompt_tokens - fixed : 0;
  // Keep the newest suffix that fits.
  size_t start = prior_titles.size();
  size_t used = 0;
  while (start > 0 && used + title_tokens[start - 1] <= budget) {
    used += title_tokens[start - 1];
    --start;
  }

  build.truncated_titles = start > 0;
  build.included_titles = prior_titles.size() - start;
  build.text = head;
  if (build.included_titles > 0) {
    build.text += intro;
    for (size_t i = start; i < prior_titles.size(); ++i) {
      build.text += "- " + prior_titles[i] + "\n";
    }
    build.text += "\n";
  }
  build.text += tail;
  return build;
}

}  // namespace ideaforge::ideation
