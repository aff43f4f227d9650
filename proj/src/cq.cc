#include "kgforge/cq.h"

#include <cctype>

#include "kgforge/error.h"
#include "kgforge/text.h"

namespace kgforge::cq {

CqResult parse_cq_response(std::string_view response, std::size_t cap) {
  CqResult result;
  result.raw_response = std::string(response);
  for (const std::string &raw : text::split_lines(response)) {
    std::string line = text::trim(raw);
    // Tolerate list bullets in front of the prefix.
    while (!line.empty() && (line[0] == '-' || line[0] == '*')) {
      line = text::trim(std::string_view(line).substr(1));
    }
    if (line.size() < 4 || line.compare(0, 2, "CQ") != 0) continue;
    std::size_t i = 2;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 2 || i >= line.size() || line[i] != '.') continue;
    std::string question = text::trim(std::string_view(line).substr(i + 1));
    if (question.empty() || question.back() != '?') {
      ++result.dropped;
      continue;
    }
    if (result.questions.size() < cap) {
      result.questions.push_back({result.questions.size() + 1, question});
    }
  }
  if (result.questions.empty()) {
    throw ParseFailure("no competency questions recognized", result.raw_response);
  }
  return result;
}

CqResult generate_cqs(llm::Gateway &gateway,
                      const llm::RequestSettings &settings,
                      const Document &document, std::size_t cap) {
  std::string reply =
      llm::ask(gateway, settings, llm::TemplateName::kCqGeneration,
               {{"document to be processed", document.text}});
  return parse_cq_response(reply, cap);
}

bool is_refusal(std::string_view answer) {
  std::string t = text::trim(answer);
  if (t.empty()) return true;
  if (text::icontains(t, "don't know")) return true;
  return text::icontains(t, "don\xE2\x80\x99t know");
}

QAPair answer_cq(llm::Gateway &gateway, const llm::RequestSettings &settings,
                 const Document &document, const CompetencyQuestion &cq) {
  std::string reply =
      llm::ask(gateway, settings, llm::TemplateName::kCqAnswering,
               {{"doc", document.text}, {"query", cq.text}});
  QAPair pair;
  pair.question = cq;
  pair.answer = text::trim(reply);
  pair.answered = !is_refusal(reply);
  return pair;
}

std::string format_cqs(const std::vector<CompetencyQuestion> &cqs) {
  std::string out;
  for (const auto &q : cqs) {
    if (!out.empty()) out += '\n';
    out += "CQ" + std::to_string(q.index) + ". " + q.text;
  }
  return out;
}

}  // namespace kgforge::cq
