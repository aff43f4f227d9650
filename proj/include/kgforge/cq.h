#pragma once

// Stage 1: competency questions and their answers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/llm.h"
#include "kgforge/types.h"

namespace kgforge::cq {

struct CqResult {
  std::vector<CompetencyQuestion> questions;
  std::size_t dropped = 0;  // CQ lines not ending in '?'
  std::string raw_response;
};

// Reads "CQ<n>. <question>" lines, drops questions without a trailing '?',
// keeps the first `cap` and renumbers them from 1. Throws ParseFailure when
// no question survives.
CqResult parse_cq_response(std::string_view response, std::size_t cap);

CqResult generate_cqs(llm::Gateway &gateway,
                      const llm::RequestSettings &settings,
                      const Document &document, std::size_t cap = 3);

// Empty replies and replies containing "don't know" (any case, straight or
// curly apostrophe) are refusals.
bool is_refusal(std::string_view answer);

QAPair answer_cq(llm::Gateway &gateway, const llm::RequestSettings &settings,
                 const Document &document, const CompetencyQuestion &cq);

// "CQ1. ...\nCQ2. ..." as used in the relation-extraction prompt.
std::string format_cqs(const std::vector<CompetencyQuestion> &cqs);

}  // namespace kgforge::cq
