#pragma once

#include <string>
#include <string_view>

#include "charprobe/corpus/lexicons.hpp"

namespace charprobe::genclient {

enum class ValidityReason { Valid, Empty, ResidualMarkup, TooFewTokens, LowEnglishRatio, NoSentenceBoundary };

std::string_view to_string(ValidityReason r);
ValidityReason validity_reason_from_string(std::string_view s);

struct ValidityRules {
  std::size_t min_word_tokens = 3;
  double min_english_ratio = 0.70;  // strict >
  // A continuation without . ! or ? still counts as a sentence when it has
  // at least this many word tokens (generation cut at the length limit).
  std::size_t token_floor = 8;
};

struct Verdict {
  bool valid = false;
  ValidityReason reason = ValidityReason::Empty;
};

// Checks, in order: non-empty; no @/# tokens or emoji; enough word tokens;
// english ratio strictly above the threshold; a sentence terminal or the
// token floor. The first failing clause is the reason.
Verdict is_valid_entailment(std::string_view text, const corpus::Dictionary& dictionary,
                            const ValidityRules& rules = {});

}  // namespace charprobe::genclient
