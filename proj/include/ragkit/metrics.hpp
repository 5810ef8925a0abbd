#pragma once

#include "ragkit/exam_items.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

// Shared metric normalization: lowercase, punctuation stripped, whitespace
// collapsed; CJK codepoints tokenize individually.
std::vector<std::string> normalize_tokens(std::string_view text);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Token-multiset overlap. Both sides empty after normalization -> (1,1,1);
// exactly one empty -> (0,0,0).
F1Score token_f1(std::string_view prediction, std::string_view reference);

inline constexpr double kRougeBeta = 1.2; // recall-weighted F, recorded in reports

// Token-level longest common subsequence F-measure,
// F = (1 + beta^2) P R / (R + beta^2 P). Empty prediction or reference -> 0.
double rouge_l(std::string_view prediction, std::string_view reference,
               double beta = kRougeBeta);

// BLEU with n-grams up to max_order, brevity penalty against the closest
// reference length, and add-one smoothing of zero n-gram counts.
double bleu(std::string_view prediction, const std::vector<std::string>& references,
            int max_order = 4);

// Normalized exact match over the token sequence.
bool exact_match(std::string_view prediction, std::string_view reference);

struct LabelExtraction {
    std::set<std::string> labels;
    bool found = false;
};

// Default answer-label extractor: the first whitespace-delimited token (after
// punctuation becomes whitespace) consisting solely of the item's option
// letters, case-insensitive.
LabelExtraction extract_answer_labels(std::string_view prediction,
                                      const std::map<std::string, std::string>& options);

// Dataset-specific extractor: `pattern` is an ECMAScript regex whose first
// capture group yields the run of answer letters.
LabelExtraction extract_answer_labels(std::string_view prediction,
                                      const std::map<std::string, std::string>& options,
                                      const std::string& pattern);

// 1 iff the extracted label set equals the item's answer set exactly.
// Pre: the item has options. No extractable label counts as 0.
double mc_accuracy(std::string_view prediction, const ExamItem& item);
double mc_accuracy(std::string_view prediction, const ExamItem& item,
                   const std::string& label_pattern);

} // namespace ragkit
