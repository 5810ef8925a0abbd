#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

// One extracted question-bank item. Multiple-choice items carry options and a
// label set; free-answer items have an empty option map and answer_text.
struct ExamItem {
    std::string stem;
    std::map<std::string, std::string> options; // label ("A") -> option text
    std::set<std::string> answer_labels;
    std::string answer_text;
    std::string explanation;

    bool is_multiple_choice() const { return !options.empty(); }
};

struct ExamParseWarning {
    std::size_t line_begin = 0; // 1-based, inclusive
    std::size_t line_end = 0;   // inclusive
    std::string reason;
};

struct ExamParseResult {
    std::vector<ExamItem> items;
    std::vector<ExamParseWarning> warnings;
};

// A named regex set describing how stems, options, answers and explanations
// are marked in a question bank. "default" handles `1. stem A) .. Answer: ..`
// layouts; "zh" additionally recognizes 答案/解析 markers and full-width
// punctuation.
struct ExamPatternProfile {
    std::string name;
    std::string item_start;          // must match at a line start
    std::string option_marker;       // capture group 1 = label
    std::string answer_marker;
    std::string explanation_marker;
};

const ExamPatternProfile& exam_profile(const std::string& name); // throws config error when unknown
void register_exam_profile(ExamPatternProfile profile);
std::vector<std::string> exam_profile_names();

// Items in document order; unparseable segments are skipped and reported with
// line spans in the warnings list.
ExamParseResult parse_exam_items(std::string_view raw_text, const std::string& profile_name);

void write_exam_items_jsonl(const std::string& path, const ExamParseResult& result);

} // namespace ragkit
