#include "ragkit/exam_items.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/jsonl.hpp"
#include "ragkit/text.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <mutex>
#include <regex>

namespace ragkit {

namespace {

std::map<std::string, ExamPatternProfile>& profile_registry() {
    static std::map<std::string, ExamPatternProfile> registry = {
        {"default",
         ExamPatternProfile{
             "default",
             R"(^\s*\d{1,4}\s*(\.|\)|、|．)\s*)",
             R"(([A-H])\s{0,2}(\.|\)|、|．|：|:))",
             R"((answer)\s*(:|：)\s*)",
             R"((explanation|analysis)\s*(:|：)\s*)",
         }},
        {"zh",
         ExamPatternProfile{
             "zh",
             R"(^\s*\d{1,4}\s*(\.|\)|、|．)\s*)",
             R"(([A-H])\s{0,2}(\.|\)|、|．|：|:))",
             R"((答案|正确答案|answer)\s*(:|：|是|为)?\s*)",
             R"((解析|解答|说明|explanation)\s*(:|：)?\s*)",
         }},
    };
    return registry;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

bool acceptable_option_prefix(std::string_view block, std::size_t pos) {
    if (pos == 0) return true;
    unsigned char prev = static_cast<unsigned char>(block[pos - 1]);
    return std::isspace(prev) || prev == '(' || prev >= 0x80;
}

struct Block {
    std::string text;
    std::size_t line_begin = 0;
    std::size_t line_end = 0;
    std::size_t header_len = 0; // bytes of the numbering marker
};

} // namespace

const ExamPatternProfile& exam_profile(const std::string& name) {
    std::lock_guard lock(registry_mutex());
    auto& registry = profile_registry();
    auto it = registry.find(name);
    if (it == registry.end())
        throw Error(ErrorKind::config, "unknown exam pattern profile '" + name + "'");
    return it->second;
}

void register_exam_profile(ExamPatternProfile profile) {
    std::lock_guard lock(registry_mutex());
    profile_registry()[profile.name] = std::move(profile);
}

std::vector<std::string> exam_profile_names() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> names;
    for (auto& [name, _] : profile_registry()) names.push_back(name);
    return names;
}

ExamParseResult parse_exam_items(std::string_view raw_text, const std::string& profile_name) {
    const ExamPatternProfile profile = exam_profile(profile_name);
    const std::regex item_start(profile.item_start, std::regex::ECMAScript);
    const std::regex option_marker(profile.option_marker, std::regex::ECMAScript);
    const std::regex answer_marker(profile.answer_marker, std::regex::ECMAScript | std::regex::icase);
    const std::regex explanation_marker(profile.explanation_marker,
                                        std::regex::ECMAScript | std::regex::icase);

    ExamParseResult result;
    auto lines = split_lines(raw_text);

    // carve the text into blocks, one per numbering marker
    std::vector<Block> blocks;
    std::size_t preamble_end = 0; // number of nonblank lines before the first item
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::smatch m;
        if (std::regex_search(lines[i], m, item_start) && m.position(0) == 0) {
            blocks.push_back(Block{lines[i].substr(m.length(0)), i + 1, i + 1,
                                   static_cast<std::size_t>(m.length(0))});
        } else if (!blocks.empty()) {
            blocks.back().text += "\n" + lines[i];
            blocks.back().line_end = i + 1;
        } else if (!is_blank_line(lines[i])) {
            preamble_end = i + 1;
        }
    }
    if (preamble_end > 0)
        result.warnings.push_back(
            ExamParseWarning{1, preamble_end, "text before the first item marker was skipped"});

    for (const auto& block : blocks) {
        auto warn = [&](const std::string& reason) {
            result.warnings.push_back(ExamParseWarning{block.line_begin, block.line_end, reason});
        };

        std::smatch answer_m;
        if (!std::regex_search(block.text, answer_m, answer_marker)) {
            warn("no answer marker found");
            continue;
        }
        std::size_t answer_pos = static_cast<std::size_t>(answer_m.position(0));
        std::size_t answer_end = answer_pos + static_cast<std::size_t>(answer_m.length(0));

        std::string tail = block.text.substr(answer_end);
        std::smatch expl_m;
        bool has_expl = std::regex_search(tail, expl_m, explanation_marker);
        std::size_t answer_text_end =
            has_expl ? answer_end + static_cast<std::size_t>(expl_m.position(0)) : block.text.size();

        // options live between the stem and the answer marker; labels must run
        // A, B, C, ... which filters stray letter-punctuation pairs
        std::string head = block.text.substr(0, answer_pos);
        std::vector<std::pair<std::size_t, std::size_t>> option_spans; // text start, label index
        std::vector<std::size_t> option_starts;                        // marker positions
        char expected = 'A';
        for (auto it = std::sregex_iterator(head.begin(), head.end(), option_marker);
             it != std::sregex_iterator(); ++it) {
            std::size_t pos = static_cast<std::size_t>(it->position(0));
            if (!acceptable_option_prefix(head, pos)) continue;
            char label = (*it)[1].str()[0];
            if (label != expected) continue;
            option_starts.push_back(pos);
            option_spans.emplace_back(pos + static_cast<std::size_t>(it->length(0)),
                                      static_cast<std::size_t>(expected - 'A'));
            ++expected;
        }

        ExamItem item;
        std::size_t stem_end = option_starts.empty() ? answer_pos : option_starts.front();
        item.stem = trim(block.text.substr(0, stem_end));
        if (item.stem.empty()) {
            warn("empty stem");
            continue;
        }

        for (std::size_t oi = 0; oi < option_spans.size(); ++oi) {
            std::size_t text_begin = option_spans[oi].first;
            std::size_t text_end = oi + 1 < option_starts.size() ? option_starts[oi + 1] : answer_pos;
            std::string label(1, static_cast<char>('A' + option_spans[oi].second));
            item.options[label] = trim(block.text.substr(text_begin, text_end - text_begin));
        }

        std::string answer_region =
            trim(block.text.substr(answer_end, answer_text_end - answer_end));
        if (item.is_multiple_choice()) {
            bool bad_label = false;
            for (char c : answer_region) {
                char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                if (upper >= 'A' && upper <= 'H') {
                    if (!item.options.count(std::string(1, upper))) {
                        bad_label = true;
                        break;
                    }
                    item.answer_labels.insert(std::string(1, upper));
                } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',' && c != '.' &&
                           c != ';' && c != '/') {
                    break; // answer letters end at the first foreign character
                }
            }
            if (bad_label) {
                warn("answer references a label that has no option");
                continue;
            }
            if (item.answer_labels.empty()) {
                warn("no answer label could be extracted");
                continue;
            }
        } else {
            if (answer_region.empty()) {
                warn("empty answer");
                continue;
            }
            item.answer_text = answer_region;
        }

        if (has_expl)
            item.explanation =
                trim(tail.substr(static_cast<std::size_t>(expl_m.position(0) + expl_m.length(0))));

        result.items.push_back(std::move(item));
    }
    return result;
}

void write_exam_items_jsonl(const std::string& path, const ExamParseResult& result) {
    JsonlWriter writer(path);
    for (const auto& item : result.items) {
        nlohmann::ordered_json j;
        j["stem"] = item.stem;
        j["options"] = item.options;
        if (item.is_multiple_choice())
            j["answer"] = item.answer_labels;
        else
            j["answer"] = item.answer_text;
        j["explanation"] = item.explanation;
        writer.write(j);
    }
}

} // namespace ragkit
