#include "ragkit/metrics.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <unordered_map>

namespace ragkit {

namespace {

bool is_cjk_punct(char32_t cp) {
    return (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
           (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
           (cp >= 0xFF5B && cp <= 0xFF65);
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::vector<std::string> normalize_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = decode_utf8(text, pos);
        if (cp < 0x80) {
            unsigned char c = static_cast<unsigned char>(cp);
            if (std::isalnum(c)) {
                current.push_back(static_cast<char>(std::tolower(c)));
            } else {
                flush(); // whitespace and ASCII punctuation both separate
            }
        } else if (is_cjk(cp)) {
            flush();
            std::string single;
            append_utf8(single, cp);
            tokens.push_back(std::move(single));
        } else if (is_cjk_punct(cp) || cp == 0xFFFD) {
            flush();
        } else {
            append_utf8(current, cp); // other scripts pass through
        }
    }
    flush();
    return tokens;
}

F1Score token_f1(std::string_view prediction, std::string_view reference) {
    auto pred = normalize_tokens(prediction);
    auto ref = normalize_tokens(reference);
    if (pred.empty() && ref.empty()) return F1Score{1.0, 1.0, 1.0};
    if (pred.empty() || ref.empty()) return F1Score{0.0, 0.0, 0.0};

    std::unordered_map<std::string, long> ref_counts;
    for (const auto& t : ref) ++ref_counts[t];
    long overlap = 0;
    for (const auto& t : pred) {
        auto it = ref_counts.find(t);
        if (it != ref_counts.end() && it->second > 0) {
            ++overlap;
            --it->second;
        }
    }
    if (overlap == 0) return F1Score{0.0, 0.0, 0.0};

    F1Score score;
    score.precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    score.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
    // 2PR/(P+R) computed on counts keeps simple fractions exact
    score.f1 = 2.0 * static_cast<double>(overlap) /
               static_cast<double>(pred.size() + ref.size());
    return score;
}

namespace {

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                curr[j] = prev[j - 1] + 1;
            else
                curr[j] = std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

} // namespace

double rouge_l(std::string_view prediction, std::string_view reference, double beta) {
    auto pred = normalize_tokens(prediction);
    auto ref = normalize_tokens(reference);
    if (pred.empty() || ref.empty()) return 0.0;

    std::size_t lcs = lcs_length(pred, ref);
    if (lcs == 0) return 0.0;
    double p = static_cast<double>(lcs) / static_cast<double>(pred.size());
    double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
    double b2 = beta * beta;
    return (1.0 + b2) * p * r / (r + b2 * p);
}

double bleu(std::string_view prediction, const std::vector<std::string>& references,
            int max_order) {
    if (references.empty()) throw Error(ErrorKind::data, "bleu requires at least one reference");
    if (max_order < 1) max_order = 1;

    auto pred = normalize_tokens(prediction);
    if (pred.empty()) return 0.0;

    std::vector<std::vector<std::string>> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(normalize_tokens(r));

    // closest reference length for the brevity penalty; shorter wins ties
    std::size_t closest = refs.front().size();
    for (const auto& r : refs) {
        auto diff = [&](std::size_t len) {
            return len > pred.size() ? len - pred.size() : pred.size() - len;
        };
        if (diff(r.size()) < diff(closest) || (diff(r.size()) == diff(closest) && r.size() < closest))
            closest = r.size();
    }

    double log_sum = 0.0;
    for (int n = 1; n <= max_order; ++n) {
        std::map<std::vector<std::string>, long> pred_grams;
        if (pred.size() >= static_cast<std::size_t>(n))
            for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= pred.size(); ++i)
                ++pred_grams[{pred.begin() + static_cast<std::ptrdiff_t>(i),
                              pred.begin() + static_cast<std::ptrdiff_t>(i) + n}];

        std::map<std::vector<std::string>, long> max_ref_grams;
        for (const auto& ref : refs) {
            if (ref.size() < static_cast<std::size_t>(n)) continue;
            std::map<std::vector<std::string>, long> counts;
            for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= ref.size(); ++i)
                ++counts[{ref.begin() + static_cast<std::ptrdiff_t>(i),
                          ref.begin() + static_cast<std::ptrdiff_t>(i) + n}];
            for (auto& [gram, c] : counts)
                max_ref_grams[gram] = std::max(max_ref_grams[gram], c);
        }

        long matched = 0;
        long total = 0;
        for (auto& [gram, c] : pred_grams) {
            total += c;
            auto it = max_ref_grams.find(gram);
            if (it != max_ref_grams.end()) matched += std::min(c, it->second);
        }

        // add-one smoothing whenever a count bottoms out
        double p = (matched == 0 || total == 0)
                       ? (static_cast<double>(matched) + 1.0) / (static_cast<double>(total) + 1.0)
                       : static_cast<double>(matched) / static_cast<double>(total);
        log_sum += std::log(p);
    }

    double brevity = 1.0;
    if (pred.size() < closest)
        brevity = std::exp(1.0 - static_cast<double>(closest) / static_cast<double>(pred.size()));
    return brevity * std::exp(log_sum / static_cast<double>(max_order));
}

bool exact_match(std::string_view prediction, std::string_view reference) {
    return normalize_tokens(prediction) == normalize_tokens(reference);
}

LabelExtraction extract_answer_labels(std::string_view prediction,
                                      const std::map<std::string, std::string>& options) {
    // punctuation becomes whitespace, then the first token made only of
    // option letters wins
    std::string spaced;
    spaced.reserve(prediction.size());
    for (char c : prediction) {
        unsigned char u = static_cast<unsigned char>(c);
        spaced.push_back(std::isalnum(u) || u >= 0x80 ? c : ' ');
    }

    LabelExtraction result;
    for (const auto& token : split_on_any(spaced, " ")) {
        if (token.empty()) continue;
        std::set<std::string> labels;
        bool all_labels = true;
        for (char c : token) {
            std::string label(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            if (!options.count(label)) {
                all_labels = false;
                break;
            }
            labels.insert(label);
        }
        if (all_labels) {
            result.labels = std::move(labels);
            result.found = true;
            return result;
        }
    }
    return result;
}

LabelExtraction extract_answer_labels(std::string_view prediction,
                                      const std::map<std::string, std::string>& options,
                                      const std::string& pattern) {
    if (pattern.empty()) return extract_answer_labels(prediction, options);
    LabelExtraction result;
    std::regex re;
    try {
        re.assign(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw Error(ErrorKind::config, std::string("bad label pattern: ") + e.what());
    }
    std::string text(prediction);
    std::smatch m;
    if (!std::regex_search(text, m, re) || m.size() < 2) return result;
    for (char c : m[1].str()) {
        std::string label(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (options.count(label)) result.labels.insert(label);
    }
    result.found = !result.labels.empty();
    return result;
}

double mc_accuracy(std::string_view prediction, const ExamItem& item) {
    return mc_accuracy(prediction, item, "");
}

double mc_accuracy(std::string_view prediction, const ExamItem& item,
                   const std::string& label_pattern) {
    if (!item.is_multiple_choice())
        throw Error(ErrorKind::data, "mc_accuracy requires an item with options");
    auto extraction = extract_answer_labels(prediction, item.options, label_pattern);
    if (!extraction.found) return 0.0;
    return extraction.labels == item.answer_labels ? 1.0 : 0.0;
}

} // namespace ragkit
