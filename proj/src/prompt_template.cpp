#include "ragkit/prompt_template.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/hashing.hpp"

#include <algorithm>
#include <filesystem>

namespace ragkit {

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return 0;
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

void validate(const PromptTemplate& tmpl) {
    if (tmpl.instruction.empty())
        throw Error(ErrorKind::config, "template '" + tmpl.name + "': instruction is required");
    std::size_t slots = count_occurrences(tmpl.question_block, tmpl.slot_marker);
    if (slots != 1)
        throw Error(ErrorKind::config, "template '" + tmpl.name + "': question block must contain '" +
                                           tmpl.slot_marker + "' exactly once, found " +
                                           std::to_string(slots));
    if (tmpl.demonstrations.empty() && !tmpl.zero_shot)
        throw Error(ErrorKind::config,
                    "template '" + tmpl.name +
                        "': demonstrations are empty but zero_shot mode is not enabled");
    for (std::size_t i = 0; i < tmpl.demonstrations.size(); ++i)
        if (tmpl.demonstrations[i].input.empty() || tmpl.demonstrations[i].output.empty())
            throw Error(ErrorKind::config, "template '" + tmpl.name + "': demonstration " +
                                               std::to_string(i) + " needs input and output");
}

} // namespace

PromptTemplate prompt_template_from_toml(const toml::Value& root, std::string name) {
    static const std::vector<std::string> known = {"instruction", "question_block", "slot_marker",
                                                   "zero_shot", "demonstrations"};
    for (const auto& path : toml::key_paths(root)) {
        std::string top = path.substr(0, path.find('.'));
        if (std::find(known.begin(), known.end(), top) == known.end())
            throw Error(ErrorKind::config, "template '" + name + "': unknown key '" + path + "'");
        if (top == "demonstrations" && path != "demonstrations") {
            std::string field = path.substr(path.find('.') + 1);
            if (field != "input" && field != "reasoning" && field != "output")
                throw Error(ErrorKind::config, "template '" + name + "': unknown key '" + path + "'");
        }
    }

    PromptTemplate tmpl;
    tmpl.name = std::move(name);
    tmpl.instruction = root.get_string("instruction", "");
    tmpl.question_block = root.get_string("question_block", tmpl.question_block);
    tmpl.slot_marker = root.get_string("slot_marker", tmpl.slot_marker);
    tmpl.zero_shot = root.get_bool("zero_shot", false);
    if (const toml::Value* demos = root.find("demonstrations")) {
        for (const auto& d : demos->as_array()) {
            Demonstration demo;
            demo.input = d.get_string("input", "");
            demo.reasoning = d.get_string("reasoning", "");
            demo.output = d.get_string("output", "");
            tmpl.demonstrations.push_back(std::move(demo));
        }
    }
    validate(tmpl);
    return tmpl;
}

PromptTemplate load_prompt_template(const std::string& path) {
    toml::Value root = toml::parse_file(path);
    return prompt_template_from_toml(root, std::filesystem::path(path).stem().string());
}

std::string assemble_prompt(const PromptTemplate& tmpl, std::string_view question) {
    if (question.empty()) throw Error(ErrorKind::data, "question must be nonempty");
    std::string out = tmpl.instruction;
    out += "\n\n";
    for (const auto& demo : tmpl.demonstrations) {
        out += "Input: " + demo.input + "\n";
        if (!demo.reasoning.empty()) out += "Reasoning: " + demo.reasoning + "\n";
        out += "Output: " + demo.output + "\n\n";
    }
    std::string block = tmpl.question_block;
    std::size_t slot = block.find(tmpl.slot_marker);
    block.replace(slot, tmpl.slot_marker.size(), question);
    out += block;
    return out;
}

std::uint64_t template_hash(const PromptTemplate& tmpl) {
    std::uint64_t h = fnv1a64(tmpl.instruction);
    h = fnv1a64(tmpl.question_block, h);
    h = fnv1a64(tmpl.slot_marker, h);
    for (const auto& d : tmpl.demonstrations) {
        h = fnv1a64(d.input, h);
        h = fnv1a64(d.reasoning, h);
        h = fnv1a64(d.output, h);
    }
    return h;
}

} // namespace ragkit
