#pragma once

#include "ragkit/minitoml.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

struct Demonstration {
    std::string input;
    std::string reasoning;
    std::string output;
};

// Instruction-demonstration-question prompt layout. The question block must
// contain the slot marker exactly once; an empty demonstration list is only
// legal when zero_shot is set.
struct PromptTemplate {
    std::string name;
    std::string instruction;
    std::vector<Demonstration> demonstrations;
    std::string question_block = "Question: {question}";
    std::string slot_marker = "{question}";
    bool zero_shot = false;
};

PromptTemplate load_prompt_template(const std::string& path);
PromptTemplate prompt_template_from_toml(const toml::Value& root, std::string name);

// Deterministic concatenation: instruction, demonstration blocks in list
// order, then the question block with the slot replaced by `question`.
std::string assemble_prompt(const PromptTemplate& tmpl, std::string_view question);

std::uint64_t template_hash(const PromptTemplate& tmpl);

} // namespace ragkit
