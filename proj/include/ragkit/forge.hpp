#pragma once

#include "ragkit/chat.hpp"
#include "ragkit/chunker.hpp"
#include "ragkit/prompt_template.hpp"
#include "ragkit/tokenizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ragkit {

// One pretraining line. token_count never exceeds the cutoff it was built
// with; chunks that do not fit are re-split on natural paragraphs, and a
// single paragraph beyond the cutoff is hard-wrapped at token boundaries.
struct CptSample {
    std::string text;
    long token_count = 0;
    std::string source_chunk;
};

std::vector<CptSample> gen_cpt(const std::vector<Chunk>& chunks, long cutoff,
                               const Tokenizer& tok = default_tokenizer());

// Deterministic stratified subsample: each document contributes about
// `fraction` of its tokens; total token mass lands within one chunk of
// fraction x total. Output preserves input order.
std::vector<Chunk> sample_corpus(const std::vector<Chunk>& chunks, double fraction,
                                 std::uint64_t seed);

struct QaPair {
    std::string question;
    std::string answer;
};

std::vector<QaPair> read_qa_jsonl(const std::string& path);

// (question, step-by-step analysis, rewrites) produced by the annotation flow.
struct SftPair {
    std::string question;
    std::string analysis;
    std::vector<std::string> rewrites;
    std::string annotator_tag;
};

struct SftSkip {
    std::string question;
    std::string reason;
};

struct SftResult {
    std::vector<SftPair> pairs;
    std::vector<SftSkip> skips; // pairs.size() + skips.size() == inputs
};

struct AnnotateOptions {
    std::size_t max_rewrites = 8;
    long sft_cutoff = 2048; // enforced by truncating analysis only
    std::size_t parallelism = 1;
    double temperature = 0.0;
    std::string cache_dir; // responses cached by (question, answer, template) hash
};

// Prompts the annotator for a stepwise derivation followed by the rewrites
// that matter in it, marked by ANALYSIS: / REWRITES: sentinels. Failures
// produce skip records, never fabricated pairs.
SftResult annotate_sft(const std::vector<QaPair>& qa_pairs, ChatEndpoint& annotator,
                       const PromptTemplate& tmpl, AnnotateOptions options = {},
                       const Tokenizer& tok = default_tokenizer());

// Parses one annotator response; exposed for tests and reuse.
bool parse_annotation(std::string_view response, std::size_t max_rewrites, std::string& analysis,
                      std::vector<std::string>& rewrites, std::string& reason);

// The supervision string format: rewrites joined as a numbered list.
std::string render_rewrite_list(const std::vector<std::string>& rewrites);

// Instruction emitted into every SFT line; aligned with the rewriter's
// preferred numbered-list parse.
extern const char* const kSftInstruction;

struct ExportManifest {
    std::string cpt_file;
    std::size_t cpt_count = 0;
    long cpt_token_total = 0;
    std::string cpt_hash;

    std::string sft_file;
    std::size_t sft_count = 0;
    long sft_token_total = 0;
    std::string sft_hash;
};

// Writes cpt.jsonl ({"text": ...}), sft.jsonl ({"instruction", "input",
// "output"}) and manifest.json under out_dir. Deterministic given inputs.
ExportManifest export_training_files(const std::vector<CptSample>& cpt,
                                     const std::vector<SftPair>& sft, const std::string& out_dir,
                                     const Tokenizer& tok = default_tokenizer());

} // namespace ragkit
