#include "ragkit/forge.hpp"

#include "ragkit/errors.hpp"
#include "ragkit/hashing.hpp"
#include "ragkit/jsonl.hpp"
#include "ragkit/rewriter.hpp"
#include "ragkit/text.hpp"
#include "ragkit/title_tree.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace ragkit {

const char* const kSftInstruction =
    "Rewrite the question into retrieval queries that match the wording of the "
    "reference documents. Return a numbered list with one query per line.";

namespace {

struct Block {
    std::vector<std::string> heading_lines;
    std::string body; // may be empty for heading-only blocks
};

// Paragraph view of a chunk's content with heading lines set aside so they
// stay attached to the text that follows them and never count as tokens.
std::vector<Block> content_blocks(const std::vector<std::string>& lines) {
    std::vector<Block> blocks;
    Block current;
    std::vector<std::string> body_lines;
    auto flush_body = [&]() {
        if (body_lines.empty()) return;
        current.body = join(body_lines, "\n");
        body_lines.clear();
        blocks.push_back(std::move(current));
        current = Block{};
    };
    for (const auto& line : lines) {
        int level = 0;
        std::string title;
        if (is_blank_line(line)) {
            flush_body();
        } else if (parse_heading_line(line, level, title)) {
            flush_body();
            current.heading_lines.push_back(line);
        } else {
            body_lines.push_back(line);
        }
    }
    flush_body();
    if (!current.heading_lines.empty()) blocks.push_back(std::move(current));
    return blocks;
}

std::string render_block(const Block& block) {
    std::string out = join(block.heading_lines, "\n");
    if (!block.body.empty()) {
        if (!out.empty()) out += "\n";
        out += block.body;
    }
    return out;
}

} // namespace

std::vector<CptSample> gen_cpt(const std::vector<Chunk>& chunks, long cutoff,
                               const Tokenizer& tok) {
    if (cutoff < 32)
        throw Error(ErrorKind::config,
                    "cpt cutoff must be at least 32, got " + std::to_string(cutoff));

    std::vector<CptSample> samples;
    for (const auto& chunk : chunks) {
        if (chunk.token_count == 0) continue; // nothing trainable
        if (chunk.token_count <= cutoff) {
            samples.push_back(CptSample{chunk.text, chunk.token_count, chunk.chunk_id});
            continue;
        }

        auto lines = split_lines(chunk.text);
        std::size_t path_len = std::min(chunk.heading_path.size(), lines.size());
        std::vector<std::string> path_lines(lines.begin(),
                                            lines.begin() + static_cast<std::ptrdiff_t>(path_len));
        std::vector<std::string> rest(lines.begin() + static_cast<std::ptrdiff_t>(path_len),
                                      lines.end());

        auto blocks = content_blocks(rest);

        // greedy paragraph packing against the cutoff; oversize paragraphs
        // hard-wrap at token boundaries
        std::vector<std::string> pack;
        long pack_tokens = 0;
        auto emit = [&](std::string content, long tokens) {
            std::string text = join(path_lines, "\n");
            if (!text.empty()) text += "\n";
            text += content;
            samples.push_back(CptSample{std::move(text), tokens, chunk.chunk_id});
        };
        auto flush = [&]() {
            if (pack.empty()) return;
            emit(join(pack, "\n\n"), pack_tokens);
            pack.clear();
            pack_tokens = 0;
        };

        for (const auto& block : blocks) {
            long t = tok(block.body);
            if (t > cutoff) {
                flush();
                auto pieces = split_at_token_limit(block.body, cutoff, tok);
                for (std::size_t p = 0; p < pieces.size(); ++p) {
                    std::string content =
                        p == 0 && !block.heading_lines.empty()
                            ? join(block.heading_lines, "\n") + "\n" + pieces[p]
                            : pieces[p];
                    emit(std::move(content), tok(pieces[p]));
                }
                continue;
            }
            if (pack_tokens + t > cutoff) flush();
            pack.push_back(render_block(block));
            pack_tokens += t;
        }
        flush();
    }
    return samples;
}

std::vector<Chunk> sample_corpus(const std::vector<Chunk>& chunks, double fraction,
                                 std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw Error(ErrorKind::config, "fraction must be in (0, 1]");
    if (fraction == 1.0) return chunks;

    // group chunk indices per document, preserving first-appearance order
    std::vector<std::string> doc_order;
    std::map<std::string, std::vector<std::size_t>> by_doc;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        auto [it, inserted] = by_doc.try_emplace(chunks[i].doc_id);
        if (inserted) doc_order.push_back(chunks[i].doc_id);
        it->second.push_back(i);
    }

    std::vector<std::size_t> picked;
    for (const auto& doc_id : doc_order) {
        auto indices = by_doc[doc_id];
        long doc_total = 0;
        for (std::size_t i : indices) doc_total += chunks[i].token_count;
        double target = fraction * static_cast<double>(doc_total);

        // seeded Fisher-Yates; std::shuffle is implementation-defined
        SplitMix64 rng(seed ^ fnv1a64(doc_id));
        for (std::size_t i = indices.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.next_below(i));
            std::swap(indices[i - 1], indices[j]);
        }

        double total = 0.0;
        for (std::size_t i : indices) {
            if (total >= target) break;
            picked.push_back(i);
            total += static_cast<double>(chunks[i].token_count);
        }
    }

    std::sort(picked.begin(), picked.end());
    std::vector<Chunk> out;
    out.reserve(picked.size());
    for (std::size_t i : picked) out.push_back(chunks[i]);
    return out;
}

std::vector<QaPair> read_qa_jsonl(const std::string& path) {
    std::vector<QaPair> out;
    for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t line_no) {
        if (!j.contains("question") || !j.contains("answer"))
            throw Error(ErrorKind::data, path + ":" + std::to_string(line_no) +
                                             ": expected fields 'question' and 'answer'");
        out.push_back(QaPair{j["question"].get<std::string>(), j["answer"].get<std::string>()});
    });
    return out;
}

bool parse_annotation(std::string_view response, std::size_t max_rewrites, std::string& analysis,
                      std::vector<std::string>& rewrites, std::string& reason) {
    // sentinels must open a line; mid-line mentions (e.g. a model quoting its
    // own instructions) do not count
    auto lines = split_lines(response);
    std::size_t a_line = lines.size();
    std::size_t r_line = lines.size();
    std::vector<std::string> analysis_lines;
    std::vector<std::string> rewrite_lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string lead = trim(lines[i]);
        if (a_line == lines.size() && starts_with(lead, "ANALYSIS:")) {
            a_line = i;
            std::string rest = trim(lead.substr(9));
            if (!rest.empty()) analysis_lines.push_back(rest);
            continue;
        }
        if (starts_with(lead, "REWRITES:")) {
            r_line = i;
            std::string rest = trim(lead.substr(9));
            if (!rest.empty()) rewrite_lines.push_back(rest);
            for (std::size_t j = i + 1; j < lines.size(); ++j) rewrite_lines.push_back(lines[j]);
            break;
        }
        if (a_line != lines.size()) analysis_lines.push_back(lines[i]);
    }
    if (r_line == lines.size()) {
        reason = "response lacks a REWRITES: section";
        return false;
    }
    if (a_line == lines.size() || a_line > r_line) {
        reason = "response lacks an ANALYSIS: section before REWRITES:";
        return false;
    }
    analysis = trim(join(analysis_lines, "\n"));
    rewrites = parse_rewrites(join(rewrite_lines, "\n"), max_rewrites);
    if (rewrites.empty()) {
        reason = "REWRITES: section is empty";
        return false;
    }
    return true;
}

SftResult annotate_sft(const std::vector<QaPair>& qa_pairs, ChatEndpoint& annotator,
                       const PromptTemplate& tmpl, AnnotateOptions options, const Tokenizer& tok) {
    struct Outcome {
        bool ok = false;
        SftPair pair;
        SftSkip skip;
    };

    namespace fs = std::filesystem;
    fs::path cache_base;
    if (!options.cache_dir.empty()) {
        cache_base = fs::path(options.cache_dir) / "sft";
        fs::create_directories(cache_base);
    }
    std::uint64_t tmpl_hash = template_hash(tmpl);

    auto annotate_one = [&](const QaPair& qa) {
        Outcome outcome;
        outcome.pair.question = qa.question;
        outcome.skip.question = qa.question;
        if (trim(qa.question).empty() || trim(qa.answer).empty()) {
            outcome.skip.reason = "question and answer must be nonempty";
            return outcome;
        }

        fs::path cache_file;
        if (!cache_base.empty()) {
            std::uint64_t h = tmpl_hash;
            h = fnv1a64(qa.question, h);
            h = fnv1a64(std::string_view("\0", 1), h);
            h = fnv1a64(qa.answer, h);
            cache_file = cache_base / (hex64(h) + ".txt");
        }

        std::string response;
        bool cached = false;
        if (!cache_file.empty()) {
            std::ifstream in(cache_file, std::ios::binary);
            if (in) {
                std::ostringstream ss;
                ss << in.rdbuf();
                response = ss.str();
                cached = true;
            }
        }
        if (!cached) {
            std::string rendered = "Question: " + qa.question + "\nReference answer: " + qa.answer;
            std::string prompt = assemble_prompt(tmpl, rendered);
            try {
                response = annotator.complete({ChatMessage{"user", prompt}}, options.temperature);
            } catch (const Error& e) {
                outcome.skip.reason = std::string("annotator call failed: ") + e.what();
                return outcome;
            }
            if (!cache_file.empty()) {
                std::ofstream out(cache_file, std::ios::binary);
                out << response;
            }
        }

        std::string reason;
        if (!parse_annotation(response, options.max_rewrites, outcome.pair.analysis,
                              outcome.pair.rewrites, reason)) {
            outcome.skip.reason = reason;
            return outcome;
        }

        // cutoff holds by trimming the analysis; question and rewrites stay intact
        long fixed = tok(outcome.pair.question);
        for (const auto& r : outcome.pair.rewrites) fixed += tok(r);
        long analysis_budget = options.sft_cutoff - fixed;
        if (analysis_budget <= 0) {
            outcome.pair.analysis.clear();
        } else if (tok(outcome.pair.analysis) > analysis_budget) {
            auto pieces = split_at_token_limit(outcome.pair.analysis, analysis_budget, tok);
            outcome.pair.analysis = pieces.empty() ? std::string{} : rtrim(pieces.front());
        }

        outcome.pair.annotator_tag = annotator.model_tag();
        outcome.ok = true;
        return outcome;
    };

    auto outcomes = parallel_map(qa_pairs, annotate_one, options.parallelism);

    SftResult result;
    for (auto& o : outcomes) {
        if (o.ok)
            result.pairs.push_back(std::move(o.pair));
        else
            result.skips.push_back(std::move(o.skip));
    }
    return result;
}

std::string render_rewrite_list(const std::vector<std::string>& rewrites) {
    std::vector<std::string> lines;
    lines.reserve(rewrites.size());
    for (std::size_t i = 0; i < rewrites.size(); ++i)
        lines.push_back(std::to_string(i + 1) + ". " + rewrites[i]);
    return join(lines, "\n");
}

ExportManifest export_training_files(const std::vector<CptSample>& cpt,
                                     const std::vector<SftPair>& sft, const std::string& out_dir,
                                     const Tokenizer& tok) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory " + out_dir);

    ExportManifest manifest;
    manifest.cpt_file = (fs::path(out_dir) / "cpt.jsonl").string();
    manifest.sft_file = (fs::path(out_dir) / "sft.jsonl").string();

    {
        JsonlWriter writer(manifest.cpt_file);
        for (const auto& sample : cpt) {
            nlohmann::ordered_json j;
            j["text"] = sample.text;
            writer.write(j);
            manifest.cpt_token_total += sample.token_count;
        }
        writer.close();
    }
    manifest.cpt_count = cpt.size();
    manifest.cpt_hash = hex64(hash_file(manifest.cpt_file));

    {
        JsonlWriter writer(manifest.sft_file);
        for (const auto& pair : sft) {
            nlohmann::ordered_json j;
            j["instruction"] = kSftInstruction;
            j["input"] = pair.question;
            j["output"] = render_rewrite_list(pair.rewrites);
            writer.write(j);
            manifest.sft_token_total += tok(pair.question);
            for (const auto& r : pair.rewrites) manifest.sft_token_total += tok(r);
        }
        writer.close();
    }
    manifest.sft_count = sft.size();
    manifest.sft_hash = hex64(hash_file(manifest.sft_file));

    nlohmann::ordered_json m;
    m["cpt"] = {{"file", "cpt.jsonl"},
                {"count", manifest.cpt_count},
                {"token_total", manifest.cpt_token_total},
                {"content_hash", manifest.cpt_hash}};
    m["sft"] = {{"file", "sft.jsonl"},
                {"count", manifest.sft_count},
                {"token_total", manifest.sft_token_total},
                {"content_hash", manifest.sft_hash}};
    // advisory metadata for the external trainer; not consumed here
    m["trainer_defaults"] = {{"method", "lora"},
                             {"lora_alpha", 16},
                             {"lora_rank", 8},
                             {"lora_dropout", 0.0},
                             {"optimizer", "adamw"},
                             {"max_grad_norm", 1.0},
                             {"learning_rate", 5e-5},
                             {"epochs", 3},
                             {"batch_size_cpt", 8},
                             {"batch_size_sft", 2},
                             {"cutoff_cpt", 512},
                             {"cutoff_sft", 2048},
                             {"precision", "bf16"}};

    std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
    if (!mf) throw Error(ErrorKind::io, "cannot write manifest.json under " + out_dir);
    mf << m.dump(2) << '\n';
    return manifest;
}

} // namespace ragkit
