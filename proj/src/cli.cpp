#include "ragkit/cli.hpp"

#include "ragkit/chunker.hpp"
#include "ragkit/config.hpp"
#include "ragkit/discrepancy.hpp"
#include "ragkit/errors.hpp"
#include "ragkit/eval.hpp"
#include "ragkit/exam_items.hpp"
#include "ragkit/forge.hpp"
#include "ragkit/hashing.hpp"
#include "ragkit/jsonl.hpp"
#include "ragkit/runtime.hpp"
#include "ragkit/text.hpp"
#include "ragkit/title_tree.hpp"
#include "ragkit/vector_index.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ragkit {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Every run leaves a manifest next to its primary output: command, resolved
// config, input hashes and duration.
class ManifestWriter {
  public:
    ManifestWriter(std::string command, const RunConfig& config)
        : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
        manifest_["command"] = command_;
        manifest_["config_snapshot"] = config_snapshot(config);
        manifest_["inputs"] = ordered_json::object();
        manifest_["outputs"] = ordered_json::array();
    }

    void add_input(const std::string& path) {
        if (!path.empty() && fs::exists(path))
            manifest_["inputs"][path] = hex64(hash_file(path));
    }

    void add_output(const std::string& path) { manifest_["outputs"].push_back(path); }

    void write(const std::string& manifest_path) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
        manifest_["duration_ms"] = elapsed;
        manifest_["finished_unix"] = static_cast<long long>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        std::ofstream out(manifest_path, std::ios::binary);
        if (out) out << manifest_.dump(2) << '\n';
    }

    // manifest lands beside the primary output artifact
    void write_beside(const std::string& output_path) {
        write(output_path + ".manifest.json");
    }

  private:
    std::string command_;
    ordered_json manifest_;
    std::chrono::steady_clock::time_point start_;
};

RunConfig resolve_config(const std::string& config_path) {
    return config_path.empty() ? default_config() : load_config(config_path);
}

std::map<std::string, std::string> read_corpus_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open manifest: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::data, "manifest is not valid JSON: " + path);

    std::map<std::string, std::string> docs;
    if (j.is_object() && j.contains("docs")) j = j["docs"];
    if (!j.is_object() || j.empty())
        throw Error(ErrorKind::data,
                    "manifest must map doc_id to path (optionally under a 'docs' key): " + path);
    fs::path base = fs::path(path).parent_path();
    for (auto it = j.begin(); it != j.end(); ++it) {
        fs::path doc_path = it.value().get<std::string>();
        if (doc_path.is_relative()) doc_path = base / doc_path;
        docs[it.key()] = doc_path.string();
    }
    return docs;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- subcommand bodies -----------------------------------------------------

int cmd_ingest(const std::string& manifest_path, const std::string& exam_path,
               const std::string& profile, long budget, const std::string& out_path,
               const std::string& config_path, bool as_json, std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    ManifestWriter manifest("ingest", config);

    if (!exam_path.empty()) {
        manifest.add_input(exam_path);
        auto result = parse_exam_items(read_file(exam_path), profile);
        write_exam_items_jsonl(out_path, result);
        manifest.add_output(out_path);
        manifest.write_beside(out_path);
        if (as_json) {
            ordered_json j;
            j["items"] = result.items.size();
            auto warnings = ordered_json::array();
            for (const auto& w : result.warnings)
                warnings.push_back({{"line_begin", w.line_begin},
                                    {"line_end", w.line_end},
                                    {"reason", w.reason}});
            j["warnings"] = std::move(warnings);
            out << j.dump(2) << "\n";
            return 0;
        }
        out << "parsed " << result.items.size() << " items, " << result.warnings.size()
            << " warnings\n";
        for (const auto& w : result.warnings)
            out << "  warning lines " << w.line_begin << "-" << w.line_end << ": " << w.reason
                << "\n";
        return 0;
    }

    if (manifest_path.empty())
        throw Error(ErrorKind::usage, "ingest needs --manifest (or --exam for question banks)");
    manifest.add_input(manifest_path);

    // documents are independent; split them in parallel, keep manifest order
    std::vector<std::pair<std::string, std::string>> docs;
    for (const auto& [doc_id, doc_path] : read_corpus_manifest(manifest_path)) {
        manifest.add_input(doc_path);
        docs.emplace_back(doc_id, doc_path);
    }
    auto per_doc = parallel_map(
        docs,
        [&](const std::pair<std::string, std::string>& doc) {
            return split_tree(build_title_tree(read_file(doc.second), doc.first), budget);
        },
        config.parallelism);

    std::vector<Chunk> all_chunks;
    for (auto& chunks : per_doc)
        all_chunks.insert(all_chunks.end(), std::make_move_iterator(chunks.begin()),
                          std::make_move_iterator(chunks.end()));
    write_chunks_jsonl(out_path, all_chunks);
    manifest.add_output(out_path);
    manifest.write_beside(out_path);
    if (as_json) {
        ordered_json j;
        j["chunks"] = all_chunks.size();
        j["documents"] = docs.size();
        j["out"] = out_path;
        out << j.dump(2) << "\n";
    } else {
        out << "wrote " << all_chunks.size() << " chunks to " << out_path << "\n";
    }
    return 0;
}

int cmd_index_build(const std::string& chunks_path, const std::string& out_path,
                    const std::string& config_path, bool as_json, std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    ManifestWriter manifest("index build", config);
    manifest.add_input(chunks_path);

    auto chunks = read_chunks_jsonl(chunks_path);
    if (chunks.empty()) throw Error(ErrorKind::data, "no chunks in " + chunks_path);

    Runtime runtime(config);
    auto embedder = runtime.embedder();
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embedder->embed_batch(texts);

    VectorIndex index(vectors.front().dim(), embedder->provider_tag(), index_timestamp());
    for (std::size_t i = 0; i < chunks.size(); ++i)
        index.add(chunks[i].chunk_id, std::move(vectors[i]));
    save_index(index, out_path);

    manifest.add_output(out_path);
    manifest.write_beside(out_path);
    if (as_json) {
        ordered_json j;
        j["entries"] = index.size();
        j["dim"] = index.dim();
        j["provider_tag"] = index.provider_tag();
        j["out"] = out_path;
        out << j.dump(2) << "\n";
    } else {
        out << "indexed " << index.size() << " chunks (dim " << index.dim() << ") into "
            << out_path << "\n";
    }
    return 0;
}

int cmd_index_search(const std::string& index_path, const std::string& query, std::size_t k,
                     bool as_json, const std::string& config_path, std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    VectorIndex index = load_index(index_path);
    Runtime runtime(config);
    auto results = index.search(runtime.embedder()->embed_one(query), k);

    if (as_json) {
        auto rows = ordered_json::array();
        for (const auto& r : results)
            rows.push_back({{"chunk_id", r.chunk_id}, {"score", r.score}});
        out << rows.dump(2) << "\n";
    } else {
        for (const auto& r : results) out << r.chunk_id << "\t" << r.score << "\n";
    }
    return 0;
}

int cmd_rewrite(const std::string& template_path, const std::string& query,
                const std::string& config_path, bool as_json, std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    if (!template_path.empty()) config.rewrite_template = template_path;
    Runtime runtime(config);

    RewriteSet set = runtime.rewriter().rewrite(query);
    if (as_json) {
        ordered_json j;
        j["original"] = set.original;
        j["rewrites"] = set.rewrites;
        j["used_fallback"] = set.used_fallback;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : set.rewrites) out << r << "\n";
    }
    return 0;
}

int cmd_ask(const std::string& config_path, const std::string& query, const std::string& mode_name,
            std::size_t k, const std::string& index_override, const std::string& chunks_override,
            bool as_json, std::ostream& out) {
    if (config_path.empty()) throw Error(ErrorKind::usage, "ask requires --config");
    RunConfig config = load_config(config_path);
    if (!index_override.empty()) config.index_path = index_override;
    if (!chunks_override.empty()) config.chunks_path = chunks_override;
    if (k > 0) config.k = k;

    AnswerMode mode = answer_mode_from_string(mode_name);
    Runtime runtime(config);
    RagPipeline pipeline = runtime.pipeline("ask", mode);
    RagAnswer answer = pipeline.answer(query, mode);

    if (as_json) {
        ordered_json j;
        j["question"] = answer.question;
        j["mode"] = to_string(answer.mode);
        j["rewrites"] = {{"original", answer.rewrites.original},
                         {"rewrites", answer.rewrites.rewrites},
                         {"used_fallback", answer.rewrites.used_fallback}};
        auto docs = ordered_json::array();
        for (const auto& d : answer.retrieved)
            docs.push_back({{"chunk_id", d.chunk_id},
                            {"score", d.score},
                            {"source_rewrite", d.source_rewrite}});
        j["retrieved"] = std::move(docs);
        j["answer_text"] = answer.answer_text;
        j["reader_prompt"] = answer.reader_prompt;
        out << j.dump(2) << "\n";
    } else {
        out << answer.answer_text << "\n";
    }
    return 0;
}

int cmd_forge_cpt(const std::string& chunks_path, long cutoff, const std::string& out_dir,
                  const std::string& config_path, bool as_json, std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    ManifestWriter manifest("forge cpt", config);
    manifest.add_input(chunks_path);

    auto chunks = read_chunks_jsonl(chunks_path);
    auto samples = gen_cpt(chunks, cutoff);
    auto result = export_training_files(samples, {}, out_dir);

    manifest.add_output(result.cpt_file);
    manifest.write((fs::path(out_dir) / "run_manifest.json").string());
    if (as_json) {
        ordered_json j;
        j["samples"] = result.cpt_count;
        j["token_total"] = result.cpt_token_total;
        j["file"] = result.cpt_file;
        j["content_hash"] = result.cpt_hash;
        out << j.dump(2) << "\n";
    } else {
        out << "wrote " << result.cpt_count << " cpt samples (" << result.cpt_token_total
            << " tokens) to " << result.cpt_file << "\n";
    }
    return 0;
}

int cmd_forge_sft(const std::string& qa_path, const std::string& template_path,
                  const std::string& out_dir, const std::string& config_path, bool as_json,
                  std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    if (!template_path.empty()) config.annotate_template = template_path;
    ManifestWriter manifest("forge sft", config);
    manifest.add_input(qa_path);

    Runtime runtime(config);
    auto qa = read_qa_jsonl(qa_path);
    auto annotator = runtime.annotator();

    AnnotateOptions options;
    options.parallelism = config.parallelism;
    options.max_rewrites = config.max_rewrites;
    options.temperature = config.temperature;
    options.cache_dir = config.cache_dir;
    auto result = annotate_sft(qa, *annotator, runtime.annotate_template(), options);

    auto exported = export_training_files({}, result.pairs, out_dir);
    manifest.add_output(exported.sft_file);
    manifest.write((fs::path(out_dir) / "run_manifest.json").string());

    if (as_json) {
        ordered_json j;
        j["pairs"] = result.pairs.size();
        auto skips = ordered_json::array();
        for (const auto& skip : result.skips)
            skips.push_back({{"question", skip.question}, {"reason", skip.reason}});
        j["skips"] = std::move(skips);
        j["file"] = exported.sft_file;
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "annotated " << result.pairs.size() << " pairs, skipped " << result.skips.size()
        << "\n";
    for (const auto& skip : result.skips)
        out << "  skipped: " << skip.question.substr(0, 60) << " (" << skip.reason << ")\n";
    return 0;
}

int cmd_forge_sample(const std::string& chunks_path, double fraction, std::uint64_t seed,
                     const std::string& out_path, const std::string& config_path, bool as_json,
                     std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    ManifestWriter manifest("forge sample", config);
    manifest.add_input(chunks_path);

    auto chunks = read_chunks_jsonl(chunks_path);
    auto sampled = sample_corpus(chunks, fraction, seed);
    long total = 0;
    long kept = 0;
    for (const auto& c : chunks) total += c.token_count;
    for (const auto& c : sampled) kept += c.token_count;

    if (!out_path.empty()) {
        write_chunks_jsonl(out_path, sampled);
        manifest.add_output(out_path);
        manifest.write_beside(out_path);
    }
    if (as_json) {
        ordered_json j;
        j["chunks_kept"] = sampled.size();
        j["chunks_total"] = chunks.size();
        j["tokens_kept"] = kept;
        j["tokens_total"] = total;
        out << j.dump(2) << "\n";
    } else {
        out << "sampled " << sampled.size() << "/" << chunks.size() << " chunks, " << kept << "/"
            << total << " tokens\n";
    }
    return 0;
}

int cmd_eval_run(const std::string& dataset_path, const std::string& config_path,
                 const std::string& metrics_csv, const std::string& sweep_spec,
                 const std::string& mode_name, const std::string& label_pattern,
                 const std::string& out_dir, std::ostream& out) {
    if (config_path.empty()) throw Error(ErrorKind::usage, "eval run requires --config");
    RunConfig config = load_config(config_path);
    ManifestWriter manifest("eval run", config);
    manifest.add_input(dataset_path);

    auto dataset = load_eval_dataset(dataset_path);
    AnswerMode mode = answer_mode_from_string(mode_name);

    EvalOptions options;
    options.mode = mode;
    options.k = config.k;
    options.parallelism = config.parallelism;
    options.label_pattern = label_pattern;
    options.config_snapshot = config_snapshot(config);
    for (const auto& m : split_on_any(metrics_csv, ","))
        if (!trim(m).empty()) options.metrics.push_back(trim(m));

    Runtime runtime(config);
    RagPipeline pipeline = runtime.pipeline("eval run", mode);

    fs::create_directories(out_dir);
    if (sweep_spec.empty()) {
        MetricReport report = run_eval(dataset, pipeline, options);
        std::string report_path = (fs::path(out_dir) / "report.json").string();
        write_report(report, report_path);
        manifest.add_output(report_path);
        manifest.write((fs::path(out_dir) / "run_manifest.json").string());
        out << "report " << report.run_id << ":";
        for (const auto& [name, value] : report.aggregates) out << " " << name << "=" << value;
        out << " (failures " << report.failures.size() << ")\n";
        return 0;
    }

    auto ks = parse_sweep_spec(sweep_spec);
    auto reports = run_eval_sweep(dataset, pipeline, options, ks);
    for (const auto& report : reports) {
        std::string path =
            (fs::path(out_dir) / ("report_k" + std::to_string(report.k) + ".json")).string();
        write_report(report, path);
        manifest.add_output(path);
    }
    std::string csv = sweep_csv(reports);
    std::string csv_path = (fs::path(out_dir) / "sweep.csv").string();
    std::ofstream csv_out(csv_path, std::ios::binary);
    if (!csv_out) throw Error(ErrorKind::io, "cannot write " + csv_path);
    csv_out << csv;
    manifest.add_output(csv_path);
    manifest.write((fs::path(out_dir) / "run_manifest.json").string());
    out << csv;
    return 0;
}

int cmd_eval_discrepancy(const std::string& pairs_path, const std::string& config_path,
                         std::ostream& out) {
    RunConfig config = resolve_config(config_path);
    Runtime runtime(config);
    auto pairs = read_discrepancy_pairs(pairs_path);
    auto report = discrepancy_batch(pairs, *runtime.embedder());
    ordered_json j;
    j["pairs"] = report.pair_count;
    j["mean_discrepancy_before"] = report.mean_before;
    j["mean_discrepancy_after"] = report.mean_after;
    out << j.dump(2) << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"rewrite-retrieve-read RAG toolkit"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_manifest, ingest_exam, ingest_profile = "default", ingest_out,
                ingest_config;
    long ingest_budget = 512;
    bool ingest_json = false;
    auto* ingest = app.add_subcommand("ingest", "split corpus documents into chunks");
    ingest->add_option("--manifest", ingest_manifest, "JSON manifest mapping doc_id to path");
    ingest->add_option("--exam", ingest_exam, "raw question-bank text to extract items from");
    ingest->add_option("--profile", ingest_profile, "exam extraction profile");
    ingest->add_option("--budget", ingest_budget, "token budget per chunk");
    ingest->add_option("--out", ingest_out, "output JSONL path")->required();
    ingest->add_option("--config", ingest_config, "config file");
    ingest->add_flag("--json", ingest_json, "JSON output");

    // index build | search
    auto* index = app.add_subcommand("index", "build or query the vector index");
    index->require_subcommand(1);
    std::string ib_chunks, ib_out, ib_config;
    bool ib_json = false;
    auto* index_build = index->add_subcommand("build", "embed chunks and persist the index");
    index_build->add_option("--chunks", ib_chunks, "chunks JSONL")->required();
    index_build->add_option("--out", ib_out, "index file")->required();
    index_build->add_option("--config", ib_config, "config file");
    index_build->add_flag("--json", ib_json, "JSON output");

    std::string is_idx, is_query, is_config;
    std::size_t is_k = 4;
    bool is_json = false;
    auto* index_search = index->add_subcommand("search", "query an index");
    index_search->add_option("--idx", is_idx, "index file")->required();
    index_search->add_option("--query", is_query, "query text")->required();
    index_search->add_option("--k", is_k, "results to return");
    index_search->add_flag("--json", is_json, "JSON output");
    index_search->add_option("--config", is_config, "config file");

    // rewrite
    std::string rw_template, rw_query, rw_config;
    bool rw_json = false;
    auto* rewrite = app.add_subcommand("rewrite", "rewrite a query, one rewrite per line");
    rewrite->add_option("--template", rw_template, "prompt template TOML");
    rewrite->add_option("--query", rw_query, "user query")->required();
    rewrite->add_option("--config", rw_config, "config file");
    rewrite->add_flag("--json", rw_json, "JSON output");

    // ask
    std::string ask_config, ask_query, ask_mode = "full", ask_index, ask_chunks;
    std::size_t ask_k = 0;
    bool ask_json = false;
    auto* ask = app.add_subcommand("ask", "answer a question through the pipeline");
    ask->add_option("--config", ask_config, "config file")->required();
    ask->add_option("--query", ask_query, "question")->required();
    ask->add_option("--mode", ask_mode, "full | no_rewrite | no_retrieval");
    ask->add_option("--k", ask_k, "retrieved documents");
    ask->add_option("--index", ask_index, "index file (overrides config)");
    ask->add_option("--chunks", ask_chunks, "chunks JSONL (overrides config)");
    ask->add_flag("--json", ask_json, "JSON output");

    // forge cpt | sft | sample
    auto* forge = app.add_subcommand("forge", "emit training files");
    forge->require_subcommand(1);
    std::string fc_chunks, fc_out, fc_config;
    long fc_cutoff = 512;
    bool fc_json = false;
    auto* forge_cpt = forge->add_subcommand("cpt", "pretraining samples from chunks");
    forge_cpt->add_option("--chunks", fc_chunks, "chunks JSONL")->required();
    forge_cpt->add_option("--cutoff", fc_cutoff, "token cutoff per sample");
    forge_cpt->add_option("--out", fc_out, "output directory")->required();
    forge_cpt->add_option("--config", fc_config, "config file");
    forge_cpt->add_flag("--json", fc_json, "JSON output");

    std::string fs_qa, fs_template, fs_out, fs_config;
    bool fs_json = false;
    auto* forge_sft = forge->add_subcommand("sft", "annotate rewrites from QA pairs");
    forge_sft->add_option("--qa", fs_qa, "QA pairs JSONL")->required();
    forge_sft->add_option("--template", fs_template, "annotator template TOML");
    forge_sft->add_option("--out", fs_out, "output directory")->required();
    forge_sft->add_option("--config", fs_config, "config file");
    forge_sft->add_flag("--json", fs_json, "JSON output");

    std::string fp_chunks, fp_out, fp_config;
    double fp_fraction = 0.5;
    std::uint64_t fp_seed = 7;
    bool fp_json = false;
    auto* forge_sample = forge->add_subcommand("sample", "stratified corpus subsample");
    forge_sample->add_option("--chunks", fp_chunks, "chunks JSONL")->required();
    forge_sample->add_option("--fraction", fp_fraction, "token fraction to keep");
    forge_sample->add_option("--seed", fp_seed, "sampling seed");
    forge_sample->add_option("--out", fp_out, "output JSONL path");
    forge_sample->add_option("--config", fp_config, "config file");
    forge_sample->add_flag("--json", fp_json, "JSON output");

    // eval run | discrepancy
    auto* eval = app.add_subcommand("eval", "run metric evaluations");
    eval->require_subcommand(1);
    std::string er_dataset, er_config, er_metrics = "acc", er_sweep, er_mode = "full",
                er_pattern, er_out = "eval_out";
    auto* eval_run = eval->add_subcommand("run", "batch evaluation over a dataset");
    eval_run->add_option("--dataset", er_dataset, "dataset JSONL")->required();
    eval_run->add_option("--config", er_config, "config file")->required();
    eval_run->add_option("--metrics", er_metrics, "comma list of acc,em,f1,rougeL,bleu");
    eval_run->add_option("--sweep-k", er_sweep, "k sweep, e.g. 1..8 or 2,4,6");
    eval_run->add_option("--mode", er_mode, "pipeline mode");
    eval_run->add_option("--label-pattern", er_pattern,
                         "answer-letter regex, first capture group");
    eval_run->add_option("--out", er_out, "output directory");

    std::string ed_pairs, ed_config;
    auto* eval_disc = eval->add_subcommand("discrepancy", "query-document discrepancy report");
    eval_disc->add_option("--pairs", ed_pairs, "pairs JSONL with query/rewrite/doc")->required();
    eval_disc->add_option("--config", ed_config, "config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(ingest_manifest, ingest_exam, ingest_profile, ingest_budget,
                              ingest_out, ingest_config, ingest_json, out);
        if (index_build->parsed())
            return cmd_index_build(ib_chunks, ib_out, ib_config, ib_json, out);
        if (index_search->parsed())
            return cmd_index_search(is_idx, is_query, is_k, is_json, is_config, out);
        if (rewrite->parsed()) return cmd_rewrite(rw_template, rw_query, rw_config, rw_json, out);
        if (ask->parsed())
            return cmd_ask(ask_config, ask_query, ask_mode, ask_k, ask_index, ask_chunks, ask_json,
                           out);
        if (forge_cpt->parsed())
            return cmd_forge_cpt(fc_chunks, fc_cutoff, fc_out, fc_config, fc_json, out);
        if (forge_sft->parsed())
            return cmd_forge_sft(fs_qa, fs_template, fs_out, fs_config, fs_json, out);
        if (forge_sample->parsed())
            return cmd_forge_sample(fp_chunks, fp_fraction, fp_seed, fp_out, fp_config, fp_json,
                                    out);
        if (eval_run->parsed())
            return cmd_eval_run(er_dataset, er_config, er_metrics, er_sweep, er_mode, er_pattern,
                                er_out, out);
        if (eval_disc->parsed()) return cmd_eval_discrepancy(ed_pairs, ed_config, out);
        err << "no subcommand selected\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace ragkit
