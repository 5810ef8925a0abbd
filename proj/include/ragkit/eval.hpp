#pragma once

#include "ragkit/exam_items.hpp"
#include "ragkit/pipeline.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ragkit {

// One evaluation example: free-answer examples carry gold text, multiple-
// choice examples carry an ExamItem built from options and answer labels.
struct EvalExample {
    std::string id;
    std::string question;
    std::optional<std::string> gold_text;
    std::optional<ExamItem> item;
};

std::vector<EvalExample> load_eval_dataset(const std::string& path);

struct ExampleResult {
    std::string id;
    std::map<std::string, double> metrics;
    std::size_t retrieved_count = 0;
    bool label_extracted = true; // false when acc found no answer letter
};

struct EvalFailure {
    std::string id;
    std::string stage;
    std::string message;
};

// Per-run metric report. Aggregates are the arithmetic means of per-example
// values; failed examples are excluded from aggregates and counted apart.
struct MetricReport {
    std::string run_id;
    std::string mode;
    std::size_t k = 0;
    std::vector<std::string> metric_names;
    std::vector<ExampleResult> per_example;
    std::map<std::string, double> aggregates;
    double mean_retrieved = 0.0;
    std::vector<EvalFailure> failures;
    nlohmann::ordered_json config_snapshot;
    nlohmann::ordered_json notes;
};

struct EvalOptions {
    AnswerMode mode = AnswerMode::full;
    std::size_t k = 4;
    std::vector<std::string> metrics; // of: acc, em, f1, rougeL, bleu
    std::size_t parallelism = 2;
    std::string label_pattern; // dataset-specific answer-letter regex; empty = default extractor
    nlohmann::ordered_json config_snapshot;
};

// Runs the pipeline over every example, scores the requested metrics and
// assembles a deterministic report (per-example rows ordered by id).
MetricReport run_eval(const std::vector<EvalExample>& dataset, const RagPipeline& pipeline,
                      const EvalOptions& options);

// One report per k; pairs with sweep_csv for the k-accuracy curve.
std::vector<MetricReport> run_eval_sweep(const std::vector<EvalExample>& dataset,
                                         const RagPipeline& pipeline, EvalOptions options,
                                         const std::vector<std::size_t>& ks);

std::string sweep_csv(const std::vector<MetricReport>& reports);

nlohmann::ordered_json report_to_json(const MetricReport& report);
void write_report(const MetricReport& report, const std::string& path);

// Every aggregate equals the mean of its per-example values within tol and
// all values sit in [0, 1].
bool validate_report(const MetricReport& report, double tol = 1e-9);

// "1..8" or "1,2,4,8" forms accepted.
std::vector<std::size_t> parse_sweep_spec(const std::string& spec);

} // namespace ragkit
