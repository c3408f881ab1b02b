#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embedlab/datasets.hpp"
#include "embedlab/similarity.hpp"

namespace embedlab {

/// OFFSET is 3CosAdd; ONLY_B ranks by similarity to B alone; IGNORE_A uses A* + B.
enum class AnalogyMethod { Offset, OnlyB, IgnoreA };

std::string_view to_string(AnalogyMethod m);
/// Accepts "offset", "3cosadd", "only-b", "ignore-a".
AnalogyMethod parse_analogy_method(std::string_view name);

enum class Task { Analogy, Intrusion };
std::string_view to_string(Task t);
Task parse_task(std::string_view name);

struct EvalOptions {
    /// Compare answers after case folding and fall back to folded lookups.
    bool fold_case = false;
};

/// Outcome of one question. For analogies `terms` holds A A* B; for intrusion the four terms.
struct QuestionRecord {
    std::string section;
    int difficulty = 0;
    std::vector<std::string> terms;
    std::string gold;
    std::string predicted;
    bool correct = false;
    bool skipped = false;
    bool tie = false;

    friend bool operator==(const QuestionRecord&, const QuestionRecord&) = default;
};

struct GroupStats {
    std::size_t attempted = 0;
    std::size_t correct = 0;
    std::size_t skipped = 0;

    /// Empty when nothing was attempted.
    std::optional<double> accuracy() const {
        if (attempted == 0) return std::nullopt;
        return static_cast<double>(correct) / static_cast<double>(attempted);
    }
    void add(const QuestionRecord& r);
    friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

struct EvalReport {
    std::string model_id;
    Task task = Task::Analogy;
    std::optional<AnalogyMethod> method;
    std::vector<QuestionRecord> records;

    GroupStats total() const;
    /// Sections in first-appearance order.
    std::vector<std::pair<std::string, GroupStats>> by_section() const;
    std::map<int, GroupStats> by_difficulty() const;
    std::size_t oov_skipped() const { return total().skipped; }
    std::size_t tie_count() const;
    /// Every attempted intrusion question ended in a tie (e.g. all vectors identical).
    bool degenerate() const;
    /// 0.25 for intrusion, none for analogies.
    std::optional<double> random_baseline() const;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Best candidate over the vocabulary minus {a, a*, b}. Empty when an input term is OOV.
std::optional<std::string> solve_analogy(const SimilarityProvider& model, const AnalogyQuestion& q,
                                         AnalogyMethod method, const EvalOptions& options = {});

EvalReport eval_analogies(const SimilarityProvider& model, const std::vector<AnalogyQuestion>& questions,
                          AnalogyMethod method, const EvalOptions& options = {},
                          std::string model_id = {});

/// Index of the term least similar to the mean of the four unit vectors; ties go to the
/// earliest position. Empty when a term is OOV.
struct IntruderPick {
    std::size_t index = 0;
    bool tie = false;
};
std::optional<IntruderPick> find_intruder(const SimilarityProvider& model,
                                          std::span<const std::string> terms,
                                          const EvalOptions& options = {});

EvalReport eval_intrusion(const SimilarityProvider& model, const std::vector<IntrusionQuestion>& questions,
                          const EvalOptions& options = {}, std::string model_id = {});

// ---------------------------------------------------------------------------
// Frequency analysis

/// Upper edges of bins 1..5; bin 6 is open-ended.
inline constexpr std::array<double, 5> kFrequencyBinUpperEdges = {20, 50, 100, 500, 1000};

/// 1..6 for inclusive ranges [0,20] [21,50] [51,100] [101,500] [501,1000] [1001,inf).
/// Non-integer averages use the same edges (20.5 falls in bin 2).
int frequency_bin(double count);

struct BinStats {
    std::size_t questions = 0;
    std::size_t correct = 0;
    std::optional<double> accuracy() const {
        if (questions == 0) return std::nullopt;
        return static_cast<double>(correct) / static_cast<double>(questions);
    }
    friend bool operator==(const BinStats&, const BinStats&) = default;
};

using FrequencyTable = std::array<BinStats, 6>;

struct FrequencyAnalysis {
    FrequencyTable average;    // mean corpus count of the four terms
    FrequencyTable gold;       // count of the true outlier
    FrequencyTable predicted;  // count of the selected outlier
    /// Terms absent from the vocabulary; counted as frequency 0.
    std::vector<std::string> missing_terms;
};

/// Throws UsageError for analogy reports.
FrequencyAnalysis frequency_analysis(const EvalReport& report, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Output

enum class ReportFormat { Table, Csv, JsonLines };
/// Accepts "table", "csv", "jsonl"; throws UsageError otherwise.
ReportFormat parse_report_format(std::string_view name);

/// CSV columns: section,difficulty,terms,gold,predicted,correct,skipped.
/// JSON lines: one metadata object, then one object per question.
std::string emit_report(const EvalReport& report, ReportFormat format);
EvalReport parse_report_jsonl(std::string_view text);

/// Totals, per-section and per-difficulty groups, and optionally the frequency tables.
std::string summary_json(const EvalReport& report, const FrequencyAnalysis* frequency = nullptr);

enum class Grouping { Section, Difficulty };
/// One row per report, one column per group plus the total; accuracies as percentages.
std::string comparison_table(std::span<const EvalReport> reports, Grouping grouping);
std::string frequency_table(const FrequencyAnalysis& analysis);

} // namespace embedlab
