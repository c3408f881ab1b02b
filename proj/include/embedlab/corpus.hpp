#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embedlab {

using TermId = std::uint32_t;

/// Tokenized, sentence-split text. Sentences are never empty.
struct Corpus {
    std::vector<std::vector<std::string>> sentences;
    std::string source_path;
    std::uint64_t token_count = 0;

    /// Builds a corpus from token lists, dropping empty sentences.
    static Corpus from_sentences(std::vector<std::vector<std::string>> sentences,
                                 std::string source_path = {});
    bool empty() const noexcept { return sentences.empty(); }
};

/// Characters removed by the tokenizer. Stripped characters act as token separators.
class StripSet {
public:
    /// ASCII punctuation except `_`, plus typographic quotes and the em and en dash.
    StripSet();
    explicit StripSet(std::u32string code_points) : chars_(std::move(code_points)) {}

    bool contains(char32_t cp) const noexcept;
    const std::u32string& code_points() const noexcept { return chars_; }

private:
    std::u32string chars_;
};

struct PreprocessOptions {
    bool lowercase = false;
    StripSet strip;
};

/// Validates UTF-8; throws DecodeError naming the first bad byte.
void validate_utf8(std::string_view text);

/// Splits on the terminators `.`, `?`, `!`. Sentences are trimmed; empty ones are dropped.
/// No abbreviation handling: "Mr. Snow" splits after "Mr".
std::vector<std::string> split_sentences(std::string_view raw_text);

std::vector<std::string> tokenize(std::string_view sentence, const PreprocessOptions& options = {});

/// Lowercases ASCII and Latin-1 letters; other code points pass through.
std::string fold_case(std::string_view term);

/// Reads a raw UTF-8 text file and applies split_sentences and tokenize.
Corpus load_corpus(const std::filesystem::path& path, const PreprocessOptions& options = {});

/// Line-oriented corpus format: one sentence per line, tokens separated by single spaces.
void write_corpus_file(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

struct VocabEntry {
    std::string term;
    std::uint64_t count = 0;

    friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// Term -> (index, count). Entries are ordered by descending count, ties by term.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Keeps entries whose count is at least `min_count`, then sorts them.
    /// Throws ConfigError on duplicate terms.
    static Vocabulary from_counts(std::vector<VocabEntry> counts, std::uint64_t min_count);

    /// Keeps the given order (used for imported vector files).
    /// Counts must already be non-increasing.
    static Vocabulary from_ordered(std::vector<VocabEntry> entries, std::uint64_t min_count);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::optional<TermId> find(std::string_view term) const;
    /// Throws LookupError.
    TermId at(std::string_view term) const;
    bool contains(std::string_view term) const { return find(term).has_value(); }

    const std::string& term(TermId id) const { return entries_.at(id).term; }
    std::uint64_t count(TermId id) const { return entries_.at(id).count; }
    std::span<const VocabEntry> entries() const noexcept { return entries_; }

    std::uint64_t total_tokens() const noexcept { return total_tokens_; }
    std::uint64_t min_count() const noexcept { return min_count_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.entries_ == b.entries_ && a.min_count_ == b.min_count_;
    }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    void rebuild_index();

    std::vector<VocabEntry> entries_;
    std::unordered_map<std::string, TermId, Hash, std::equal_to<>> index_;
    std::uint64_t total_tokens_ = 0;
    std::uint64_t min_count_ = 1;
};

/// Raw token counts, in first-occurrence order.
std::vector<VocabEntry> count_tokens(const Corpus& corpus);

/// Throws DomainError if min_count is zero.
Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_count);

/// Frequent-word subsampling keep probability: with f = count/total,
/// p = min(1, (sqrt(f/t) + 1) * t/f).
double subsample_keep_prob(std::uint64_t term_count, std::uint64_t total_tokens, double t);

// ---------------------------------------------------------------------------

/// Collocation merging. Pass k uses threshold * threshold_decay^k.
struct PhraseConfig {
    double delta = 5.0;
    double threshold = 10.0;
    unsigned passes = 2;
    double threshold_decay = 0.5;

    void validate() const;
};

/// score(a,b) = (count(ab) - delta) * total_tokens / (count(a) * count(b)).
double phrase_score(std::uint64_t count_ab, std::uint64_t count_a, std::uint64_t count_b,
                    std::uint64_t total_tokens, double delta);

/// Merges adjacent pairs scoring above the threshold into `a_b`, left to right.
Corpus detect_phrases(const Corpus& corpus, const PhraseConfig& config = {});

} // namespace embedlab
