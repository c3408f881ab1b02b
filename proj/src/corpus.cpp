#include "embedlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "embedlab/error.hpp"
#include "utf8.hpp"

namespace embedlab {

Corpus Corpus::from_sentences(std::vector<std::vector<std::string>> sentences,
                              std::string source_path) {
    Corpus corpus;
    corpus.source_path = std::move(source_path);
    corpus.sentences.reserve(sentences.size());
    for (auto& s : sentences) {
        if (s.empty()) continue;
        corpus.token_count += s.size();
        corpus.sentences.push_back(std::move(s));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Tokenization

StripSet::StripSet() {
    for (char c = 0x21; c < 0x7f; ++c) {
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
        if (!alnum && c != '_') chars_.push_back(static_cast<char32_t>(c));
    }
    chars_ += U"“”‘’—–";
}

bool StripSet::contains(char32_t cp) const noexcept {
    return chars_.find(cp) != std::u32string::npos;
}

void validate_utf8(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto d = utf8::decode(text, pos);
        if (!d.valid) throw DecodeError(pos, "invalid UTF-8 sequence");
        pos += d.length;
    }
}

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim_ascii(std::string_view s) {
    while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
    return s;
}

} // namespace

std::vector<std::string> split_sentences(std::string_view raw_text) {
    validate_utf8(raw_text);
    std::vector<std::string> out;
    std::size_t start = 0;
    // Terminators are ASCII, so byte-wise scanning never splits a multi-byte sequence.
    for (std::size_t i = 0; i <= raw_text.size(); ++i) {
        if (i == raw_text.size() || raw_text[i] == '.' || raw_text[i] == '?' || raw_text[i] == '!') {
            auto piece = trim_ascii(raw_text.substr(start, i - start));
            if (!piece.empty()) out.emplace_back(piece);
            start = i + 1;
        }
    }
    return out;
}

std::string fold_case(std::string_view term) {
    std::string out;
    out.reserve(term.size());
    std::size_t pos = 0;
    while (pos < term.size()) {
        const auto d = utf8::decode(term, pos);
        if (!d.valid) {
            out.push_back(term[pos]);
            pos += 1;
            continue;
        }
        char32_t cp = d.code_point;
        if (cp >= U'A' && cp <= U'Z') cp += 0x20;
        else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) cp += 0x20;
        utf8::append(out, cp);
        pos += d.length;
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view sentence, const PreprocessOptions& options) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    std::size_t pos = 0;
    while (pos < sentence.size()) {
        const auto d = utf8::decode(sentence, pos);
        if (!d.valid) {
            // Undecodable bytes are kept verbatim; inputs from split_sentences are already validated.
            current.push_back(sentence[pos]);
            pos += 1;
            continue;
        }
        const char32_t cp = d.code_point;
        if (utf8::is_space(cp) || options.strip.contains(cp)) {
            flush();
        } else if (options.lowercase) {
            current += fold_case(sentence.substr(pos, d.length));
        } else {
            current.append(sentence.substr(pos, d.length));
        }
        pos += d.length;
    }
    flush();
    return tokens;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return std::move(ss).str();
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, const PreprocessOptions& options) {
    const std::string text = read_file(path);
    std::vector<std::vector<std::string>> sentences;
    for (const auto& s : split_sentences(text)) sentences.push_back(tokenize(s, options));
    return Corpus::from_sentences(std::move(sentences), path.string());
}

void write_corpus_file(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    for (const auto& sentence : corpus.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (i) out.put(' ');
            out << sentence[i];
        }
        out.put('\n');
    }
    if (!out) throw IoError(path.string(), "write failed");
}

Corpus read_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::vector<std::vector<std::string>> sentences;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && is_ascii_space(line[i])) ++i;
            std::size_t j = i;
            while (j < line.size() && !is_ascii_space(line[j])) ++j;
            if (j > i) tokens.emplace_back(line, i, j - i);
            i = j;
        }
        sentences.push_back(std::move(tokens));
    }
    return Corpus::from_sentences(std::move(sentences), path.string());
}

// ---------------------------------------------------------------------------
// Vocabulary

void Vocabulary::rebuild_index() {
    index_.clear();
    index_.reserve(entries_.size());
    total_tokens_ = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!index_.emplace(entries_[i].term, static_cast<TermId>(i)).second)
            throw ConfigError("duplicate vocabulary term: " + entries_[i].term);
        total_tokens_ += entries_[i].count;
    }
}

Vocabulary Vocabulary::from_counts(std::vector<VocabEntry> counts, std::uint64_t min_count) {
    Vocabulary v;
    v.min_count_ = min_count;
    std::erase_if(counts, [&](const VocabEntry& e) { return e.count < min_count; });
    std::sort(counts.begin(), counts.end(), [](const VocabEntry& a, const VocabEntry& b) {
        return a.count != b.count ? a.count > b.count : a.term < b.term;
    });
    v.entries_ = std::move(counts);
    v.rebuild_index();
    return v;
}

Vocabulary Vocabulary::from_ordered(std::vector<VocabEntry> entries, std::uint64_t min_count) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].count < min_count)
            throw ConfigError("vocabulary count below min_count for " + entries[i].term);
        if (i && entries[i].count > entries[i - 1].count)
            throw ConfigError("vocabulary entries are not in descending count order");
    }
    Vocabulary v;
    v.min_count_ = min_count;
    v.entries_ = std::move(entries);
    v.rebuild_index();
    return v;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TermId Vocabulary::at(std::string_view term) const {
    if (auto id = find(term)) return *id;
    throw LookupError(std::string(term));
}

std::vector<VocabEntry> count_tokens(const Corpus& corpus) {
    std::unordered_map<std::string_view, std::size_t> slot;
    std::vector<VocabEntry> counts;
    for (const auto& sentence : corpus.sentences) {
        for (const auto& token : sentence) {
            auto [it, inserted] = slot.try_emplace(token, counts.size());
            if (inserted) counts.push_back({token, 0});
            ++counts[it->second].count;
        }
    }
    return counts;
}

Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_count) {
    if (min_count == 0) throw DomainError("min_count must be at least 1");
    return Vocabulary::from_counts(count_tokens(corpus), min_count);
}

double subsample_keep_prob(std::uint64_t term_count, std::uint64_t total_tokens, double t) {
    if (term_count == 0 || total_tokens == 0) throw DomainError("subsampling needs positive counts");
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("subsampling threshold must be in (0, 1]");
    const double f = static_cast<double>(term_count) / static_cast<double>(total_tokens);
    if (f <= t) return 1.0;
    return std::min(1.0, (std::sqrt(f / t) + 1.0) * (t / f));
}

// ---------------------------------------------------------------------------
// Phrases

void PhraseConfig::validate() const {
    if (!(delta >= 0.0)) throw ConfigError("phrase delta must be >= 0");
    if (!(threshold > 0.0)) throw ConfigError("phrase threshold must be > 0");
    if (passes < 1) throw ConfigError("phrase passes must be >= 1");
    if (!(threshold_decay > 0.0 && threshold_decay <= 1.0))
        throw ConfigError("phrase threshold decay must be in (0, 1]");
}

double phrase_score(std::uint64_t count_ab, std::uint64_t count_a, std::uint64_t count_b,
                    std::uint64_t total_tokens, double delta) {
    if (count_a == 0 || count_b == 0) return 0.0;
    return (static_cast<double>(count_ab) - delta) * static_cast<double>(total_tokens) /
           (static_cast<double>(count_a) * static_cast<double>(count_b));
}

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<std::string_view, std::string_view>& p) const noexcept {
        const std::size_t h1 = std::hash<std::string_view>{}(p.first);
        const std::size_t h2 = std::hash<std::string_view>{}(p.second);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

Corpus phrase_pass(const Corpus& in, double delta, double threshold) {
    std::unordered_map<std::string_view, std::uint64_t> unigram;
    std::unordered_map<std::pair<std::string_view, std::string_view>, std::uint64_t, PairHash> bigram;
    for (const auto& s : in.sentences) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            ++unigram[s[i]];
            if (i + 1 < s.size()) ++bigram[{s[i], s[i + 1]}];
        }
    }
    const std::uint64_t total = in.token_count;
    auto score = [&](std::string_view a, std::string_view b) {
        auto it = bigram.find({a, b});
        if (it == bigram.end()) return 0.0;
        return phrase_score(it->second, unigram[a], unigram[b], total, delta);
    };

    std::vector<std::vector<std::string>> out;
    out.reserve(in.sentences.size());
    for (const auto& s : in.sentences) {
        std::vector<std::string> merged;
        merged.reserve(s.size());
        std::size_t i = 0;
        while (i < s.size()) {
            if (i + 1 < s.size() && score(s[i], s[i + 1]) > threshold) {
                merged.push_back(s[i] + "_" + s[i + 1]);
                i += 2;
            } else {
                merged.push_back(s[i]);
                i += 1;
            }
        }
        out.push_back(std::move(merged));
    }
    return Corpus::from_sentences(std::move(out), in.source_path);
}

} // namespace

Corpus detect_phrases(const Corpus& corpus, const PhraseConfig& config) {
    config.validate();
    Corpus current = corpus;
    double threshold = config.threshold;
    for (unsigned pass = 0; pass < config.passes; ++pass) {
        current = phrase_pass(current, config.delta, threshold);
        threshold *= config.threshold_decay;
    }
    return current;
}

} // namespace embedlab
