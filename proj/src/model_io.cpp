#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void append_float(std::string& out, float v) {
    std::array<char, 32> buf;
    const int n = std::snprintf(buf.data(), buf.size(), "%.6g", static_cast<double>(v));
    out.append(buf.data(), static_cast<std::size_t>(n));
}

constexpr std::array<char, 8> kMagic = {'E', 'M', 'B', 'L', 'B', 'I', 'N', '1'};

} // namespace

void save_text(const EmbeddingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    std::string line;
    line = std::to_string(model.size()) + " " + std::to_string(model.dims()) + "\n";
    out << line;
    for (std::size_t i = 0; i < model.size(); ++i) {
        line = model.vocab.term(static_cast<TermId>(i));
        for (float v : model.input_vectors.row(i)) {
            line.push_back(' ');
            append_float(line, v);
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw IoError(path.string(), "write failed");
}

EmbeddingModel load_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");

    std::string line;
    std::size_t line_no = 0;
    std::size_t declared_rows = 0;
    std::size_t dims = 0;
    bool has_header = false;
    std::vector<std::string> terms;
    std::vector<float> values;

    auto read_row = [&](const std::vector<std::string_view>& fields) {
        if (fields.size() != dims + 1)
            throw FormatError("expected " + std::to_string(dims) + " values, found " +
                                  std::to_string(fields.size() - 1),
                              line_no);
        terms.emplace_back(fields[0]);
        for (std::size_t k = 1; k < fields.size(); ++k) {
            float v;
            if (!parse_number(fields[k], v) || !std::isfinite(v))
                throw FormatError("bad vector value '" + std::string(fields[k]) + "'", line_no);
            values.push_back(v);
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (dims == 0) {
            std::size_t rows = 0;
            std::size_t cols = 0;
            if (fields.size() == 2 && parse_number(fields[0], rows) && parse_number(fields[1], cols)) {
                if (cols == 0) throw FormatError("header declares zero dimensions", line_no);
                has_header = true;
                declared_rows = rows;
                dims = cols;
                continue;
            }
            if (fields.size() < 2) throw FormatError("malformed header", line_no);
            // Headerless (GloVe-style) file: dimensionality from the first row.
            dims = fields.size() - 1;
        }
        if (has_header && terms.size() == declared_rows)
            throw FormatError("more rows than the header declares (" + std::to_string(declared_rows) + ")",
                              line_no);
        read_row(fields);
    }
    if (dims == 0) throw FormatError("empty vector file", line_no);
    if (has_header && terms.size() != declared_rows)
        throw FormatError("header declares " + std::to_string(declared_rows) + " rows, found " +
                              std::to_string(terms.size()),
                          line_no);

    std::vector<VocabEntry> entries;
    entries.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        entries.push_back({std::move(terms[i]), static_cast<std::uint64_t>(terms.size() - i)});
    EmbeddingModel model;
    try {
        model.vocab = Vocabulary::from_ordered(std::move(entries), 1);
    } catch (const ConfigError& e) {
        throw FormatError(e.what());
    }
    model.config.dims = dims;
    model.config.min_count = 1;
    model.input_vectors = Matrix<float>(model.vocab.size(), dims);
    std::copy(values.begin(), values.end(), model.input_vectors.data().begin());
    return model;
}

// ---------------------------------------------------------------------------
// Binary format, all integers and floats little-endian:
//   magic "EMBLBIN1" | u32 dims | u64 |V| | u64 output_rows | u64 trained_tokens
//   | u64 min_count | u32 config_len | config JSON
//   | |V| x (u32 term_len | term bytes | u64 count)
//   | |V| x dims f32 input | output_rows x dims f32 output

namespace {

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}
    template <typename T>
    void put(T v) {
        if constexpr (std::is_floating_point_v<T>) {
            put(std::bit_cast<std::uint32_t>(v));
        } else {
            std::array<char, sizeof(T)> b;
            for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
            out_.write(b.data(), b.size());
        }
    }
    void bytes(std::string_view s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }

private:
    std::ostream& out_;
};

class Reader {
public:
    Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}
    template <typename T>
    T get() {
        if constexpr (std::is_same_v<T, float>) {
            return std::bit_cast<float>(get<std::uint32_t>());
        } else {
            std::array<unsigned char, sizeof(T)> b;
            read(reinterpret_cast<char*>(b.data()), b.size());
            T v = 0;
            for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
            return v;
        }
    }
    std::string bytes(std::size_t n) {
        std::string s(n, '\0');
        read(s.data(), n);
        return s;
    }

private:
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError("truncated binary model " + path_);
    }
    std::istream& in_;
    std::string path_;
};

} // namespace

void save_binary(const EmbeddingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    Writer w(out);
    w.bytes({kMagic.data(), kMagic.size()});
    const std::string config = config_to_json(model.config);
    w.put(static_cast<std::uint32_t>(model.dims()));
    w.put(static_cast<std::uint64_t>(model.size()));
    w.put(static_cast<std::uint64_t>(model.output_vectors.rows()));
    w.put(static_cast<std::uint64_t>(model.trained_tokens));
    w.put(static_cast<std::uint64_t>(model.vocab.min_count()));
    w.put(static_cast<std::uint32_t>(config.size()));
    w.bytes(config);
    for (const auto& e : model.vocab.entries()) {
        w.put(static_cast<std::uint32_t>(e.term.size()));
        w.bytes(e.term);
        w.put(static_cast<std::uint64_t>(e.count));
    }
    for (float v : model.input_vectors.data()) w.put(v);
    for (float v : model.output_vectors.data()) w.put(v);
    if (!out) throw IoError(path.string(), "write failed");
}

EmbeddingModel load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    Reader r(in, path.string());
    if (r.bytes(kMagic.size()) != std::string_view(kMagic.data(), kMagic.size()))
        throw FormatError("not a binary embedding model: " + path.string());
    const auto dims = r.get<std::uint32_t>();
    const auto n = r.get<std::uint64_t>();
    const auto out_rows = r.get<std::uint64_t>();
    EmbeddingModel model;
    model.trained_tokens = r.get<std::uint64_t>();
    const auto min_count = r.get<std::uint64_t>();
    model.config = config_from_json(r.bytes(r.get<std::uint32_t>()));
    if (dims == 0 || model.config.dims != dims) throw FormatError("binary model dims disagree with its config");
    if (out_rows != 0 && out_rows != n) throw FormatError("binary model output rows disagree with |V|");
    std::vector<VocabEntry> entries;
    entries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        VocabEntry e;
        e.term = r.bytes(r.get<std::uint32_t>());
        e.count = r.get<std::uint64_t>();
        entries.push_back(std::move(e));
    }
    try {
        model.vocab = Vocabulary::from_ordered(std::move(entries), min_count);
    } catch (const ConfigError& e) {
        throw FormatError(e.what());
    }
    model.input_vectors = Matrix<float>(n, dims);
    for (float& v : model.input_vectors.data()) v = r.get<float>();
    model.output_vectors = Matrix<float>(out_rows, out_rows ? dims : 0);
    for (float& v : model.output_vectors.data()) v = r.get<float>();
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after binary model: " + path.string());
    return model;
}

EmbeddingModel load_embedding_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::array<char, kMagic.size()> head{};
    in.read(head.data(), head.size());
    if (static_cast<std::size_t>(in.gcount()) == head.size() && head == kMagic) return load_binary(path);
    return load_text(path);
}

} // namespace embedlab
