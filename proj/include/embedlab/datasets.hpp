#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace embedlab {

/// A:A* :: B:B*
struct AnalogyQuestion {
    std::string a;
    std::string a_star;
    std::string b;
    std::string b_star;
    std::string section;

    friend bool operator==(const AnalogyQuestion&, const AnalogyQuestion&) = default;
};

/// Four terms, one of which is the intruder. Difficulty 1 (hardest) .. 4 (easiest), 0 = unlabeled.
struct IntrusionQuestion {
    std::array<std::string, 4> terms;
    std::string outlier;
    std::string section;
    int difficulty = 0;

    friend bool operator==(const IntrusionQuestion&, const IntrusionQuestion&) = default;
};

struct AnalogySection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> pairs;
};

struct IntrusionTriple {
    std::array<std::string, 3> related;
    /// outliers[d] holds the five difficulty-(d+1) intruders.
    std::array<std::vector<std::string>, 4> outliers;
};

struct IntrusionSection {
    std::string name;
    std::vector<IntrusionTriple> triples;
};

/// Compact task definitions. Text form:
///
///     [analogy husband-wife]
///     Ned,Catelyn
///     Robert,Cersei
///
///     [intrusion stark-family]
///     triple: Ned,Robb,Arya
///     d1: Theon,Jeyne,Jory,Rodrik,Hodor
///     d2: ...
///     d3: ...
///     d4: ...
///
/// Blank lines and lines starting with `#` are ignored.
struct TaskDefinition {
    std::vector<AnalogySection> analogy_sections;
    std::vector<IntrusionSection> intrusion_sections;
};

/// Throws DefinitionError with the offending line number.
TaskDefinition parse_task_definition(std::string_view text);
TaskDefinition load_task_definition(const std::filesystem::path& path);

/// All ordered pairs of distinct pairs per section: n(n-1) questions.
/// Throws DefinitionError for a section with fewer than two pairs.
std::vector<AnalogyQuestion> generate_analogy_questions(const TaskDefinition& defs);

/// Twenty questions per triple. The intruder's position comes from a shuffle seeded by a
/// stable hash of (section, triple, outlier), so output is reproducible.
/// Throws DefinitionError for wrong outlier-group arity or repeated terms.
std::vector<IntrusionQuestion> generate_intrusion_questions(const TaskDefinition& defs);

/// `: section` headers and `A A* B B*` lines.
std::string format_analogy_questions(const std::vector<AnalogyQuestion>& questions);
std::vector<AnalogyQuestion> parse_analogy_questions(std::string_view text);
void write_analogy_file(const std::vector<AnalogyQuestion>& questions, const std::filesystem::path& path);
std::vector<AnalogyQuestion> parse_analogy_file(const std::filesystem::path& path);

struct IntrusionParseOptions {
    /// Reject lines without the difficulty field.
    bool require_difficulty = false;
};

/// `: section` headers and `t1 t2 t3 t4 | outlier | difficulty` lines; the difficulty field
/// is written only when non-zero.
std::string format_intrusion_questions(const std::vector<IntrusionQuestion>& questions);
std::vector<IntrusionQuestion> parse_intrusion_questions(std::string_view text,
                                                         const IntrusionParseOptions& options = {});
void write_intrusion_file(const std::vector<IntrusionQuestion>& questions, const std::filesystem::path& path);
std::vector<IntrusionQuestion> parse_intrusion_file(const std::filesystem::path& path,
                                                    const IntrusionParseOptions& options = {});

/// Number of distinct section names in file order.
template <typename Question>
std::size_t section_count(const std::vector<Question>& questions) {
    std::size_t n = 0;
    const std::string* last = nullptr;
    std::vector<std::string_view> seen;
    for (const auto& q : questions) {
        if (last && *last == q.section) continue;
        last = &q.section;
        bool known = false;
        for (auto s : seen) known = known || s == q.section;
        if (!known) {
            seen.push_back(q.section);
            ++n;
        }
    }
    return n;
}

} // namespace embedlab
