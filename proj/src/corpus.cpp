#include "sarceval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sarceval/detail/io.hpp"
#include "sarceval/detail/random.hpp"

namespace sarceval {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); });
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << (source.empty() ? "<input>" : source) << ":" << line_no << ": " << what;
    throw DataError(msg.str());
}

}  // namespace

std::string escape_field(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_field(std::string_view escaped) {
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        const char c = escaped[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        if (i + 1 == escaped.size()) throw DataError("dangling backslash escape");
        switch (escaped[++i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default: throw DataError(std::string("unknown escape \\") + escaped[i]);
        }
    }
    return out;
}

bool is_valid_utf8(std::string_view s) noexcept {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

Dataset parse_dataset(std::istream& in, LanguagePair lp, std::string source_path) {
    Dataset d;
    d.language_pair = lp;
    d.source_path = std::move(source_path);

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line()) fail_at(d.source_path, 1, "missing header line");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::size_t columns = 0;
    if (line == "id\ttext") {
        columns = 2;
    } else if (line == "id\ttext\tlabel") {
        columns = 3;
    } else {
        fail_at(d.source_path, line_no, "expected header 'id<TAB>text' or 'id<TAB>text<TAB>label'");
    }
    d.labeled = columns == 3;

    std::unordered_set<std::string> seen;
    while (next_line()) {
        if (!is_valid_utf8(line)) fail_at(d.source_path, line_no, "invalid UTF-8");
        const auto fields = split_tabs(line);
        if (fields.size() != columns) {
            fail_at(d.source_path, line_no,
                    "expected " + std::to_string(columns) + " columns, found " + std::to_string(fields.size()));
        }
        LabeledComment c;
        try {
            c.id = unescape_field(fields[0]);
            c.text = unescape_field(fields[1]);
        } catch (const DataError& e) {
            fail_at(d.source_path, line_no, e.what());
        }
        if (c.id.empty() || is_blank(c.id)) fail_at(d.source_path, line_no, "empty id");
        if (is_blank(c.text)) fail_at(d.source_path, line_no, "empty text for id '" + c.id + "'");
        if (!seen.insert(c.id).second) fail_at(d.source_path, line_no, "duplicate id '" + c.id + "'");
        if (columns == 3) {
            c.gold = label_from_string(fields[2]);
            if (!c.gold) fail_at(d.source_path, line_no, "invalid label '" + std::string(fields[2]) + "'");
        }
        d.comments.push_back(std::move(c));
    }
    if (in.bad()) fail_at(d.source_path, line_no, "read error");
    return d;
}

Dataset load_dataset(const std::filesystem::path& path, LanguagePair lp) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset " + path.string());
    return parse_dataset(in, lp, path.string());
}

void write_dataset(std::ostream& out, const Dataset& d) {
    out << (d.labeled ? "id\ttext\tlabel\n" : "id\ttext\n");
    for (const auto& c : d.comments) {
        out << escape_field(c.id) << '\t' << escape_field(c.text);
        if (d.labeled) {
            if (!c.gold) throw DataError("labeled dataset has comment without gold: " + c.id);
            out << '\t' << to_string(*c.gold);
        }
        out << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
    std::ostringstream ss;
    write_dataset(ss, d);
    detail::write_file_atomic(path, ss.str());
}

ValidationSummary validate_dataset(const Dataset& d, std::optional<std::size_t> expected_count) {
    ValidationSummary s;
    s.total = d.size();
    s.labeled = d.labeled;
    for (Label l : kAllLabels) s.per_label[l] = 0;

    std::set<std::string> seen;
    std::set<std::string> dup;
    for (const auto& c : d.comments) {
        if (!seen.insert(c.id).second && dup.insert(c.id).second) s.duplicate_ids.push_back(c.id);
        if (is_blank(c.text)) s.empty_text_ids.push_back(c.id);
        if (d.labeled && c.gold) ++s.per_label[*c.gold];
    }
    if (d.labeled) {
        const auto [lo, hi] = std::minmax(s.per_label[Label::NonSarcastic], s.per_label[Label::Sarcastic]);
        s.imbalance_ratio = hi == 0 ? 0.0 : static_cast<double>(lo) / static_cast<double>(hi);
    }
    s.expected_count = expected_count;
    s.count_mismatch = expected_count && *expected_count != s.total;
    return s;
}

void print_summary(std::ostream& out, const ValidationSummary& s) {
    out << "total: " << s.total << '\n';
    if (s.labeled) {
        for (Label l : kAllLabels) out << to_string(l) << ": " << s.per_label.at(l) << '\n';
        std::ostringstream ratio;
        ratio << std::fixed << std::setprecision(4) << s.imbalance_ratio;
        out << "imbalance ratio (minority/majority): " << ratio.str() << '\n';
    } else {
        out << "unlabeled dataset\n";
    }
    if (s.expected_count) {
        out << "expected count: " << *s.expected_count << (s.count_mismatch ? " (MISMATCH)" : " (ok)") << '\n';
    }
    for (const auto& id : s.duplicate_ids) out << "duplicate id: " << id << '\n';
    for (const auto& id : s.empty_text_ids) out << "empty text: " << id << '\n';
}

Dataset sample(const Dataset& d, std::size_t n, std::uint64_t seed) {
    if (n > d.size()) {
        throw DataError("sample size " + std::to_string(n) + " exceeds dataset size " + std::to_string(d.size()));
    }
    Dataset out;
    out.language_pair = d.language_pair;
    out.source_path = d.source_path;
    out.labeled = d.labeled;

    // Strata are index lists in dataset order; unlabeled data is one stratum.
    std::vector<std::vector<std::size_t>> strata(d.labeled ? kNumLabels : 1);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& g = d.comments[i].gold;
        strata[d.labeled && g ? index_of(*g) : 0].push_back(i);
    }

    // Largest-remainder quotas; ties go to the earlier stratum.
    std::vector<std::size_t> quota(strata.size());
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder numerator, stratum)
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < strata.size(); ++k) {
        const std::size_t num = n * strata[k].size();
        quota[k] = d.empty() ? 0 : num / d.size();
        assigned += quota[k];
        remainders.emplace_back(d.empty() ? 0 : num % d.size(), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < n; ++r) {
        ++quota[remainders[r % remainders.size()].second];
        ++assigned;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> picked;
    picked.reserve(n);
    for (std::size_t k = 0; k < strata.size(); ++k) {
        auto& idx = strata[k];
        // partial Fisher-Yates over the first quota[k] slots
        for (std::size_t i = 0; i < quota[k]; ++i) {
            const auto j = i + detail::uniform_below(rng, idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        picked.insert(picked.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[k]));
    }
    std::sort(picked.begin(), picked.end());
    out.comments.reserve(picked.size());
    for (auto i : picked) out.comments.push_back(d.comments[i]);
    return out;
}

}  // namespace sarceval
