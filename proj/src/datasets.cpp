#include "hwe_equiv/datasets.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hwe_equiv/errors.hpp"

namespace hwe_equiv {

namespace {

constexpr std::string_view kRheumatoidArthritis =
    "5\n"
    "40 12\n"
    "6 32 2\n"
    "30 55 15 33\n";

constexpr std::string_view kGenepop =
    "2\n"
    "12 24\n"
    "30 34 54\n"
    "22 21 20 10\n";

constexpr std::string_view kRhesus =
    "1236\n"
    "120 3\n"
    "18 0 0\n"
    "982 55 7 249\n"
    "32 1 0 12 0\n"
    "2582 132 20 1162 29 1312\n"
    "6 0 0 4 0 4 0\n"
    "2 0 0 0 0 0 0 0\n"
    "115 5 2 53 1 149 0 0 4\n";

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto start = line.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) {
            break;
        }
        const auto end = line.find_first_of(" \t\r", start);
        out.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        pos = end == std::string_view::npos ? line.size() : end;
    }
    return out;
}

} // namespace

GenotypeCounts parse_dataset(std::string_view text)
{
    std::vector<std::int64_t> cells;
    std::size_t row = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        ++row;
        const auto toks = tokens(line);
        if (toks.size() != row) {
            throw ParseError(line_no, "row " + std::to_string(row) + " must hold " + std::to_string(row) +
                                          " counts, found " + std::to_string(toks.size()));
        }
        for (auto tok : toks) {
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
                throw ParseError(line_no, "invalid count '" + std::string(tok) + "'");
            }
            cells.push_back(value);
        }
    }
    if (row == 0) {
        throw ParseError(line_no, "empty dataset");
    }
    if (row < 2) {
        throw ParseError(line_no, "at least two alleles are required");
    }
    return GenotypeCounts(row, std::move(cells));
}

std::string serialize_dataset(const GenotypeCounts& counts)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < counts.k(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            out << (j == 0 ? "" : " ") << counts(i, j);
        }
        out << '\n';
    }
    return out.str();
}

const std::vector<BuiltinDataset>& builtin_datasets()
{
    static const std::vector<BuiltinDataset> sets = {
        {1, "rheumatoid-arthritis", "Wordsworth et al. (1992), rheumatoid arthritis study, 4 alleles",
         kRheumatoidArthritis},
        {2, "genepop", "Rousset (2008), example data shipped with the GENEPOP package, 4 alleles", kGenepop},
        {3, "rhesus", "Cavalli-Sforza and Bodmer (1971), Rhesus locus, 9 alleles", kRhesus},
    };
    return sets;
}

std::optional<GenotypeCounts> builtin_dataset(int id)
{
    for (const auto& d : builtin_datasets()) {
        if (d.id == id) {
            return parse_dataset(d.text);
        }
    }
    return std::nullopt;
}

GenotypeCounts load_dataset(const std::string& source)
{
    constexpr std::string_view prefix = "builtin:";
    if (source.starts_with(prefix)) {
        const auto id_text = std::string_view(source).substr(prefix.size());
        int id = 0;
        const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec == std::errc() && ptr == id_text.data() + id_text.size()) {
            if (auto d = builtin_dataset(id)) {
                return *d;
            }
        }
        throw InvalidArgument("unknown builtin dataset '" + source + "' (expected builtin:1, builtin:2 or builtin:3)");
    }
    std::ifstream in(source);
    if (!in) {
        throw InvalidArgument("cannot open dataset file '" + source + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

} // namespace hwe_equiv
