#include "pushpull/solomon.hpp"

#include <cctype>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace pushpull {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

double to_number(std::string_view word, int line) {
    double value = 0;
    const auto* end = word.data() + word.size();
    auto [ptr, ec] = std::from_chars(word.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseFileError(line, "non-numeric field '" + std::string(word) + "'");
    return value;
}

bool starts_with_word(const std::vector<std::string_view>& words, std::string_view w) {
    return !words.empty() && words.front() == w;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Instance parse_solomon(std::string_view text) {
    std::vector<std::pair<int, std::string_view>> lines;
    {
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            ++number;
            auto line = text.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.emplace_back(number, line);
            pos = end + 1;
        }
    }

    std::size_t i = 0;
    auto skip_blank = [&] {
        while (i < lines.size() && split_words(lines[i].second).empty()) ++i;
    };

    skip_blank();
    if (i == lines.size()) throw ParseFileError(1, "empty file");
    const auto name_words = split_words(lines[i].second);
    if (name_words.size() != 1) throw ParseFileError(lines[i].first, "expected instance name");
    std::string id(name_words.front());
    ++i;

    skip_blank();
    if (i == lines.size() || !starts_with_word(split_words(lines[i].second), "VEHICLE"))
        throw ParseFileError(i < lines.size() ? lines[i].first : lines.back().first, "expected VEHICLE section");
    ++i;
    skip_blank();
    if (i == lines.size() || !starts_with_word(split_words(lines[i].second), "NUMBER"))
        throw ParseFileError(i < lines.size() ? lines[i].first : lines.back().first, "expected NUMBER CAPACITY header");
    ++i;
    skip_blank();
    if (i == lines.size()) throw ParseFileError(lines.back().first, "missing vehicle line");
    const auto vehicle = split_words(lines[i].second);
    if (vehicle.size() != 2) throw ParseFileError(lines[i].first, "vehicle line needs NUMBER and CAPACITY");
    const double fleet = to_number(vehicle[0], lines[i].first);
    const double capacity = to_number(vehicle[1], lines[i].first);
    if (fleet < 1 || fleet != static_cast<int>(fleet)) throw ParseFileError(lines[i].first, "vehicle NUMBER must be a positive integer");
    ++i;

    skip_blank();
    if (i == lines.size() || !starts_with_word(split_words(lines[i].second), "CUSTOMER"))
        throw ParseFileError(i < lines.size() ? lines[i].first : lines.back().first, "expected CUSTOMER section");
    ++i;
    skip_blank();
    if (i == lines.size() || !starts_with_word(split_words(lines[i].second), "CUST"))
        throw ParseFileError(i < lines.size() ? lines[i].first : lines.back().first, "expected customer column header");
    ++i;

    std::vector<NodeData> nodes;
    std::set<int> seen;
    for (; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto words = split_words(line);
        if (words.empty()) continue;
        if (words.size() != 7) throw ParseFileError(number, "customer row needs 7 columns, found " + std::to_string(words.size()));
        double v[7];
        for (int k = 0; k < 7; ++k) v[k] = to_number(words[k], number);
        const int cust = static_cast<int>(v[0]);
        if (v[0] != cust || cust < 0) throw ParseFileError(number, "customer id must be a non-negative integer");
        if (!seen.insert(cust).second) throw ParseFileError(number, "duplicate customer id " + std::to_string(cust));
        if (cust != static_cast<int>(nodes.size()))
            throw ParseFileError(number, "customer ids must be consecutive from 0, found " + std::to_string(cust));
        NodeData node{{v[1], v[2]}, v[3], v[6], v[4], v[5]};
        if (cust == 0 && (node.load != 0 || node.service != 0)) throw ParseFileError(number, "depot must have zero demand and service time");
        if (node.ready > node.due) throw ParseFileError(number, "DUE DATE before READY TIME");
        if (node.load < 0 || node.service < 0 || node.ready < 0) throw ParseFileError(number, "negative demand, time or service");
        if (node.load > capacity) throw ParseFileError(number, "demand exceeds vehicle capacity");
        nodes.push_back(node);
    }
    if (nodes.empty()) throw ParseFileError(lines.back().first, "no depot row");

    return Instance(std::move(id), std::move(nodes), capacity, static_cast<int>(fleet));
}

Instance load_solomon(const std::filesystem::path& path) { return parse_solomon(read_file(path)); }

TargetTable parse_target_table(std::string_view text) {
    TargetTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto words = split_words(line);
        if (words.empty()) continue;
        if (words.size() != 2) throw ParseFileError(number, "expected `INSTANCE ROUTES`");
        const double routes = to_number(words[1], number);
        if (routes < 1 || routes != static_cast<int>(routes)) throw ParseFileError(number, "route count must be a positive integer");
        table[std::string(words[0])] = static_cast<int>(routes);
    }
    return table;
}

TargetTable load_target_table(const std::filesystem::path& path) { return parse_target_table(read_file(path)); }

}  // namespace pushpull
