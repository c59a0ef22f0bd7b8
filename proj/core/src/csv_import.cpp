#include "p300bench/csv_import.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "p300bench/error.hpp"

namespace p300 {

namespace {

bool is_separator(char c) { return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r'; }

std::vector<double> parse_row(const std::string& line, const std::string& where) {
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        while (p < end && is_separator(*p)) ++p;
        if (p == end) break;
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || (next < end && !is_separator(*next)))
            throw_data("unparsable number at " + where);
        values.push_back(v);
        p = next;
    }
    return values;
}

bool blank(const std::string& line) {
    for (char c : line)
        if (!is_separator(c)) return false;
    return true;
}

}  // namespace

EpochSet import_csv(const std::filesystem::path& data_path, const std::filesystem::path& labels_path,
                    const CsvMeta& meta) {
    EpochSet set;
    set.n_channels = meta.n_channels;
    set.n_samples = meta.n_samples;
    set.sampling_rate_hz = meta.sampling_rate_hz;
    set.prestim_ms = meta.prestim_ms;
    set.channel_names = meta.channel_names.empty() ? default_channel_names(meta.n_channels) : meta.channel_names;

    std::ifstream labels_in(labels_path);
    if (!labels_in) throw_data("cannot open " + labels_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(labels_in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto fields = parse_row(line, labels_path.string() + ":" + std::to_string(line_no));
        if (fields.empty() || fields.size() > 2 || (fields[0] != 0.0 && fields[0] != 1.0))
            throw_data("label must be 0 or 1 at " + labels_path.string() + ":" + std::to_string(line_no));
        set.labels.push_back(static_cast<Label>(fields[0]));
        set.subject_ids.push_back(fields.size() == 2 ? static_cast<std::int32_t>(fields[1]) : -1);
    }

    std::ifstream data_in(data_path);
    if (!data_in) throw_data("cannot open " + data_path.string());
    const std::size_t width = set.epoch_size();
    std::size_t rows = 0;
    line_no = 0;
    while (std::getline(data_in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const std::string where = data_path.string() + ":" + std::to_string(line_no);
        auto values = parse_row(line, where);
        if (values.size() != width)
            throw_data("ragged row at " + where + ": expected " + std::to_string(width) + " values, got " +
                       std::to_string(values.size()));
        set.data.insert(set.data.end(), values.begin(), values.end());
        ++rows;
    }
    if (rows != set.labels.size())
        throw_data("row/label count mismatch: " + std::to_string(rows) + " rows, " +
                   std::to_string(set.labels.size()) + " labels");
    set.validate();
    return set;
}

void export_csv(const EpochSet& set, const std::filesystem::path& data_path,
                const std::filesystem::path& labels_path) {
    std::ofstream data_out(data_path);
    std::ofstream labels_out(labels_path);
    if (!data_out || !labels_out) throw_data("cannot write CSV output");
    char buf[32];
    for (std::size_t e = 0; e < set.size(); ++e) {
        const auto ep = set.epoch(e);
        for (std::size_t i = 0; i < ep.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(ep[i])));
            if (i) data_out << ',';
            data_out << buf;
        }
        data_out << '\n';
        labels_out << static_cast<int>(set.labels[e]) << ',' << set.subject_ids[e] << '\n';
    }
}

}  // namespace p300
