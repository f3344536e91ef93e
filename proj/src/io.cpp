#include "gbsmock/io.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "gbsmock/errors.hpp"

namespace gbsmock {

using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path));
    out << text;
    out.close();
    if (!out) throw Error(fmt::format("write to '{}' failed", path));
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

ojson parse_json(const std::string& text, const std::string& source) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("{}: malformed JSON: {}", source, e.what()), line_of_byte(text, e.byte));
    }
}

template <typename T>
T field(const ojson& j, const char* name, const std::string& source) {
    if (!j.contains(name)) throw ParseError(fmt::format("{}: missing field '{}'", source, name));
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("{}: field '{}': {}", source, name, e.what()));
    }
}

ojson matrix_part(const ComplexMatrix& m, bool imag) {
    ojson rows = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ojson row = ojson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<double>> read_matrix(const ojson& j, const char* name, const std::string& source) {
    auto m = field<std::vector<std::vector<double>>>(j, name, source);
    return m;
}

double json_number(const ojson& v) { return v.is_null() ? NAN : v.get<double>(); }

}  // namespace

// ---- instances ---------------------------------------------------------------

std::string instance_to_json(const GBSInstance& instance) {
    ojson j;
    j["schema"] = "gbsmock-instance";
    j["schema_version"] = kInstanceSchemaVersion;
    j["n_output"] = instance.n_output;
    j["n_input"] = instance.n_input;
    j["squeezing"] = instance.squeezing;
    j["transformation"] = {{"real", matrix_part(instance.transformation, false)},
                           {"imag", matrix_part(instance.transformation, true)}};
    return j.dump(1) + "\n";
}

GBSInstance instance_from_json(const std::string& text, const std::string& source) {
    const ojson j = parse_json(text, source);
    if (!j.is_object()) throw ParseError(fmt::format("{}: instance must be a JSON object", source));
    const int version = field<int>(j, "schema_version", source);
    if (version != kInstanceSchemaVersion) {
        throw ParseError(fmt::format("{}: unsupported schema_version {}", source, version));
    }
    GBSInstance inst;
    inst.n_output = field<int>(j, "n_output", source);
    inst.n_input = field<int>(j, "n_input", source);
    inst.squeezing = field<std::vector<double>>(j, "squeezing", source);
    const auto& t = j.contains("transformation") ? j.at("transformation") : throw ParseError(
        fmt::format("{}: missing field 'transformation'", source));
    const auto re = read_matrix(t, "real", source + " transformation");
    const auto im = read_matrix(t, "imag", source + " transformation");
    if (re.size() != im.size()) throw DimensionError(fmt::format("{}: real and imaginary parts differ in rows", source));
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
    inst.transformation.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(re[r].size()) != cols || static_cast<Eigen::Index>(im[r].size()) != cols) {
            throw DimensionError(fmt::format("{}: transformation row {} has the wrong length", source, r));
        }
        for (Eigen::Index c = 0; c < cols; ++c) inst.transformation(r, c) = {re[r][c], im[r][c]};
    }
    validate(inst);
    return inst;
}

GBSInstance load_instance(const std::string& path) { return instance_from_json(read_file(path), path); }

void save_instance(const GBSInstance& instance, const std::string& path) {
    validate(instance);
    write_file(path, instance_to_json(instance));
}

std::string instance_digest(const GBSInstance& instance) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : instance_to_json(instance)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

namespace {

std::vector<std::vector<double>> read_text_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r,") == std::string::npos || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError(fmt::format("{}: '{}' is not a number", path, tok), line_no);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

GBSInstance import_ustc(const std::string& real_path, const std::string& imag_path, const std::string& squeezing_path) {
    const auto re = read_text_matrix(real_path);
    const auto im = read_text_matrix(imag_path);
    const auto sq = read_text_matrix(squeezing_path);
    if (re.empty()) throw ParseError(fmt::format("{}: no matrix rows", real_path));
    if (re.size() != im.size()) throw DimensionError("real and imaginary matrices differ in row count");
    GBSInstance inst;
    inst.n_output = static_cast<int>(re.size());
    inst.n_input = static_cast<int>(re[0].size());
    inst.transformation.resize(inst.n_output, inst.n_input);
    for (int r = 0; r < inst.n_output; ++r) {
        if (static_cast<int>(re[r].size()) != inst.n_input) {
            throw ParseError(fmt::format("{}: row has {} entries, expected {}", real_path, re[r].size(), inst.n_input),
                             static_cast<std::size_t>(r + 1));
        }
        if (static_cast<int>(im[r].size()) != inst.n_input) {
            throw DimensionError(fmt::format("{}: row {} has {} entries, expected {}", imag_path, r + 1, im[r].size(),
                                             inst.n_input));
        }
        for (int c = 0; c < inst.n_input; ++c) inst.transformation(r, c) = {re[r][c], im[r][c]};
    }
    for (const auto& row : sq) inst.squeezing.insert(inst.squeezing.end(), row.begin(), row.end());
    validate(inst);
    return inst;
}

// ---- samples -------------------------------------------------------------------

std::string metadata_to_json(const SampleMetadata& m, int n_modes, std::optional<std::size_t> n_samples) {
    ojson j;
    j["n_modes"] = n_modes;
    if (n_samples) j["n_samples"] = *n_samples;
    if (!m.sampler.empty()) j["sampler"] = m.sampler;
    if (m.order) j["order"] = *m.order;
    if (m.seed) j["seed"] = *m.seed;
    if (m.burn_in) j["burn_in"] = *m.burn_in;
    if (m.thinning) j["thinning"] = *m.thinning;
    if (!m.instance_digest.empty()) j["instance_digest"] = m.instance_digest;
    if (!m.extra.empty()) j["extra"] = m.extra;
    return j.dump();
}

SampleReader::SampleReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw Error(fmt::format("cannot open '{}'", path));
    std::string first;
    if (!read_line(first)) throw ParseError(fmt::format("{}: empty sample file", path), 1);
    if (first.rfind("#", 0) == 0) {
        const std::string tag = kSampleHeaderTag;
        if (first.rfind(tag, 0) != 0) throw ParseError(fmt::format("{}: unrecognized header", path), 1);
        const std::string body = first.substr(tag.size());
        ojson j;
        try {
            j = ojson::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(fmt::format("{}: malformed header: {}", path, e.what()), 1);
        }
        try {
            n_modes_ = j.at("n_modes").get<int>();
            if (j.contains("n_samples")) declared_ = j.at("n_samples").get<std::size_t>();
            if (j.contains("sampler")) metadata_.sampler = j.at("sampler").get<std::string>();
            if (j.contains("order")) metadata_.order = j.at("order").get<int>();
            if (j.contains("seed")) metadata_.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("burn_in")) metadata_.burn_in = j.at("burn_in").get<long long>();
            if (j.contains("thinning")) metadata_.thinning = j.at("thinning").get<long long>();
            if (j.contains("instance_digest")) metadata_.instance_digest = j.at("instance_digest").get<std::string>();
            if (j.contains("extra")) metadata_.extra = j.at("extra").get<std::map<std::string, std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(fmt::format("{}: bad header field: {}", path, e.what()), 1);
        }
        if (n_modes_ <= 0) throw ParseError(fmt::format("{}: n_modes must be positive", path), 1);
    } else {
        n_modes_ = static_cast<int>(first.size());
        if (n_modes_ == 0) throw ParseError(fmt::format("{}: empty sample line", path), 1);
        pending_ = std::move(first);
    }
}

bool SampleReader::read_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
}

bool SampleReader::next(std::vector<std::uint8_t>& bits) {
    std::string line;
    if (pending_) {
        line = std::move(*pending_);
        pending_.reset();
    } else if (!read_line(line)) {
        if (declared_ && *declared_ != rows_) {
            throw ParseError(fmt::format("{}: header declares {} samples, file has {}", path_, *declared_, rows_),
                             line_no_);
        }
        return false;
    }
    if (static_cast<int>(line.size()) != n_modes_) {
        throw ParseError(fmt::format("{}: sample has {} characters, expected {}", path_, line.size(), n_modes_),
                         line_no_);
    }
    bits.resize(n_modes_);
    for (int a = 0; a < n_modes_; ++a) {
        const char c = line[a];
        if (c != '0' && c != '1') {
            throw ParseError(fmt::format("{}: invalid character '{}' at column {}", path_,
                                         c == '\r' ? std::string("\\r") : std::string(1, c), a + 1),
                             line_no_);
        }
        bits[a] = static_cast<std::uint8_t>(c - '0');
    }
    ++rows_;
    if (declared_ && rows_ > *declared_) {
        throw ParseError(fmt::format("{}: more samples than the declared {}", path_, *declared_), line_no_);
    }
    return true;
}

SampleWriter::SampleWriter(const std::string& path, int n_modes, const SampleMetadata& metadata,
                           std::optional<std::size_t> n_samples)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), n_modes_(n_modes), line_(n_modes + 1, '\n') {
    if (!out_) throw Error(fmt::format("cannot write '{}'", path));
    out_ << kSampleHeaderTag << metadata_to_json(metadata, n_modes, n_samples) << '\n';
}

void SampleWriter::write(std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != n_modes_) {
        throw DimensionError(fmt::format("sample has {} bits, expected {}", bits.size(), n_modes_));
    }
    for (int a = 0; a < n_modes_; ++a) line_[a] = bits[a] ? '1' : '0';
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
}

void SampleWriter::close() {
    if (!out_.is_open()) return;
    out_.close();
    if (!out_) throw Error(fmt::format("write to '{}' failed", path_));
}

SampleWriter::~SampleWriter() {
    try {
        close();
    } catch (...) {
    }
}

SampleSet load_samples(const std::string& path, std::size_t max_rows) {
    SampleReader reader(path);
    SampleSet out(reader.n_modes());
    out.metadata = reader.metadata();
    if (reader.declared_count()) out.reserve(max_rows ? std::min(max_rows, *reader.declared_count()) : *reader.declared_count());
    std::vector<std::uint8_t> bits;
    while ((max_rows == 0 || out.size() < max_rows) && reader.next(bits)) out.push_back(bits);
    if (out.empty()) throw ParseError(fmt::format("{}: no samples", path));
    return out;
}

void save_samples(const SampleSet& samples, const std::string& path) {
    SampleWriter w(path, samples.n_modes(), samples.metadata, samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) w.write(samples.row(i));
    w.close();
}

// ---- reports -------------------------------------------------------------------

std::string report_to_json(const MetricReport& r) {
    ojson j;
    j["metric"] = r.metric;
    j["columns"] = r.columns;
    j["metadata"] = r.metadata;
    ojson aggs = ojson::array();
    for (const auto& a : r.aggregates) {
        ojson e;
        e["group"] = a.group;
        e["column"] = a.column;
        e["count"] = a.count;
        e["mean"] = a.mean;
        e["stddev"] = a.stddev;
        e["stderr"] = a.stderr_mean;
        if (a.lower) e["lower"] = *a.lower;
        if (a.upper) e["upper"] = *a.upper;
        aggs.push_back(std::move(e));
    }
    j["aggregates"] = std::move(aggs);
    ojson rows = ojson::array();
    for (const auto& row : r.rows) {
        ojson e;
        e["group"] = row.group;
        e["modes"] = row.modes;
        ojson vals = ojson::array();
        for (double v : row.values) vals.push_back(std::isfinite(v) ? ojson(v) : ojson(nullptr));
        e["values"] = std::move(vals);
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    ojson tables = ojson::array();
    for (const auto& t : r.tables) {
        ojson e;
        e["name"] = t.name;
        e["columns"] = t.columns;
        ojson trows = ojson::array();
        for (const auto& tr : t.rows) {
            ojson vals = ojson::array();
            for (double v : tr) vals.push_back(std::isfinite(v) ? ojson(v) : ojson(nullptr));
            trows.push_back(std::move(vals));
        }
        e["rows"] = std::move(trows);
        tables.push_back(std::move(e));
    }
    j["tables"] = std::move(tables);
    return j.dump(1) + "\n";
}

MetricReport report_from_json(const std::string& text) {
    const ojson j = parse_json(text, "report");
    MetricReport r;
    try {
        r.metric = j.at("metric").get<std::string>();
        r.columns = j.at("columns").get<std::vector<std::string>>();
        r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
        for (const auto& e : j.at("aggregates")) {
            ReportAggregate a;
            a.group = e.at("group").get<std::string>();
            a.column = e.at("column").get<std::string>();
            a.count = e.at("count").get<std::size_t>();
            a.mean = json_number(e.at("mean"));
            a.stddev = json_number(e.at("stddev"));
            a.stderr_mean = json_number(e.at("stderr"));
            if (e.contains("lower")) a.lower = json_number(e.at("lower"));
            if (e.contains("upper")) a.upper = json_number(e.at("upper"));
            r.aggregates.push_back(std::move(a));
        }
        for (const auto& e : j.at("rows")) {
            ReportRow row;
            row.group = e.at("group").get<std::string>();
            row.modes = e.at("modes").get<ModeList>();
            for (const auto& v : e.at("values")) row.values.push_back(json_number(v));
            r.rows.push_back(std::move(row));
        }
        for (const auto& e : j.at("tables")) {
            ReportTable t;
            t.name = e.at("name").get<std::string>();
            t.columns = e.at("columns").get<std::vector<std::string>>();
            for (const auto& tr : e.at("rows")) {
                std::vector<double> vals;
                for (const auto& v : tr) vals.push_back(json_number(v));
                t.rows.push_back(std::move(vals));
            }
            r.tables.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("report: {}", e.what()));
    }
    return r;
}

std::string report_json_twin(const std::string& csv_path) {
    return std::filesystem::path(csv_path).replace_extension(".json").string();
}

void save_report(const MetricReport& report, const std::string& path, ReportFormat format) {
    if (format == ReportFormat::Json) {
        write_file(path, report_to_json(report));
        return;
    }
    std::string csv = "group,modes";
    for (const auto& c : report.columns) csv += "," + c;
    csv += "\n";
    for (const auto& row : report.rows) {
        csv += row.group + ",";
        for (std::size_t i = 0; i < row.modes.size(); ++i) csv += (i ? ";" : "") + std::to_string(row.modes[i]);
        for (double v : row.values) csv += fmt::format(",{:.17g}", v);
        csv += "\n";
    }
    write_file(path, csv);
    const auto twin = report_json_twin(path);
    if (twin == path) throw Error(fmt::format("CSV report path '{}' collides with its JSON twin", path));
    write_file(twin, report_to_json(report));
}

MetricReport load_report(const std::string& json_path) { return report_from_json(read_file(json_path)); }

}  // namespace gbsmock
