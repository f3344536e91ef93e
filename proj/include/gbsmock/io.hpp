#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gbsmock/instance.hpp"
#include "gbsmock/report.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

// ---- instances ------------------------------------------------------------
//
// {"schema": "gbsmock-instance", "schema_version": 1, "n_output": N, "n_input": K,
//  "squeezing": [...K/2...], "transformation": {"real": [[...]], "imag": [[...]]}}
//
// Reals are written with round-trip precision, so save -> load is bit exact.

inline constexpr int kInstanceSchemaVersion = 1;

std::string instance_to_json(const GBSInstance& instance);
/// Parses and validates. `source` names the input in error messages.
GBSInstance instance_from_json(const std::string& text, const std::string& source = "<string>");
GBSInstance load_instance(const std::string& path);
void save_instance(const GBSInstance& instance, const std::string& path);

/// FNV-1a hash (16 hex digits) of the canonical JSON form.
std::string instance_digest(const GBSInstance& instance);

/// Builds a canonical instance from plain whitespace-separated text matrices:
/// real and imaginary parts of T (N rows of K numbers) and K/2 squeezing values.
/// The layout of the published archives is not fixed here; convert to this
/// form first and check the mean click number before trusting the result.
GBSInstance import_ustc(const std::string& real_path, const std::string& imag_path, const std::string& squeezing_path);

// ---- samples ---------------------------------------------------------------
//
// Line 1: "# gbsmock-samples " followed by a JSON object with at least
// "n_modes" (and "n_samples" when known). Then one line per sample of exactly
// n_modes characters '0'/'1'; mode 0 is the leftmost character. Files without
// the header are accepted, taking n_modes from the first line.

inline constexpr const char* kSampleHeaderTag = "# gbsmock-samples ";

class SampleReader {
  public:
    explicit SampleReader(const std::string& path);

    int n_modes() const noexcept { return n_modes_; }
    const SampleMetadata& metadata() const noexcept { return metadata_; }
    std::optional<std::size_t> declared_count() const noexcept { return declared_; }

    /// Reads the next sample; false at end of file. Throws ParseError with the
    /// line number on malformed lines or a count mismatch with the header.
    bool next(std::vector<std::uint8_t>& bits);
    std::size_t rows_read() const noexcept { return rows_; }

  private:
    bool read_line(std::string& line);

    std::string path_;
    std::ifstream in_;
    int n_modes_ = 0;
    SampleMetadata metadata_;
    std::optional<std::size_t> declared_;
    std::optional<std::string> pending_;
    std::size_t line_no_ = 0;
    std::size_t rows_ = 0;
};

class SampleWriter {
  public:
    SampleWriter(const std::string& path, int n_modes, const SampleMetadata& metadata,
                 std::optional<std::size_t> n_samples = std::nullopt);
    void write(std::span<const std::uint8_t> bits);
    /// Flushes and checks the stream; called by the destructor when omitted.
    void close();
    ~SampleWriter();

  private:
    std::string path_;
    std::ofstream out_;
    int n_modes_;
    std::string line_;
};

std::string metadata_to_json(const SampleMetadata& metadata, int n_modes, std::optional<std::size_t> n_samples);

/// Loads at most max_rows samples (all when 0).
SampleSet load_samples(const std::string& path, std::size_t max_rows = 0);
void save_samples(const SampleSet& samples, const std::string& path);

// ---- reports ---------------------------------------------------------------

enum class ReportFormat { Json, Csv };

std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text);

/// Json writes one document. Csv writes the per-subset rows to `path` and the
/// full report (aggregates, bounds, tables, metadata) to a JSON twin next to it
/// (same name with the extension replaced by ".json").
void save_report(const MetricReport& report, const std::string& path, ReportFormat format);
MetricReport load_report(const std::string& json_path);
std::string report_json_twin(const std::string& csv_path);

}  // namespace gbsmock
