#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "rpmsim/cohort.h"

namespace rpm {

inline constexpr int kFormatVersion = 1;

/// File name -> contents for every file of a bundle.
using BundleFiles = std::map<std::string, std::string>;

inline constexpr std::array<std::string_view, 8> kEntityFiles{
    "patients", "hcps", "measurements", "alerts", "responses", "medication_changes", "admissions", "consultations"};

BundleFiles render_bundle(const Cohort& cohort);

/// Writes the bundle into `destination` (created if its parent exists).
/// Throws ValidationError for an invalid cohort and IoError when the
/// destination cannot be written.
BundleFiles export_bundle(const Cohort& cohort, const std::filesystem::path& destination);

struct ImportOptions {
    bool check_row_counts = true;
    bool validate = true;
};

Cohort parse_bundle(const BundleFiles& files, const ImportOptions& options = {});

/// Throws FormatError naming a missing file, VersionError for an unknown
/// format_version and ValidationError with the violation report.
Cohort import_bundle(const std::filesystem::path& source, const ImportOptions& options = {});

/// Manifest row counts that disagree with the entity files, as messages.
std::vector<std::string> row_count_mismatches(const BundleFiles& files);

BundleFiles read_bundle_files(const std::filesystem::path& source);

/// Uncompressed POSIX ustar archive of the bundle, entries under `prefix/`.
std::string tar_archive(const BundleFiles& files, const std::string& prefix);

} // namespace rpm
