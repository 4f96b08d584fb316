#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qadd/fit.hpp"
#include "qadd/model.hpp"

namespace qadd {

/// Optional `# key = value` header entries of a dataset file. Unrecognized
/// comment lines are ignored.
struct DatasetMetadata {
    std::optional<int> dimension;                       // d
    std::optional<double> fidelity;                     // F
    std::optional<double> error_tolerance;              // epsilon
    std::optional<std::int64_t> superactivation_copies; // a
};

/// Parsed dataset: rows of (copy number, total value), strictly increasing in
/// N. A decrease in total value only warns, since upstream numerics may
/// wobble at the last digit.
struct DatasetFile {
    std::vector<DataPoint> rows;
    DatasetMetadata metadata;
    std::vector<std::string> warnings;
};

/// Read a dataset from a CSV file: `#` metadata/comment lines, then the
/// column header `N,E_total`, then one `N,value` row per line. Malformed
/// content throws validation_error naming the 1-based line.
DatasetFile load_dataset(const std::string& path);
DatasetFile parse_dataset(std::istream& in, const std::string& origin);

/// Serialized form of a model (schema version 1). Exactly one of exponents
/// and closure is present; which one is preserved across round-trips.
struct ModelFile {
    int schema = 1;
    std::int64_t base = 2;
    int order = 2;
    std::optional<std::vector<double>> exponents;
    std::optional<std::vector<double>> closure;
    std::vector<double> evector;
    std::vector<std::string> notes;

    /// Build the runtime model. Exponent-form files keep their exact
    /// exponents attached as the spectrum.
    ScalingModel to_model() const;

    static ModelFile from_exponents(std::int64_t base_a, std::vector<double> nus,
                                    std::vector<double> components,
                                    std::vector<std::string> notes = {});
    static ModelFile from_closure(std::int64_t base_a, std::vector<double> params,
                                  std::vector<double> components,
                                  std::vector<std::string> notes = {});

    bool operator==(const ModelFile&) const = default;
};

/// JSON text, newline terminated. parse_model(serialize_model(m)) == m
/// field-exactly; numbers are written with shortest round-trip precision.
std::string serialize_model(const ModelFile& model);
ModelFile parse_model(const std::string& text);

ModelFile load_model(const std::string& path);
void save_model(const ModelFile& model, const std::string& path);

/// Locale-independent decimal text with the given number of significant
/// digits.
std::string format_number(double value, int significant_digits);

/// Three-column CSV `N,model_per_copy,data_per_copy` over N = n_lo..n_hi at
/// unit steps. The data column is filled where the dataset has a row at
/// exactly that N and left blank elsewhere. Pass dataset = nullptr for a
/// model-only table.
std::string emit_figure_data(const ScalingModel& model, const DatasetFile* dataset,
                             std::int64_t n_lo, std::int64_t n_hi, int significant_digits = 6);

} // namespace qadd
