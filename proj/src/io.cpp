#include "qadd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "qadd/closed_form.hpp"
#include "qadd/errors.hpp"
#include "qadd/spectrum.hpp"

namespace qadd {

namespace {

// A drop in total value larger than this (relative to the running scale)
// triggers a monotonicity warning.
constexpr double kMonotoneTol = 1e-9;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != ' ' && c != '\t') out.push_back(c);
    return out;
}

[[noreturn]] void fail_at(const std::string& origin, std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ": line " << line << ": " << what;
    throw validation_error(msg.str());
}

double parse_double_token(const std::string& token, const std::string& origin, std::size_t line,
                          const char* what) {
    const std::string t = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail_at(origin, line, std::string("cannot parse ") + what + " from '" + token + "'");
    return value;
}

std::int64_t parse_int_token(const std::string& token, const std::string& origin,
                             std::size_t line, const char* what) {
    const std::string t = trim(token);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail_at(origin, line, std::string("cannot parse ") + what + " from '" + token + "'");
    return value;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void apply_metadata(DatasetMetadata& meta, const std::string& body, const std::string& origin,
                    std::size_t line) {
    const auto eq = body.find('=');
    if (eq == std::string::npos) return; // plain comment
    const std::string key = lower(trim(body.substr(0, eq)));
    const std::string value = trim(body.substr(eq + 1));
    if (key == "d" || key == "dimension") {
        meta.dimension = static_cast<int>(parse_int_token(value, origin, line, "dimension"));
    } else if (key == "f" || key == "fidelity") {
        meta.fidelity = parse_double_token(value, origin, line, "fidelity");
    } else if (key == "epsilon" || key == "eps" || key == "error") {
        meta.error_tolerance = parse_double_token(value, origin, line, "error tolerance");
    } else if (key == "a" || key == "superactivation") {
        meta.superactivation_copies =
            parse_int_token(value, origin, line, "superactivation copy number");
    }
    // Anything else is somebody's comment that happens to contain '='.
}

nlohmann::json require_field(const nlohmann::json& j, const char* name) {
    if (!j.contains(name))
        throw validation_error(std::string("model file: missing field '") + name + "'");
    return j.at(name);
}

std::vector<double> number_array(const nlohmann::json& j, const char* name) {
    if (!j.is_array()) throw validation_error(std::string("model file: '") + name +
                                              "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw validation_error(std::string("model file: '") + name +
                                   "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

DatasetFile parse_dataset(std::istream& in, const std::string& origin) {
    DatasetFile file;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            apply_metadata(file.metadata, line.substr(1), origin, line_no);
            continue;
        }
        if (!header_seen) {
            if (strip_spaces(line) != "N,E_total")
                fail_at(origin, line_no, "expected column header 'N,E_total', got '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            fail_at(origin, line_no, "expected 'N,E_total' row, got '" + line + "'");
        const std::int64_t copies =
            parse_int_token(line.substr(0, comma), origin, line_no, "copy number");
        const double value =
            parse_double_token(line.substr(comma + 1), origin, line_no, "total value");
        if (copies < 1) fail_at(origin, line_no, "copy number must be a positive integer");
        if (!(value >= 0.0)) fail_at(origin, line_no, "total value must be non-negative");
        if (!file.rows.empty()) {
            const auto& prev = file.rows.back();
            if (static_cast<double>(copies) <= prev.copies)
                fail_at(origin, line_no, "copy numbers must be strictly increasing");
            if (value < prev.value - kMonotoneTol * std::max(1.0, std::abs(prev.value))) {
                std::ostringstream warning;
                warning << origin << ": line " << line_no << ": total value drops from "
                        << prev.value << " to " << value << "; quantifiers are expected to be "
                        << "non-decreasing in N";
                file.warnings.push_back(warning.str());
            }
        }
        file.rows.push_back({static_cast<double>(copies), value});
    }
    if (!header_seen) throw validation_error(origin + ": no data rows (missing header)");
    if (file.rows.empty()) throw validation_error(origin + ": no data rows");
    return file;
}

DatasetFile load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open dataset file '" + path + "'");
    return parse_dataset(in, path);
}

ScalingModel ModelFile::to_model() const {
    if (exponents) {
        ScalingModel model(base, closure_from_exponents(*exponents, base), EVector(evector));
        model.spectrum = spectrum_from_exponents(*exponents, base);
        return model;
    }
    return ScalingModel(base, ClosureSpec(*closure), EVector(evector));
}

ModelFile ModelFile::from_exponents(std::int64_t base_a, std::vector<double> nus,
                                    std::vector<double> components,
                                    std::vector<std::string> notes) {
    ModelFile file;
    file.base = base_a;
    file.order = static_cast<int>(nus.size());
    file.exponents = std::move(nus);
    file.evector = std::move(components);
    file.notes = std::move(notes);
    return file;
}

ModelFile ModelFile::from_closure(std::int64_t base_a, std::vector<double> params,
                                  std::vector<double> components,
                                  std::vector<std::string> notes) {
    ModelFile file;
    file.base = base_a;
    file.order = static_cast<int>(params.size());
    file.closure = std::move(params);
    file.evector = std::move(components);
    file.notes = std::move(notes);
    return file;
}

std::string serialize_model(const ModelFile& model) {
    nlohmann::json j;
    j["schema"] = model.schema;
    j["base"] = model.base;
    j["order"] = model.order;
    if (model.exponents) j["exponents"] = *model.exponents;
    if (model.closure) j["closure"] = *model.closure;
    j["evector"] = model.evector;
    if (!model.notes.empty()) j["notes"] = model.notes;
    return j.dump(2) + "\n";
}

ModelFile parse_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("model file: ") + e.what());
    }
    if (!j.is_object()) throw validation_error("model file: top level must be an object");

    ModelFile file;
    const auto schema = require_field(j, "schema");
    if (!schema.is_number_integer() || schema.get<int>() != 1)
        throw validation_error("model file: unsupported schema version (expected 1)");
    file.schema = 1;

    const auto base = require_field(j, "base");
    if (!base.is_number_integer() || base.get<std::int64_t>() < 2)
        throw validation_error("model file: 'base' must be an integer >= 2");
    file.base = base.get<std::int64_t>();

    const auto order = require_field(j, "order");
    if (!order.is_number_integer() || order.get<int>() < 1)
        throw validation_error("model file: 'order' must be an integer >= 1");
    file.order = order.get<int>();

    const bool has_exponents = j.contains("exponents");
    const bool has_closure = j.contains("closure");
    if (has_exponents == has_closure)
        throw validation_error(
            "model file: exactly one of 'exponents' and 'closure' must be present");
    if (has_exponents) file.exponents = number_array(j.at("exponents"), "exponents");
    if (has_closure) file.closure = number_array(j.at("closure"), "closure");

    file.evector = number_array(require_field(j, "evector"), "evector");

    const std::size_t q = static_cast<std::size_t>(file.order);
    if ((has_exponents ? file.exponents->size() : file.closure->size()) != q)
        throw validation_error("model file: parameter count must equal 'order'");
    if (file.evector.size() != q)
        throw validation_error("model file: 'evector' length must equal 'order'");

    if (j.contains("notes")) {
        const auto& notes = j.at("notes");
        if (!notes.is_array())
            throw validation_error("model file: 'notes' must be an array of strings");
        for (const auto& n : notes) {
            if (!n.is_string())
                throw validation_error("model file: 'notes' must be an array of strings");
            file.notes.push_back(n.get<std::string>());
        }
    }
    return file;
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

void save_model(const ModelFile& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write model file '" + path + "'");
    out << serialize_model(model);
    if (!out) throw validation_error("failed while writing model file '" + path + "'");
}

std::string format_number(double value, int significant_digits) {
    if (significant_digits < 1 || significant_digits > 17)
        throw validation_error("print precision must be between 1 and 17 significant digits");
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                      std::chars_format::general, significant_digits);
    return std::string(buffer, result.ptr);
}

std::string emit_figure_data(const ScalingModel& model, const DatasetFile* dataset,
                             std::int64_t n_lo, std::int64_t n_hi, int significant_digits) {
    if (n_lo < 1) throw validation_error("emit_figure_data: range must start at N >= 1");
    if (n_hi < n_lo) throw validation_error("emit_figure_data: empty N range");

    const ClosedFormEvaluator evaluator(model);
    std::ostringstream out;
    out << "N,model_per_copy,data_per_copy\n";
    std::size_t cursor = 0;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        out << n << ',' << format_number(evaluator.eval_per_copy(static_cast<double>(n)),
                                         significant_digits);
        out << ',';
        if (dataset) {
            while (cursor < dataset->rows.size() &&
                   dataset->rows[cursor].copies < static_cast<double>(n))
                ++cursor;
            if (cursor < dataset->rows.size() &&
                dataset->rows[cursor].copies == static_cast<double>(n))
                out << format_number(dataset->rows[cursor].value / dataset->rows[cursor].copies,
                                     significant_digits);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace qadd
