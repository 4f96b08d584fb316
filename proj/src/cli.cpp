#include "qadd/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qadd/analysis.hpp"
#include "qadd/closed_form.hpp"
#include "qadd/companion.hpp"
#include "qadd/errors.hpp"
#include "qadd/fit.hpp"
#include "qadd/io.hpp"
#include "qadd/spectrum.hpp"

namespace qadd {

namespace {

// Built-in one-shot-distillable entanglement inputs for isotropic states at
// fidelity-matched local dimensions 2, 3, 4: superactivation copy number a,
// the total value at a copies, and the total value at a^2 copies (a^2 times
// the per-copy rate there).
struct OsdInput {
    const char* name;
    std::int64_t a;
    double e2;
    double e3;
    std::int64_t n_max; // figure table covers N = 1..n_max
};

constexpr OsdInput kOsdInputs[] = {
    {"d2", 6, 1.0, 36 * 0.405, 50},
    {"d3", 6, 1.0, 36 * 0.518, 40},
    {"d4", 5, 1.0, 25 * 0.659, 30},
};

double parse_number(const std::string& text, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw validation_error(std::string("cannot parse ") + what + " from '" + text + "'");
    return value;
}

// "j=v" with 1-based slot j.
std::pair<int, double> parse_assignment(const std::string& text, int order, const char* what) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw validation_error(std::string(what) + ": expected slot=value, got '" + text + "'");
    int slot = 0;
    const std::string head = text.substr(0, eq);
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), slot);
    if (ec != std::errc{} || ptr != head.data() + head.size() || slot < 1 || slot > order) {
        std::ostringstream msg;
        msg << what << ": slot must be an integer in 1.." << order << ", got '" << head << "'";
        throw validation_error(msg.str());
    }
    return {slot, parse_number(text.substr(eq + 1), what)};
}

void print_constraints(const FeasibilityReport& report, std::ostream& out, int precision) {
    for (const auto& c : report.constraints)
        out << (c.satisfied ? "ok        " : "VIOLATED  ") << c.name << " (margin "
            << format_number(c.margin, precision) << ")\n";
}

// Real exponents of the model, multiplicity expanded, descending.
std::vector<double> real_exponents(const ScalingModel& model) {
    const Spectrum spectrum =
        model.spectrum ? *model.spectrum : eigen_spectrum(model.closure, model.base_a);
    if (spectrum.has_complex) return {};
    std::vector<double> out;
    for (const auto& root : spectrum.roots)
        for (int j = 0; j < root.multiplicity; ++j) out.push_back(root.exponent.real());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

FeasibilityReport feasibility_suite(const ScalingModel& model) {
    FeasibilityReport report;
    for (int m = 0; m < model.order(); ++m) {
        std::ostringstream name;
        name << "e" << (m + 1) << " >= 0";
        report.constraints.push_back(
            Constraint{name.str(), model.evector[m] >= 0.0, model.evector[m]});
    }
    if (model.order() == 2) {
        const std::vector<double> params = model.closure.params_real();
        const FeasibilityReport pair = check_2additive_feasibility(
            model.evector[0], model.evector[1], params[0], params[1]);
        report.constraints.insert(report.constraints.end(), pair.constraints.begin(),
                                  pair.constraints.end());
    }
    if (model.order() == 3) {
        const std::vector<double> nus = real_exponents(model);
        const bool osd_shape = nus.size() == 3 && std::abs(nus[0] - 1.0) < 1e-9 &&
                               std::abs(nus[1] - 0.5) < 1e-9 && std::abs(nus[2]) < 1e-9 &&
                               model.evector[0] <= 1e-12;
        if (osd_shape) {
            const FeasibilityReport osd =
                check_osd_consistency(model.base_a, model.evector[1], model.evector[2]);
            report.constraints.insert(report.constraints.end(), osd.constraints.begin(),
                                      osd.constraints.end());
        }
    }
    return report;
}

int run_eval(const std::string& model_path, double n_copies, bool per_copy, int precision,
             std::ostream& out) {
    const ScalingModel model = load_model(model_path).to_model();
    const ClosedFormEvaluator evaluator(model);
    const double value = per_copy ? evaluator.eval_per_copy(n_copies) : evaluator.eval(n_copies);
    out << format_number(value, precision) << "\n";
    return 0;
}

int run_oracle(const std::string& model_path, std::int64_t n_copies, bool per_copy, bool exact,
               int precision, std::ostream& out) {
    const ScalingModel model = load_model(model_path).to_model();
    const auto exponent = CopyLattice::exponent_of(model.base_a, Integer(n_copies));
    if (!exponent) {
        std::ostringstream msg;
        msg << "oracle: N = " << n_copies << " is not a power of the base a = " << model.base_a;
        throw validation_error(msg.str());
    }
    const Rational value = oracle_eval_exact(model, *exponent);
    if (exact) {
        if (per_copy) {
            const Rational per = value / Rational(ipow(model.base_a, *exponent));
            out << per << "\n";
        } else {
            out << value << "\n";
        }
    } else {
        double v = static_cast<double>(value);
        if (per_copy) v /= static_cast<double>(n_copies);
        out << format_number(v, precision) << "\n";
    }
    return 0;
}

int run_asymptote(const std::string& model_path, int precision, std::ostream& out) {
    const ScalingModel model = load_model(model_path).to_model();
    const AsymptoteReport report = asymptote(model);
    switch (report.kind) {
    case AsymptoteKind::finite:
        out << format_number(*report.value, precision) << "\n";
        break;
    case AsymptoteKind::vanishes:
        out << "vanishes\n";
        break;
    case AsymptoteKind::power_divergent:
        out << "power-divergent nu_max=" << format_number(report.nu_max, precision) << "\n";
        break;
    case AsymptoteKind::log_divergent:
        out << "log-divergent order=" << report.log_order() << "\n";
        break;
    }
    return 0;
}

int run_check(const std::string& model_path, int precision, std::ostream& out) {
    const ScalingModel model = load_model(model_path).to_model();
    const FeasibilityReport report = feasibility_suite(model);
    print_constraints(report, out, precision);
    return report.all_satisfied() ? 0 : 2;
}

struct FitOptions {
    std::string data_path;
    std::int64_t base = 0; // 0 means take it from dataset metadata
    int order = 0;
    std::vector<double> exponents;
    std::vector<std::string> fix_exponents;
    std::vector<std::string> fix_components;
    double lo = 0.0;
    double hi = 1.5;
    bool total = false;
    bool allow_negative = false;
    std::string out_path;
};

int run_fit(const FitOptions& options, int precision, std::ostream& out, std::ostream& err) {
    const DatasetFile dataset = load_dataset(options.data_path);
    for (const auto& w : dataset.warnings) err << "warning: " << w << "\n";

    std::int64_t base = options.base;
    if (base == 0) {
        if (!dataset.metadata.superactivation_copies)
            throw validation_error(
                "fit: pass --base or record '# a = ...' in the dataset header");
        base = *dataset.metadata.superactivation_copies;
    }

    FitProblem problem(dataset.rows, base, options.order);
    problem.exponent_lo = options.lo;
    problem.exponent_hi = options.hi;
    problem.per_copy_objective = !options.total;
    problem.nonnegative_components = !options.allow_negative;

    if (!options.exponents.empty()) {
        if (static_cast<int>(options.exponents.size()) != options.order)
            throw validation_error("fit: --exponents must list exactly one value per slot");
        for (int j = 0; j < options.order; ++j)
            problem.fixed_exponents[static_cast<std::size_t>(j)] = options.exponents[
                static_cast<std::size_t>(j)];
    }
    for (const auto& text : options.fix_exponents) {
        const auto [slot, value] = parse_assignment(text, options.order, "--fix-exponent");
        problem.fixed_exponents[static_cast<std::size_t>(slot - 1)] = value;
    }
    for (const auto& text : options.fix_components) {
        const auto [slot, value] = parse_assignment(text, options.order, "--fix-component");
        problem.fixed_components[static_cast<std::size_t>(slot - 1)] = value;
    }

    const FitResult result =
        problem.free_exponent_count() > 0 ? fit_exponents(problem) : fit_evector(problem);

    out << "exponents:";
    for (double v : result.exponents) out << ' ' << format_number(v, precision);
    out << "\ncomponents:";
    for (double v : result.components) out << ' ' << format_number(v, precision);
    out << "\nrms_per_copy: " << format_number(result.rms_per_copy, precision) << "\n";
    print_constraints(result.feasibility, out, precision);

    if (!options.out_path.empty()) {
        if (!result.model)
            throw validation_error(
                "fit: fitted components are not a valid e-vector, nothing to save");
        save_model(ModelFile::from_exponents(base, result.exponents, result.components,
                                             {"fitted from " + options.data_path}),
                   options.out_path);
        out << "saved " << options.out_path << "\n";
    }
    return 0;
}

int run_reproduce(const std::string& outdir, const std::string& which, int precision,
                  std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec)
        throw validation_error("reproduce: cannot create output directory '" + outdir +
                               "': " + ec.message());

    bool matched = false;
    for (const auto& input : kOsdInputs) {
        if (which != "all" && which != input.name) continue;
        matched = true;

        const OsdModelSpec spec(input.a, input.e2, input.e3);
        const ScalingModel model = build_osd_model(spec);
        for (const auto& w : model.warnings) err << "warning: " << input.name << ": " << w << "\n";

        const std::string table_path = outdir + "/osd_" + input.name + ".csv";
        {
            std::ofstream file(table_path);
            if (!file) throw validation_error("reproduce: cannot write '" + table_path + "'");
            file << emit_figure_data(model, nullptr, 1, input.n_max, precision);
        }
        const std::string model_path = outdir + "/osd_" + input.name + ".json";
        save_model(ModelFile::from_exponents(input.a, {1.0, 0.5, 0.0},
                                             {0.0, input.e2, input.e3},
                                             {"one-shot-distillable entanglement inputs, "
                                              "isotropic states, " +
                                              std::string(input.name)}),
                   model_path);

        const AsymptoteReport report = asymptote(model);
        out << input.name << ": model " << model_path << ", table " << table_path << " (N = 1.."
            << input.n_max << "), asymptote " << format_number(*report.value, precision) << "\n";
    }
    if (!matched)
        throw validation_error("reproduce: --which must be one of d2, d3, d4, all");
    return 0;
}

int run_verify(const std::string& model_path, int n_max, std::ostream& out) {
    const ScalingModel model = load_model(model_path).to_model();
    Rational worst = 0;
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const ConsistencyResult result = scalability_consistency_check(model, n, k);
            const Rational magnitude = abs(result.max_residual);
            if (magnitude > worst) worst = magnitude;
            if (!result.holds) {
                out << "composition identity FAILS at n=" << n << ", k=" << k << " (residual "
                    << result.max_residual << ")\n";
                return 1;
            }
        }
    }
    out << "composition identity holds exactly for all 0 <= k <= n <= " << n_max
        << " (max residual " << worst << ")\n";
    return 0;
}

} // namespace

int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"q-additive scaling toolkit for quantum resource quantifiers"};
    app.require_subcommand(1);

    int precision = 6;
    app.add_option("--precision", precision, "significant digits for printed numbers")
        ->envname("QADD_PRECISION")
        ->check(CLI::Range(1, 17));

    std::string model_path;
    double eval_n = 1.0;
    std::int64_t oracle_n = 1;
    bool per_copy = false;
    bool exact = false;

    CLI::App* eval = app.add_subcommand("eval", "evaluate the closed form at N copies");
    eval->fallthrough();
    eval->add_option("--model", model_path, "model JSON file")->required();
    eval->add_option("--n", eval_n, "copy number N >= 1 (off-lattice values allowed)")
        ->required();
    eval->add_flag("--per-copy", per_copy, "print E/N instead of the total");

    CLI::App* oracle =
        app.add_subcommand("oracle", "exact recurrence evaluation at a lattice point");
    oracle->fallthrough();
    oracle->add_option("--model", model_path, "model JSON file")->required();
    oracle->add_option("--n", oracle_n, "copy number, must be a power of the base")->required();
    oracle->add_flag("--per-copy", per_copy, "print E/N instead of the total");
    oracle->add_flag("--exact", exact, "print the exact rational instead of a decimal");

    CLI::App* asymptote_cmd =
        app.add_subcommand("asymptote", "classify the per-copy limit of E^(N)/N");
    asymptote_cmd->fallthrough();
    asymptote_cmd->add_option("--model", model_path, "model JSON file")->required();

    CLI::App* check = app.add_subcommand("check", "run the feasibility constraints on a model");
    check->fallthrough();
    check->add_option("--model", model_path, "model JSON file")->required();

    FitOptions fit_options;
    CLI::App* fit = app.add_subcommand("fit", "estimate model parameters from a dataset");
    fit->fallthrough();
    fit->add_option("--data", fit_options.data_path, "dataset CSV file")->required();
    fit->add_option("--order", fit_options.order, "number of e-components (q)")
        ->required()
        ->check(CLI::Range(1, 8));
    fit->add_option("--base", fit_options.base,
                    "copy lattice base a (default: '# a = ...' from the dataset)");
    CLI::Option* exp_all =
        fit->add_option("--exponents", fit_options.exponents,
                        "fix all exponents, comma separated (e.g. 1,0.5,0)")
            ->delimiter(',');
    fit->add_option("--fix-exponent", fit_options.fix_exponents,
                    "fix one exponent slot, e.g. --fix-exponent 1=1.0 (repeatable)")
        ->excludes(exp_all);
    fit->add_option("--fix-component", fit_options.fix_components,
                    "fix one e-component, e.g. --fix-component 1=0 (repeatable)");
    fit->add_option("--lo", fit_options.lo, "exponent search lower bound (default 0)");
    fit->add_option("--hi", fit_options.hi, "exponent search upper bound (default 1.5)");
    fit->add_flag("--total", fit_options.total,
                  "minimize total-value residuals instead of per-copy");
    fit->add_flag("--allow-negative", fit_options.allow_negative,
                  "skip the non-negativity projection of fitted components");
    fit->add_option("--out", fit_options.out_path, "save the fitted model as JSON");

    std::string outdir = ".";
    std::string which = "all";
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "build the built-in OSD models and emit their figure tables");
    reproduce->fallthrough();
    reproduce->add_option("--outdir", outdir, "directory for the emitted files (default .)");
    reproduce->add_option("--which", which, "d2, d3, d4, or all (default all)");

    int n_max = 10;
    CLI::App* verify =
        app.add_subcommand("verify", "check the composition identity with the exact oracle");
    verify->fallthrough();
    verify->add_option("--model", model_path, "model JSON file")->required();
    verify->add_option("--nmax", n_max, "largest lattice exponent checked (default 10)")
        ->check(CLI::Range(0, 64));

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (*eval) return run_eval(model_path, eval_n, per_copy, precision, out);
        if (*oracle) return run_oracle(model_path, oracle_n, per_copy, exact, precision, out);
        if (*asymptote_cmd) return run_asymptote(model_path, precision, out);
        if (*check) return run_check(model_path, precision, out);
        if (*fit) return run_fit(fit_options, precision, out, err);
        if (*reproduce) return run_reproduce(outdir, which, precision, out, err);
        if (*verify) return run_verify(model_path, n_max, out);
        err << "error: no subcommand selected\n" << app.help();
        return 2;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qadd
