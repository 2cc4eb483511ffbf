// Copyright 2026 The qpmme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpmme/analysis.hpp"
#include "qpmme/bohr.hpp"
#include "qpmme/dynamics.hpp"
#include "qpmme/error.hpp"
#include "qpmme/generator.hpp"
#include "qpmme/io.hpp"
#include "qpmme/model.hpp"
#include "qpmme/reference.hpp"

using namespace qpmme;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string model_path;
    std::optional<int> trunc;
    std::map<std::string, double> tol_flags;
    std::string grid = "0:20:201";
    std::string rho0 = "generic";
    std::string out_dir;
    std::string reference_name;
};

// Tolerance fields addressable as --tol-<name> and QPMME_TOL_<NAME>.
const std::vector<std::string> kTolNames = {"hermiticity", "unitarity",       "rational_K", "rational",
                                            "congruence_K", "congruence",     "cluster",    "truncation_loss",
                                            "jump_drop",   "psd",             "spectral",   "integrator",
                                            "condition_max"};

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaVersionMismatch:
    case ErrorCode::Unsupported:
    case ErrorCode::OrderViolation:
        return kExitUsage;
    case ErrorCode::NoConvergence:
    case ErrorCode::Overflow:
    case ErrorCode::Defective:
    case ErrorCode::InsufficientDecay:
    case ErrorCode::UnknownFrequency:
        return kExitNumerical;
    default:
        return kExitFail;
    }
}

std::string env_name(const std::string& tol) {
    std::string s = "QPMME_TOL_";
    for (char c : tol) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

io::Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return io::Json::parse(ss.str());
    } catch (const io::Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

ReducedModel load(const Options& opt) {
    io::Json j;
    if (opt.model_path.rfind("ref:", 0) == 0) {
        j = io::model_to_json(reference::by_name(opt.model_path.substr(4)));
    } else {
        std::ifstream in(opt.model_path);
        if (!in) throw Error(ErrorCode::ParseError, "cannot open model file '" + opt.model_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        if (!opt.trunc) return io::parse_model(ss.str());
        j = read_json_file(opt.model_path);
    }
    if (opt.trunc) j["truncation"] = *opt.trunc;
    return io::model_from_json(j);
}

void apply_tolerances(ReducedModel& m, const Options& opt) {
    io::Json overrides = io::Json::object();
    for (const auto& name : kTolNames) {
        if (const char* v = std::getenv(env_name(name).c_str())) {
            try {
                std::size_t used = 0;
                double x = std::stod(v, &used);
                if (used != std::string(v).size()) throw std::invalid_argument(v);
                if (name.ends_with("_K")) overrides[name] = static_cast<int>(x);
                else overrides[name] = x;
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, env_name(name) + " is not a number");
            }
        }
    }
    for (const auto& [name, x] : opt.tol_flags) {
        if (name.ends_with("_K")) overrides[name] = static_cast<int>(x);
        else overrides[name] = x;
    }
    if (overrides.empty()) return;
    // Round-trip through the file schema so overrides get the same checks.
    io::Json j = io::model_to_json(m);
    for (const auto& [k, v] : overrides.items()) j["tolerances"][k] = v;
    m = io::model_from_json(j);
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' || !ss.eof()) {
        throw Error(ErrorCode::ParseError, "--grid expects start:stop:count, got '" + spec + "'");
    }
    if (start < 0.0 || count < 1 || (count > 1 && !(stop > start))) {
        throw Error(ErrorCode::OrderViolation, "grid must be increasing with start >= 0");
    }
    return dynamics::uniform_grid(start, stop, count);
}

CMatrix parse_rho0(const std::string& spec, int d) {
    CMatrix rho = CMatrix::Zero(d, d);
    if (spec == "ground") {
        rho(0, 0) = 1.0;
    } else if (spec == "excited") {
        rho(d - 1, d - 1) = 1.0;
    } else if (spec == "mixed") {
        rho = CMatrix::Identity(d, d) / static_cast<double>(d);
    } else if (spec == "plus") {
        rho.setConstant(1.0 / d);
    } else if (spec == "generic") {
        // Full-rank state with coherences in every entry.
        CVector v(d);
        for (int k = 0; k < d; ++k) v(k) = Complex(1.0 + 0.3 * k, 0.2 * (k % 2 ? -1 : 1) * (k + 1));
        v.normalize();
        rho = 0.7 * v * v.adjoint() + 0.3 * CMatrix::Identity(d, d) / static_cast<double>(d);
    } else {
        io::Json j = read_json_file(spec);
        rho = io::matrix_from_json(j.is_object() && j.contains("rho") ? j.at("rho") : j, "rho0");
        if (rho.rows() != d || rho.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "rho0 has dimension " + std::to_string(rho.rows()) +
                                                          ", model has " + std::to_string(d));
        }
        if (linalg::hermiticity_residual(rho) > 1e-9) throw Error(ErrorCode::NotHermitian, "rho0 is not Hermitian");
    }
    return rho;
}

void emit(const Options& opt, const std::string& file, const std::string& text) {
    if (opt.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(opt.out_dir);
    const auto path = std::filesystem::path(opt.out_dir) / file;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path.string() + "'");
    out << text;
}

void emit_json(const Options& opt, const std::string& file, const io::Json& j) { emit(opt, file, io::dump(j) + "\n"); }

struct Built {
    BohrDecomposition decomp;
    GeneratorBundle bundle;
};

Built build(const ReducedModel& m) {
    ValidationReport report = model::validate_model(m);
    if (!report.pass(m.tol)) {
        throw Error(ErrorCode::CongruenceViolation,
                    "model fails validation; run 'validate' for the full report");
    }
    Built b{bohr::decompose_model(m), {}};
    b.bundle = generator::build_generator(m, b.decomp);
    return b;
}

int run_validate(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    ValidationReport r = model::validate_model(m);
    emit_json(opt, "validation.json", io::validation_to_json(r, m.tol));
    return r.pass(m.tol) ? kExitPass : kExitFail;
}

int run_synthesize(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    double tail = 0.0;
    FourierOperatorSeries h = model::synthesize_hamiltonian(m.p_series, m.omega, m.H_bar, m.tol, &tail);
    io::Json j;
    j["frequencies"] = m.omega.values();
    j["hamiltonian"] = io::to_json(h);
    j["dropped_tail"] = tail;
    emit_json(opt, "hamiltonian.json", j);
    return kExitPass;
}

int run_build(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    Built b = build(m);
    io::Json j;
    j["decomposition"] = io::decomposition_to_json(b.decomp);
    j["generator"] = io::bundle_to_json(b.bundle);
    j["diagnostics"] = io::Json{
        {"covariance_defect", generator::check_covariance(b.bundle.dissipative_part(), m.H_bar)},
        {"lamb_shift_commutator", linalg::operator_norm(b.bundle.delta_H * m.H_bar - m.H_bar * b.bundle.delta_H)},
        {"selection_rule_deviation", generator::cross_check_selection_rule(b.bundle.blocks, m.dim(), m.tol.cluster)},
        {"trace_annihilation_defect", generator::trace_annihilation_defect(b.bundle.X)}};
    emit_json(opt, "generator.json", j);
    return kExitPass;
}

int run_evolve(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    Built b = build(m);
    DynamicalMap map(m, b.bundle);
    const auto grid = parse_grid(opt.grid);
    const CMatrix rho0 = parse_rho0(opt.rho0, m.dim());
    const auto product = dynamics::product_form_trajectory(map, rho0, grid);
    const Trajectory direct = dynamics::integrate_mme_direct(map, rho0, grid, m.tol.integrator);
    std::ostringstream csv;
    io::write_trajectory_csv(csv, grid, product, direct.states);
    emit(opt, "trajectory.csv", csv.str());
    if (!opt.out_dir.empty()) {
        double max_distance = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            max_distance = std::max(max_distance, linalg::trace_norm(product[i] - direct.states[i]));
        }
        emit_json(opt, "evolve.json",
                  io::Json{{"max_distance", max_distance},
                           {"substeps", direct.substeps},
                           {"refinement_gap", direct.refinement_gap}});
    }
    return kExitPass;
}

int run_spectrum(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    Built b = build(m);
    StabilityReport r = analysis::spectrum_classification(b.bundle.X, m.tol.spectral, 1e-10, 1e-10, m.tol.condition_max);
    io::Json j = io::stability_to_json(r);
    auto invariant = analysis::find_psd_invariant(b.bundle.X, m.tol.spectral, m.tol.psd);
    j["psd_invariant"] = invariant ? io::to_json(*invariant) : io::Json();
    emit_json(opt, "spectrum.json", j);
    return kExitPass;
}

int run_steady_state(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    Built b = build(m);
    DynamicalMap map(m, b.bundle);
    const auto grid = parse_grid(opt.grid);
    const CMatrix rho0 = parse_rho0(opt.rho0, m.dim());
    StabilityReport r = analysis::spectrum_classification(b.bundle.X, m.tol.spectral, 1e-10, 1e-10, m.tol.condition_max);
    LimitCycle cycle = analysis::limit_cycle(map, rho0, m.tol.spectral, m.tol.condition_max);
    io::Json j;
    j["stability"] = io::stability_to_json(r);
    j["limit_cycle"] = io::limit_cycle_to_json(cycle, grid);
    try {
        j["decay_fit"] = io::decay_fit_to_json(analysis::decay_rate_fit(map, cycle, rho0, grid));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientDecay) throw;
        j["decay_fit"] = io::error_to_json(std::string(to_string(e.code())), e.what());
    }
    emit_json(opt, "steady_state.json", j);
    return kExitPass;
}

int run_certify(const Options& opt) {
    ReducedModel m = load(opt);
    apply_tolerances(m, opt);
    Built b = build(m);
    DynamicalMap map(m, b.bundle);
    CptpReport r = analysis::cptp_certificate(map, parse_grid(opt.grid));
    emit_json(opt, "certificate.json", io::cptp_to_json(r));
    return r.pass ? kExitPass : kExitFail;
}

int run_reference(const Options& opt) {
    emit_json(opt, opt.reference_name + ".json", io::model_to_json(reference::by_name(opt.reference_name)));
    return kExitPass;
}

void print_error(const std::string& code, const std::string& message) {
    std::cerr << io::dump(io::error_to_json(code, message)) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasiperiodic Markovian master equations: validate, build, evolve and analyze reduced models"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_grid, bool needs_rho0) {
        sub->add_option("model", opt.model_path, "Model JSON file, or ref:<name> for a built-in model")->required();
        sub->add_option("--trunc", opt.trunc, "Fourier box truncation N")->check(CLI::NonNegativeNumber);
        for (const auto& name : kTolNames) {
            std::string flag = "--tol-" + name;
            std::replace(flag.begin(), flag.end(), '_', '-');
            sub->add_option_function<double>(
                flag, [&opt, name](double v) { opt.tol_flags[name] = v; },
                "Override tolerance '" + name + "' (env " + env_name(name) + ")");
        }
        sub->add_option("--out", opt.out_dir, "Write artifacts into this directory instead of stdout");
        if (needs_grid) sub->add_option("--grid", opt.grid, "Time grid start:stop:count")->capture_default_str();
        if (needs_rho0) {
            sub->add_option("--rho0", opt.rho0, "Initial state: ground, excited, mixed, plus, generic or a JSON file")
                ->capture_default_str();
        }
    };

    std::map<CLI::App*, int (*)(const Options&)> handlers;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&), bool grid, bool rho0) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, grid, rho0);
        handlers[sub] = fn;
    };
    add("validate", "Check the model assumptions (exit 1 on failure)", run_validate, false, false);
    add("synthesize", "Reconstruct the Hamiltonian series H_t", run_synthesize, false, false);
    add("build", "Bohr decomposition and generator X", run_build, false, false);
    add("evolve", "Trajectory CSV from the product form and a direct integrator", run_evolve, true, true);
    add("spectrum", "Spectrum of X and its classification", run_spectrum, false, false);
    add("steady-state", "Limit cycle and asymptotic decay fit", run_steady_state, true, true);
    add("certify", "CPTP certificate of maps and propagators on the grid (exit 1 on failure)", run_certify, true,
        false);
    CLI::App* ref = app.add_subcommand("reference", "Print a built-in reference model as JSON");
    std::string names;
    for (const auto& n : reference::names()) names += (names.empty() ? "" : ", ") + n;
    ref->add_option("name", opt.reference_name, "One of: " + names)->required();
    ref->add_option("--out", opt.out_dir, "Write the model into this directory");
    handlers[ref] = run_reference;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return kExitUsage;
    }

    for (const auto& [sub, fn] : handlers) {
        if (!sub->parsed()) continue;
        try {
            return fn(opt);
        } catch (const Error& e) {
            print_error(std::string(to_string(e.code())), e.what());
            return exit_code_for(e.code());
        } catch (const std::exception& e) {
            print_error("InternalError", e.what());
            return kExitNumerical;
        }
    }
    return kExitUsage;
}
