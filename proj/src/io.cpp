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


#include "qpmme/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qpmme/error.hpp"

namespace qpmme::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) field_error(ctx.empty() ? key : ctx + "." + key, "missing");
    return j.at(key);
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) field_error(field, "expected a number");
    return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) field_error(field, "expected an integer");
    return j.get<int>();
}

Complex complex_from_json(const Json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        field_error(field, "expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

MultiIndex index_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) field_error(field, "expected an integer array");
    std::vector<int> n;
    for (std::size_t i = 0; i < j.size(); ++i) n.push_back(integer(j[i], field + "[" + std::to_string(i) + "]"));
    return MultiIndex(std::move(n));
}

Json tolerances_to_json(const Tolerances& t) {
    Json j;
    j["hermiticity"] = t.hermiticity;
    j["unitarity"] = t.unitarity;
    j["rational_K"] = t.rational_K;
    j["rational"] = t.rational;
    j["congruence_K"] = t.congruence_K;
    j["congruence"] = t.congruence;
    j["cluster"] = t.cluster;
    j["truncation_loss"] = t.truncation_loss;
    j["jump_drop"] = t.jump_drop;
    j["psd"] = t.psd;
    j["spectral"] = t.spectral;
    j["integrator"] = t.integrator;
    j["condition_max"] = t.condition_max;
    return j;
}

void tolerances_from_json(const Json& j, Tolerances& t) {
    if (!j.is_object()) field_error("tolerances", "expected an object");
    auto real = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = number(j.at(key), std::string("tolerances.") + key);
    };
    auto whole = [&](const char* key, int& dst) {
        if (j.contains(key)) dst = integer(j.at(key), std::string("tolerances.") + key);
    };
    real("hermiticity", t.hermiticity);
    real("unitarity", t.unitarity);
    whole("rational_K", t.rational_K);
    real("rational", t.rational);
    whole("congruence_K", t.congruence_K);
    real("congruence", t.congruence);
    real("cluster", t.cluster);
    real("truncation_loss", t.truncation_loss);
    real("jump_drop", t.jump_drop);
    real("psd", t.psd);
    real("spectral", t.spectral);
    real("integrator", t.integrator);
    real("condition_max", t.condition_max);
}

Json bath_to_json(const BathSpectrum& b) {
    Json j;
    j["family"] = bath::family_name(b.family);
    switch (b.family) {
    case BathFamily::Flat:
        j["gamma"] = b.gamma;
        break;
    case BathFamily::OhmicKms:
        j["kappa"] = b.kappa;
        j["cutoff"] = b.cutoff;
        j["beta"] = b.beta;
        break;
    case BathFamily::Custom:
        throw Error(ErrorCode::Unsupported, "custom bath callbacks cannot be serialized");
    }
    Json z;
    switch (b.zeta_mode) {
    case ZetaMode::Zero: z["mode"] = "zero"; break;
    case ZetaMode::Constant:
        z["mode"] = "constant";
        z["value"] = b.zeta_constant;
        break;
    case ZetaMode::PrincipalValue:
        z["mode"] = "principal_value";
        z["half_width"] = b.pv_half_width;
        break;
    case ZetaMode::Custom:
        throw Error(ErrorCode::Unsupported, "custom zeta callbacks cannot be serialized");
    }
    j["zeta"] = z;
    return j;
}

BathSpectrum bath_from_json(const Json& j, int channels) {
    if (!j.is_object()) field_error("bath", "expected an object");
    const Json& fam = require(j, "family", "bath");
    if (!fam.is_string()) field_error("bath.family", "expected a string");
    const std::string family = fam.get<std::string>();
    BathSpectrum b;
    if (family == "flat") {
        b = BathSpectrum::flat(channels, number(require(j, "gamma", "bath"), "bath.gamma"));
    } else if (family == "ohmic_kms") {
        b = BathSpectrum::ohmic_kms(channels, number(require(j, "kappa", "bath"), "bath.kappa"),
                                    number(require(j, "cutoff", "bath"), "bath.cutoff"),
                                    number(require(j, "beta", "bath"), "bath.beta"));
    } else {
        field_error("bath.family", "unknown family '" + family + "'");
    }
    if (j.contains("zeta")) {
        const Json& z = j.at("zeta");
        const std::string mode = require(z, "mode", "bath.zeta").get<std::string>();
        if (mode == "zero") {
            b.zeta_mode = ZetaMode::Zero;
        } else if (mode == "constant") {
            b.zeta_mode = ZetaMode::Constant;
            b.zeta_constant = number(require(z, "value", "bath.zeta"), "bath.zeta.value");
        } else if (mode == "principal_value") {
            b.zeta_mode = ZetaMode::PrincipalValue;
            if (z.contains("half_width")) b.pv_half_width = number(z.at("half_width"), "bath.zeta.half_width");
        } else {
            field_error("bath.zeta.mode", "unknown mode '" + mode + "'");
        }
    }
    return b;
}

void append_double(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    if (v == 0.0) v = 0.0; // "-0" would read back as the integer 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void dump_into(std::string& out, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            dump_into(out, it.value(), depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        out += "[";
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat ? ", " : ",";
            first = false;
            if (!flat) out += "\n" + pad;
            dump_into(out, e, depth + 1);
        }
        out += flat ? "]" : "\n" + close_pad + "]";
        return;
    }
    case Json::value_t::number_float:
        append_double(out, j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const MultiIndex& n) { return Json(n.n); }

Json to_json(const FourierOperatorSeries& s) {
    Json j;
    j["r"] = s.r();
    j["dim"] = s.dim();
    j["truncation"] = s.trunc();
    Json coeffs = Json::array();
    for (const auto& [n, c] : s.coeffs()) {
        Json e;
        e["n"] = to_json(n);
        e["value"] = to_json(c);
        coeffs.push_back(e);
    }
    j["coefficients"] = coeffs;
    return j;
}

CMatrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) field_error(field + "[0]", "expected a row array");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rf = field + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) field_error(rf, "ragged matrix row");
        for (Eigen::Index k = 0; k < cols; ++k) {
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], rf + "[" + std::to_string(k) + "]");
        }
    }
    if (!linalg::all_finite(m)) field_error(field, "non-finite entry");
    return m;
}

ReducedModel model_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "model file must be a JSON object");
    const Json& version = require(j, "schema_version", "");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
        throw Error(ErrorCode::SchemaVersionMismatch,
                    "expected schema_version " + std::to_string(kSchemaVersion) + ", got " + version.dump());
    }
    ReducedModel m;
    const Json& freqs = require(j, "frequencies", "");
    if (!freqs.is_array() || freqs.empty()) field_error("frequencies", "expected a non-empty array");
    std::vector<double> omegas;
    for (std::size_t i = 0; i < freqs.size(); ++i) omegas.push_back(number(freqs[i], "frequencies[" + std::to_string(i) + "]"));
    try {
        m.omega = FrequencyVector(omegas);
    } catch (const Error& e) {
        field_error("frequencies", e.what());
    }
    const int r = m.omega.size();
    int trunc = fourier::kDefaultTrunc;
    if (j.contains("truncation")) trunc = integer(j.at("truncation"), "truncation");
    if (trunc < 0) field_error("truncation", "must be >= 0");

    m.H_bar = matrix_from_json(require(j, "H_bar", ""), "H_bar");
    if (m.H_bar.rows() != m.H_bar.cols()) field_error("H_bar", "must be square");
    const int d = m.dim();

    const Json& couplings = require(j, "couplings", "");
    if (!couplings.is_array() || couplings.empty()) field_error("couplings", "expected a non-empty array");
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const std::string f = "couplings[" + std::to_string(i) + "]";
        CMatrix s = matrix_from_json(couplings[i], f);
        if (s.rows() != d || s.cols() != d) field_error(f, "dimension differs from H_bar");
        m.couplings.push_back(std::move(s));
    }

    if (j.contains("p_series") && j.contains("p_generator")) {
        field_error("p_series", "give either p_series or p_generator, not both");
    }
    if (j.contains("p_series")) {
        const Json& ps = j.at("p_series");
        const Json& coeffs = require(ps, "coefficients", "p_series");
        if (!coeffs.is_array()) field_error("p_series.coefficients", "expected an array");
        FourierOperatorSeries p(r, d, trunc);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const std::string f = "p_series.coefficients[" + std::to_string(i) + "]";
            MultiIndex n = index_from_json(require(coeffs[i], "n", f), f + ".n");
            CMatrix c = matrix_from_json(require(coeffs[i], "value", f), f + ".value");
            if (n.size() != r || !p.in_box(n)) field_error(f + ".n", "index length or range incompatible with frequencies/truncation");
            if (c.rows() != d || c.cols() != d) field_error(f + ".value", "dimension differs from H_bar");
            p.set(n, c);
        }
        m.p_series = std::move(p);
    } else if (j.contains("p_generator")) {
        const Json& gen = j.at("p_generator");
        if (!gen.is_array()) field_error("p_generator", "expected an array of terms");
        std::vector<GeneratorTerm> terms;
        for (std::size_t i = 0; i < gen.size(); ++i) {
            const std::string f = "p_generator[" + std::to_string(i) + "]";
            GeneratorTerm term;
            term.generator = matrix_from_json(require(gen[i], "generator", f), f + ".generator");
            const Json& modes = require(gen[i], "modes", f);
            if (!modes.is_array()) field_error(f + ".modes", "expected an array");
            for (std::size_t k = 0; k < modes.size(); ++k) {
                const std::string mf = f + ".modes[" + std::to_string(k) + "]";
                GeneratorMode mode;
                mode.n = index_from_json(require(modes[k], "n", mf), mf + ".n");
                if (mode.n.size() != r) field_error(mf + ".n", "index length differs from frequencies");
                if (modes[k].contains("sin")) mode.sin_amplitude = number(modes[k].at("sin"), mf + ".sin");
                if (modes[k].contains("cos")) mode.cos_amplitude = number(modes[k].at("cos"), mf + ".cos");
                term.modes.push_back(std::move(mode));
            }
            terms.push_back(std::move(term));
        }
        m.p_series = model::p_from_generator(terms, r, d, trunc).series;
    } else {
        m.p_series = FourierOperatorSeries::constant(r, trunc, CMatrix::Identity(d, d));
    }

    m.bath = bath_from_json(require(j, "bath", ""), static_cast<int>(m.couplings.size()));
    if (j.contains("tolerances")) tolerances_from_json(j.at("tolerances"), m.tol);
    return m;
}

Json model_to_json(const ReducedModel& m) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["frequencies"] = m.omega.values();
    j["truncation"] = m.trunc();
    j["H_bar"] = to_json(m.H_bar);
    Json couplings = Json::array();
    for (const auto& s : m.couplings) couplings.push_back(to_json(s));
    j["couplings"] = couplings;
    Json coeffs = Json::array();
    for (const auto& [n, c] : m.p_series.coeffs()) {
        Json e;
        e["n"] = to_json(n);
        e["value"] = to_json(c);
        coeffs.push_back(e);
    }
    j["p_series"] = Json{{"coefficients", coeffs}};
    j["bath"] = bath_to_json(m.bath);
    j["tolerances"] = tolerances_to_json(m.tol);
    return j;
}

ReducedModel parse_model(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + e.what());
    }
    return model_from_json(j);
}

ReducedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

void save_model(const ReducedModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write model file '" + path + "'");
    out << dump(model_to_json(m)) << "\n";
}

Json validation_to_json(const ValidationReport& r, const Tolerances& tol) {
    Json j;
    j["pass"] = r.pass(tol);
    Json rat;
    rat["pass"] = r.rational_ok();
    rat["witness"] = r.rational_witness ? to_json(*r.rational_witness) : Json();
    rat["K"] = tol.rational_K;
    rat["tol"] = tol.rational;
    j["rational_independence"] = rat;
    Json uni;
    uni["pass"] = r.unitarity_ok(tol);
    uni["p0_residual"] = r.p0_residual;
    uni["grid_residual"] = r.unitarity_residual;
    uni["tol"] = tol.unitarity;
    j["unitarity"] = uni;
    Json herm;
    herm["pass"] = r.hermiticity_ok(tol);
    herm["residual"] = r.hbar_hermiticity_residual;
    herm["tol"] = tol.hermiticity;
    j["hbar_hermiticity"] = herm;
    Json cong;
    cong["pass"] = r.congruence_ok();
    cong["checked"] = r.congruence_checked;
    if (r.congruence_witness) {
        cong["witness"] = Json{{"omega", r.congruence_witness->omega},
                               {"omega_prime", r.congruence_witness->omega_prime},
                               {"n", to_json(r.congruence_witness->n)}};
    } else {
        cong["witness"] = Json();
    }
    cong["bohr_freqs"] = r.bohr_freqs;
    cong["K"] = tol.congruence_K;
    cong["tol"] = tol.congruence;
    j["congruence_freedom"] = cong;
    return j;
}

Json decomposition_to_json(const BohrDecomposition& d) {
    Json j;
    j["quasienergies"] = d.quasienergies;
    Json projections = Json::array();
    for (const auto& p : d.projections) projections.push_back(to_json(p));
    j["projections"] = projections;
    j["bohr_freqs"] = d.bohr_freqs;
    Json jumps = Json::array();
    for (const auto& op : d.jump_ops) {
        Json e;
        e["mu"] = op.mu;
        e["n"] = to_json(op.n);
        e["omega"] = op.omega;
        e["operator"] = to_json(op.op);
        jumps.push_back(e);
    }
    j["jump_operators"] = jumps;
    return j;
}

Json bundle_to_json(const GeneratorBundle& g) {
    Json j;
    j["delta_H"] = to_json(g.delta_H);
    Json blocks = Json::array();
    for (const auto& b : g.blocks) {
        Json e;
        e["n"] = to_json(b.n);
        e["omega"] = b.omega;
        e["shifted_frequency"] = b.shifted;
        e["kossakowski"] = to_json(b.h);
        e["lamb"] = to_json(b.zeta);
        blocks.push_back(e);
    }
    j["kossakowski_blocks"] = blocks;
    j["X"] = to_json(g.X.matrix);
    return j;
}

Json stability_to_json(const StabilityReport& r) {
    Json j;
    Json spectrum = Json::array();
    for (std::size_t i = 0; i < r.spectrum.size(); ++i) {
        const char* cls = r.classes[i] == SpectralClass::Zero ? "zero" : r.classes[i] == SpectralClass::M1 ? "M1" : "M2";
        spectrum.push_back(Json{{"value", to_json(r.spectrum[i])}, {"class", cls}});
    }
    j["spectrum"] = spectrum;
    j["k0"] = r.k0;
    j["m1_count"] = r.m1_count;
    j["m2_count"] = r.m2_count;
    j["diagonalizable"] = r.diagonalizable;
    j["condition_number"] = r.condition_number;
    j["quasiperiodic_steady_state"] = r.quasiperiodic_steady_state;
    j["max_real_part"] = r.max_real_part;
    j["zero_distance"] = r.zero_distance;
    j["conjugation_defect"] = r.conjugation_defect;
    j["slowest_decay_rate"] = r.slowest_decay ? Json(*r.slowest_decay) : Json();
    j["fastest_decay_rate"] = r.fastest_decay ? Json(*r.fastest_decay) : Json();
    return j;
}

Json limit_cycle_to_json(const LimitCycle& c, const std::vector<double>& grid) {
    Json j;
    j["quasiperiodic"] = c.quasiperiodic();
    j["condition_number"] = c.condition_number();
    j["decay_amplitude"] = c.decay_amplitude();
    auto rate = c.slowest_present_rate();
    j["slowest_present_rate"] = rate ? Json(*rate) : Json();
    Json comps = Json::array();
    for (const auto& comp : c.retained()) {
        comps.push_back(Json{{"xi", to_json(comp.xi)},
                             {"class", comp.cls == SpectralClass::Zero ? "zero" : "M1"},
                             {"coefficient", to_json(comp.coefficient)},
                             {"phi", to_json(comp.phi)}});
    }
    j["retained_components"] = comps;
    Json samples = Json::array();
    for (double t : grid) samples.push_back(Json{{"t", t}, {"rho", to_json(c.evaluate(t))}});
    j["samples"] = samples;
    return j;
}

Json decay_fit_to_json(const DecayFit& f) {
    Json j;
    j["rate"] = f.rate;
    j["expected_rate"] = f.expected_rate ? Json(*f.expected_rate) : Json();
    j["window_begin"] = f.window_begin;
    j["window_end"] = f.window_end;
    j["points"] = f.points;
    return j;
}

Json cptp_to_json(const CptpReport& r) {
    auto entries = [](const std::vector<CptpEntry>& v) {
        Json a = Json::array();
        for (const auto& e : v) {
            a.push_back(Json{{"t", e.t}, {"s", e.s}, {"choi_min", e.choi_min}, {"trace_defect", e.trace_defect},
                             {"hermiticity_defect", e.hermiticity_defect}, {"pass", e.pass}});
        }
        return a;
    };
    Json j;
    j["pass"] = r.pass;
    j["choi_tol"] = r.choi_tol;
    j["trace_tol"] = r.trace_tol;
    j["hermiticity_tol"] = r.hermiticity_tol;
    j["maps"] = entries(r.maps);
    j["propagators"] = entries(r.propagators);
    return j;
}

Json error_to_json(const std::string& code, const std::string& message) {
    return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

std::string dump(const Json& j) {
    std::string out;
    dump_into(out, j, 0);
    return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& times, const std::vector<CMatrix>& product,
                          const std::vector<CMatrix>& direct) {
    if (product.size() != times.size() || (!direct.empty() && direct.size() != times.size())) {
        throw Error(ErrorCode::DimensionMismatch, "trajectory lengths differ");
    }
    if (times.empty()) return;
    const auto d = product.front().rows();
    auto header_entries = [&](const std::string& prefix) {
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index i = 0; i < d; ++i)
                os << "," << prefix << "re_" << i << k << "," << prefix << "im_" << i << k;
    };
    os << "t";
    header_entries("");
    os << ",trace,min_eig";
    if (!direct.empty()) {
        header_entries("direct_");
        os << ",distance";
    }
    os << "\n";
    std::string line;
    for (std::size_t row = 0; row < times.size(); ++row) {
        line.clear();
        append_double(line, times[row]);
        auto entries = [&](const CMatrix& m) {
            for (Eigen::Index k = 0; k < d; ++k) {
                for (Eigen::Index i = 0; i < d; ++i) {
                    line += ",";
                    append_double(line, m(i, k).real());
                    line += ",";
                    append_double(line, m(i, k).imag());
                }
            }
        };
        entries(product[row]);
        line += ",";
        append_double(line, product[row].trace().real());
        line += ",";
        append_double(line, linalg::min_eigenvalue_hermitian(product[row]));
        if (!direct.empty()) {
            entries(direct[row]);
            line += ",";
            append_double(line, linalg::trace_norm(product[row] - direct[row]));
        }
        os << line << "\n";
    }
}

} // namespace qpmme::io
