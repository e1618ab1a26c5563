#include "fockspec/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace fockspec {

namespace {

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Record {
    TrigPoly::Freq k;
    double cos_coeff, sin_coeff;
};

std::optional<Record> parse_record(const std::string& line, int nu) {
    std::istringstream is(line);
    Record rec;
    rec.k.resize(nu);
    for (int d = 0; d < nu; ++d)
        if (!(is >> rec.k[d])) return std::nullopt;
    if (!(is >> rec.cos_coeff >> rec.sin_coeff)) return std::nullopt;
    std::string rest;
    if (is >> rest) return std::nullopt;
    return rec;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_poly(std::ostream& out, const TrigPoly& f, const std::string& prefix) {
    if (f.terms().empty()) return;
    for (const auto& [k, ab] : f.terms()) {
        out << prefix;
        for (int c : k) out << c << ' ';
        out << ' ' << fmt(ab.first) << ' ' << fmt(ab.second) << '\n';
    }
}

}  // namespace

ModelSpec parse_model(std::istream& in) {
    std::string line, section;
    int nu = 0;
    bool have_nu = false, have_w0 = false;
    double w0 = 0.0;
    TrigPoly w1(1), v0(1), v1(1);
    bool w1_init = false;

    std::vector<std::pair<TrigPoly, TrigPoly>> w2_terms;
    bool in_q_part = false;
    std::vector<TrigPoly> v2_factors;
    bool seen_w2 = false, seen_v2 = false;

    auto poly_for_section = [&](const std::string& sec) -> TrigPoly* {
        if (sec == "w1") return &w1;
        if (sec == "v0") return &v0;
        if (sec == "v1") return &v1;
        return nullptr;
    };
    auto require_nu = [&](const std::string& sec) {
        if (!have_nu)
            throw ModelParseError("model file: section [" + sec + "] appears before [dims]");
    };

    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;

        if (t.front() == '[') {
            if (t.back() != ']')
                throw ModelParseError("model file: malformed section header '" + t + "' at line " +
                                      std::to_string(lineno));
            section = t.substr(1, t.size() - 2);
            if (section != "dims" && section != "w0" && section != "w1" && section != "v0" &&
                section != "v1" && section != "w2" && section != "v2")
                throw ModelParseError("model file: unknown section [" + section + "]");
            if (section != "dims" && section != "w0") require_nu(section);
            if (section == "w1" || section == "v0" || section == "v1")
                *poly_for_section(section) = TrigPoly(nu);
            if (section == "w1") w1_init = true;
            if (section == "w2") seen_w2 = true;
            if (section == "v2") seen_v2 = true;
            continue;
        }

        if (section == "dims") {
            std::istringstream is(t);
            std::string key, eq;
            if (!(is >> key >> eq >> nu) || key != "nu" || eq != "=" || nu < 1)
                throw ModelParseError("model file: section [dims] expects 'nu = <positive int>'");
            have_nu = true;
        } else if (section == "w0") {
            std::istringstream is(t);
            std::string key, eq;
            if (!(is >> key >> eq >> w0) || key != "value" || eq != "=")
                throw ModelParseError("model file: section [w0] expects 'value = <float>'");
            have_w0 = true;
        } else if (section == "w1" || section == "v0" || section == "v1") {
            auto rec = parse_record(t, nu);
            if (!rec)
                throw ModelParseError("model file: bad record in section [" + section +
                                      "] at line " + std::to_string(lineno));
            poly_for_section(section)->add_term(rec->k, rec->cos_coeff, rec->sin_coeff);
        } else if (section == "w2") {
            if (t == "term") {
                w2_terms.emplace_back(TrigPoly(nu), TrigPoly(nu));
                in_q_part = false;
            } else {
                if (w2_terms.empty())
                    throw ModelParseError("model file: record before 'term' in section [w2]");
                if (t.size() < 2 || (t[0] != 'p' && t[0] != 'q'))
                    throw ModelParseError("model file: section [w2] records start with 'p' or 'q'"
                                          " (line " + std::to_string(lineno) + ")");
                bool q_part = t[0] == 'q';
                if (!q_part && in_q_part)
                    throw ModelParseError("model file: 'p' record after 'q' records in one [w2] "
                                          "term (line " + std::to_string(lineno) + ")");
                in_q_part = q_part;
                auto rec = parse_record(t.substr(1), nu);
                if (!rec)
                    throw ModelParseError("model file: bad record in section [w2] at line " +
                                          std::to_string(lineno));
                (q_part ? w2_terms.back().second : w2_terms.back().first)
                    .add_term(rec->k, rec->cos_coeff, rec->sin_coeff);
            }
        } else if (section == "v2") {
            if (t == "factor") {
                v2_factors.emplace_back(nu);
            } else {
                if (v2_factors.empty())
                    throw ModelParseError("model file: record before 'factor' in section [v2]");
                auto rec = parse_record(t, nu);
                if (!rec)
                    throw ModelParseError("model file: bad record in section [v2] at line " +
                                          std::to_string(lineno));
                v2_factors.back().add_term(rec->k, rec->cos_coeff, rec->sin_coeff);
            }
        } else {
            throw ModelParseError("model file: content outside any section at line " +
                                  std::to_string(lineno));
        }
    }

    if (!have_nu) throw ModelParseError("model file: missing section [dims]");
    if (!have_w0) throw ModelParseError("model file: missing section [w0]");
    if (!w1_init) throw ModelParseError("model file: missing section [w1]");
    if (!seen_w2 || w2_terms.empty()) throw ModelParseError("model file: missing section [w2]");
    if (!seen_v2) throw ModelParseError("model file: missing section [v2]");

    ModelSpec spec;
    spec.nu = nu;
    spec.w0 = w0;
    spec.w1 = std::move(w1);
    spec.v0 = v0.nu() == nu ? std::move(v0) : TrigPoly(nu);
    spec.v1 = v1.nu() == nu ? std::move(v1) : TrigPoly(nu);
    spec.w2 = SeparableKernel::from_pairs(std::move(w2_terms));
    spec.v2 = v2_factors.empty() ? SeparableKernel::zero(nu)
                                 : SeparableKernel::from_factors(std::move(v2_factors));
    return spec;
}

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelParseError("cannot open model file: " + path);
    return parse_model(in);
}

void write_model(const ModelSpec& spec, std::ostream& out) {
    out << "[dims]\nnu = " << spec.nu << "\n\n";
    out << "[w0]\nvalue = " << fmt(spec.w0) << "\n\n";
    out << "[w1]\n";
    write_poly(out, spec.w1, "");
    out << "\n[v0]\n";
    write_poly(out, spec.v0, "");
    out << "\n[v1]\n";
    write_poly(out, spec.v1, "");
    out << "\n[w2]\n";
    for (const auto& [g, h] : spec.w2.terms()) {
        out << "term\n";
        write_poly(out, g, "p ");
        write_poly(out, h, "q ");
    }
    out << "\n[v2]\n";
    if (spec.v2.has_factor_form()) {
        for (const auto& phi : spec.v2.factors()) {
            out << "factor\n";
            write_poly(out, phi, "");
        }
    } else {
        throw std::invalid_argument("write_model: v2 must be in factor form");
    }
}

void save_model(const ModelSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    write_model(spec, out);
    out.close();
    if (!out) throw std::runtime_error("error writing model file: " + path);
}

}  // namespace fockspec
