#include "wallforge/jsonio.hpp"

#include <cmath>
#include <cstdio>

#include "wallforge/errors.hpp"

namespace wallforge {

std::string fmt17(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

namespace {

std::string window_json(const FitWindow& w) {
    return "{\"x_lo\": " + fmt17(w.x_lo) + ", \"x_hi\": " + fmt17(w.x_hi) +
           ", \"count\": " + std::to_string(w.count) + "}";
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
    std::string out;
    out += "{\n";
    out += "  \"params\": {\"alpha\": " + fmt17(cert.params.alpha) +
           ", \"omega\": " + fmt17(cert.params.omega) + "},\n";
    out += "  \"grid\": {\"R\": " + fmt17(cert.R) + ", \"h\": " + fmt17(cert.h) + "},\n";
    out += "  \"checks\": [\n";
    for (size_t i = 0; i < cert.checks.size(); ++i) {
        const CheckRecord& c = cert.checks[i];
        out += "    {\"name\": \"" + json_escape(c.name) + "\", \"paper_ref\": \"" +
               json_escape(c.paper_ref) + "\", \"measured\": " + fmt17(c.measured) +
               ", \"target\": ";
        if (c.target_lo == c.target_hi)
            out += fmt17(c.target_lo);
        else
            out += "[" + fmt17(c.target_lo) + ", " + fmt17(c.target_hi) + "]";
        out += ", \"tolerance\": " + fmt17(c.tolerance) +
               ", \"pass\": " + (c.pass ? "true" : "false") + "}";
        if (i + 1 < cert.checks.size()) out += ",";
        out += "\n";
    }
    out += "  ],\n";
    out += std::string("  \"overall_pass\": ") + (cert.overall_pass ? "true" : "false") + "\n";
    out += "}\n";
    return out;
}

std::string tail_fit_to_json(const Params& p, const TailFit& fit, double R, double h) {
    std::string out;
    out += "{\n";
    out += "  \"alpha\": " + fmt17(p.alpha) + ",\n";
    out += "  \"omega\": " + fmt17(p.omega) + ",\n";
    out += "  \"R\": " + fmt17(R) + ",\n";
    out += "  \"h\": " + fmt17(h) + ",\n";
    out += "  \"rate_u\": " + fmt17(fit.rate_u) + ",\n";
    out += "  \"rate_v\": " + fmt17(fit.rate_v) + ",\n";
    out += "  \"lambda_minus_theory\": " + fmt17(fit.lambda_minus_theory) + ",\n";
    out += "  \"ell1\": " + fmt17(fit.ell1) + ",\n";
    out += "  \"ell2\": " + fmt17(fit.ell2) + ",\n";
    out += "  \"mu_theory\": " + fmt17(fit.mu_theory) + ",\n";
    out += "  \"window\": " + window_json(fit.window) + ",\n";
    out += "  \"residual_rms\": " + fmt17(fit.residual_rms) + "\n";
    out += "}\n";
    return out;
}

std::string omega_zero_to_json(const OmegaZeroReport& rep, double R, double h) {
    const char* branch = rep.branch == OmegaZeroBranch::AlphaAboveHalf   ? "alpha_above_half"
                         : rep.branch == OmegaZeroBranch::AlphaBelowHalf ? "alpha_below_half"
                                                                         : "alpha_equal_half";
    std::string out;
    out += "{\n";
    out += "  \"alpha\": " + fmt17(rep.alpha) + ",\n";
    out += "  \"omega\": 0,\n";
    out += "  \"R\": " + fmt17(R) + ",\n";
    out += "  \"h\": " + fmt17(h) + ",\n";
    out += std::string("  \"branch\": \"") + branch + "\",\n";
    out += "  \"rate_v\": " + fmt17(rep.rate_v) + ",\n";
    out += "  \"rate_v_expected\": " + fmt17(std::sqrt(rep.alpha)) + ",\n";
    out += "  \"ell2_tilde\": " + fmt17(rep.ell2_tilde) + ",\n";
    out += "  \"rate_u\": " + fmt17(rep.rate_u) + ",\n";
    out += "  \"rate_u_expected\": " + fmt17(rep.rate_u_expected) + ",\n";
    out += "  \"amplitude_u\": " + fmt17(rep.amplitude_u) + ",\n";
    out += "  \"amplitude_expected\": " + fmt17(rep.amplitude_expected) + ",\n";
    out += std::string("  \"relation_ok\": ") + (rep.relation_ok ? "true" : "false") + ",\n";
    out += "  \"residual_rms\": " + fmt17(rep.residual_rms) + ",\n";
    out += "  \"window\": " + window_json(rep.window) + "\n";
    out += "}\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
    if (std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
        std::fclose(f);
        throw Error(ErrorCode::ParseError, "short write to " + path);
    }
    std::fclose(f);
}

}  // namespace wallforge
