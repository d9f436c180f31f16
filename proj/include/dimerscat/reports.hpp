#pragma once

// Deterministic CSV and JSON emission. Every CSV starts with a comment line
// carrying the config hash, then a header row naming the columns; all floats
// are printed with %.17g so identical runs are byte-identical.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dimerscat/assembly.hpp"
#include "dimerscat/effective.hpp"
#include "dimerscat/fields.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/materials.hpp"
#include "dimerscat/solver.hpp"

namespace dimerscat {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline void csv_preamble(std::ostream& os, const std::string& cfg_hash,
                         const std::string& header) {
    os << "# config_hash=" << cfg_hash << '\n' << header << '\n';
}

inline void append_complex_columns(std::string& line, const Vec3C& v) {
    for (int i = 0; i < 3; ++i)
        line += ',' + g17(v(i).real()) + ',' + g17(v(i).imag());
}

} // namespace detail

inline void write_moments_csv(std::ostream& os, const FullMoments& mom,
                              const std::string& cfg_hash) {
    detail::csv_preamble(os, cfg_hash,
                         "m,Q1x_re,Q1x_im,Q1y_re,Q1y_im,Q1z_re,Q1z_im,"
                         "R1x_re,R1x_im,R1y_re,R1y_im,R1z_re,R1z_im,"
                         "Q2x_re,Q2x_im,Q2y_re,Q2y_im,Q2z_re,Q2z_im,"
                         "R2x_re,R2x_im,R2y_re,R2y_im,R2z_re,R2z_im");
    for (std::size_t m = 0; m < mom.size(); ++m) {
        std::string line = std::to_string(m);
        detail::append_complex_columns(line, mom.q1(m));
        detail::append_complex_columns(line, mom.r1(m));
        detail::append_complex_columns(line, mom.q2(m));
        detail::append_complex_columns(line, mom.r2(m));
        os << line << '\n';
    }
}

inline void write_moments_csv(std::ostream& os, const ReducedMoments& mom,
                              const std::string& cfg_hash) {
    detail::csv_preamble(os, cfg_hash,
                         "m,Q1x_re,Q1x_im,Q1y_re,Q1y_im,Q1z_re,Q1z_im,"
                         "R2x_re,R2x_im,R2y_re,R2y_im,R2z_re,R2z_im");
    for (std::size_t m = 0; m < mom.size(); ++m) {
        std::string line = std::to_string(m);
        detail::append_complex_columns(line, mom.q1(m));
        detail::append_complex_columns(line, mom.r2(m));
        os << line << '\n';
    }
}

inline void write_pattern_csv(std::ostream& os, const FarFieldPattern& pat,
                              const std::string& cfg_hash) {
    detail::csv_preamble(os, cfg_hash,
                         "theta,phi,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im,intensity");
    for (std::size_t i = 0; i < pat.size(); ++i) {
        std::string line = g17(pat.thetas[i]) + ',' + g17(pat.phis[i]);
        detail::append_complex_columns(line, pat.values[i]);
        line += ',' + g17(pat.values[i].squaredNorm());
        os << line << '\n';
    }
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& sweep,
                            const std::string& cfg_hash) {
    detail::csv_preamble(
        os, cfg_hash,
        "a,chiHH_norm,chiHE_norm,chiEH_norm,chiEE_norm,min_eig_re_eps,min_eig_re_mu,flags");
    for (const auto& pt : sweep.points) {
        std::string flags = !pt.eps_negative && !pt.mu_negative ? "none"
                            : pt.eps_negative && pt.mu_negative ? "eps+mu"
                            : pt.eps_negative                   ? "eps"
                                                                : "mu";
        os << g17(pt.a) << ',' << g17(pt.full_norm[0]) << ',' << g17(pt.full_norm[1]) << ','
           << g17(pt.full_norm[2]) << ',' << g17(pt.full_norm[3]) << ','
           << g17(pt.min_eig_re_eps) << ',' << g17(pt.min_eig_re_mu) << ',' << flags << '\n';
    }
}

inline void write_effective_csv(std::ostream& os, const EffectiveMediumReport& rep,
                                const std::string& cfg_hash) {
    detail::csv_preamble(os, cfg_hash, "tensor,row,c1_re,c1_im,c2_re,c2_im,c3_re,c3_im");
    const struct { const char* name; const Mat3C& m; } tensors[] = {
        {"eps_eff", rep.tensors.eps_eff},
        {"mu_eff", rep.tensors.mu_eff},
        {"xi", rep.tensors.xi},
        {"zeta", rep.tensors.zeta},
    };
    for (const auto& t : tensors)
        for (int r = 0; r < 3; ++r) {
            std::string line = std::string(t.name) + ',' + std::to_string(r);
            for (int c = 0; c < 3; ++c)
                line += ',' + g17(t.m(r, c).real()) + ',' + g17(t.m(r, c).imag());
            os << line << '\n';
        }
}

inline nlohmann::json to_json(const ConditionCheck& c) {
    return {{"label", c.label}, {"value", c.value}, {"margin", c.margin}, {"pass", c.pass}};
}

inline nlohmann::json to_json(const RegimeReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"checks", checks}, {"all_pass", r.all_pass()}};
}

inline nlohmann::json to_json(const SolveReport& r) {
    return {{"method", to_string(r.method)},
            {"iterations", r.iterations},
            {"relative_residual", r.relative_residual},
            {"converged", r.converged}};
}

inline nlohmann::json to_json(const ValidationReport& r) {
    return {{"recomputed_d_in", r.recomputed_d_in},
            {"recomputed_d_out", r.recomputed_d_out},
            {"stored_d_in", r.stored_d_in},
            {"stored_d_out", r.stored_d_out},
            {"expected_d_in", r.expected_d_in},
            {"expected_d_out", r.expected_d_out},
            {"count", r.count},
            {"expected_count", r.expected_count},
            {"stored_matches_recomputed", r.stored_matches_recomputed},
            {"d_in_ok", r.d_in_ok},
            {"d_out_ok", r.d_out_ok},
            {"count_matches_expected", r.count_matches_expected},
            {"all_ok", r.all_ok()}};
}

inline nlohmann::json to_json(const ExponentFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"max_residual", f.max_residual}};
}

inline nlohmann::json to_json(const SweepResult& s) {
    static const char* block_names[4] = {"chiHH", "chiHE", "chiEH", "chiEE"};
    nlohmann::json dom, full;
    for (int b = 0; b < 4; ++b) {
        dom[block_names[b]] = to_json(s.dominant_fit[b]);
        full[block_names[b]] = to_json(s.full_fit[b]);
    }
    return {{"predicted_diag_slope", s.predicted_diag_slope},
            {"predicted_offdiag_slope", s.predicted_offdiag_slope},
            {"dominant_fits", dom},
            {"full_inverse_fits", full}};
}

inline nlohmann::json to_json(const EffectiveMediumReport& r) {
    return {{"min_eig_re_eps", r.min_eig_re_eps},
            {"min_eig_re_mu", r.min_eig_re_mu},
            {"eps_negative", r.eps_negative},
            {"mu_negative", r.mu_negative},
            {"double_negative", r.double_negative}};
}

} // namespace dimerscat
