#include "winfree/reports.hpp"

#include <algorithm>
#include <cmath>

#include "winfree/errors.hpp"

namespace winfree {

using nlohmann::json;

json threshold_json(const ThresholdReport& report) {
    json pairs = json::array();
    const int n_osc = report.kappa_inc_pairs.empty()
                          ? 0
                          : static_cast<int>(std::lround(
                                std::sqrt(static_cast<double>(report.kappa_inc_pairs.size()))));
    for (int i = 0; i < n_osc; ++i) {
        json row = json::array();
        for (int j = 0; j < n_osc; ++j) {
            row.push_back(report.kappa_inc_pairs[static_cast<std::size_t>(i) * n_osc + j]);
        }
        pairs.push_back(std::move(row));
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"order", report.order},
        {"kappa", report.kappa_used},
        {"alpha", report.alpha},
        {"p", report.p},
        {"v_inf", report.v_inf},
        {"kappa_inc", report.kappa_inc},
        {"kappa_inc_pairs", std::move(pairs)},
        {"omega_m", report.omega_m},
        {"kappa_death", report.kappa_death},
        {"kappa_death_partial", report.kappa_death_partial},
        {"kappa_lock", report.kappa_lock},
        {"alpha_lock", report.alpha_lock ? json(*report.alpha_lock) : json(nullptr)},
        {"r0_bound", report.r0_bound},
        {"beta", report.beta},
        {"alpha_star", report.alpha_star ? json(*report.alpha_star) : json(nullptr)},
    };
}

json verify_json(const std::vector<VerifyItem>& items) {
    bool all_ok = true;
    json rows = json::array();
    for (const VerifyItem& item : items) {
        all_ok = all_ok && item.ok;
        rows.push_back(json{
            {"check", item.check},
            {"order", item.order},
            {"ok", item.ok},
            {"slack", item.slack},
        });
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"all_ok", all_ok},
        {"items", std::move(rows)},
    };
}

json curves_json(const CriticalCurves& curves) {
    json points = json::array();
    const auto opt = [](const std::optional<double>& value) {
        return value ? json(*value) : json(nullptr);
    };
    for (const CurvePoint& point : curves.points) {
        points.push_back(json{
            {"n", point.n},
            {"kappa_i", opt(point.kappa_i)},
            {"kappa_p", opt(point.kappa_p)},
            {"kappa_d", opt(point.kappa_d)},
        });
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"points", std::move(points)},
        {"loglog_slope_kappa_i", opt(curves.slope_kappa_i)},
        {"loglog_slope_kappa_d", opt(curves.slope_kappa_d)},
        {"fit_points_kappa_i", curves.fit_points_kappa_i},
        {"fit_points_kappa_d", curves.fit_points_kappa_d},
    };
}

json classification_json(const ClassificationResult& result) {
    double lo = 0.0;
    double hi = 0.0;
    double sum = 0.0;
    if (!result.rho.rho.empty()) {
        lo = hi = result.rho.rho.front();
        for (double r : result.rho.rho) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
        }
        sum /= static_cast<double>(result.rho.rho.size());
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"label", to_string(result.label)},
        {"rho", result.rho.rho},
        {"rho_mean", sum},
        {"rho_spread", hi - lo},
        {"max_residual", result.rho.max_residual},
        {"window_start", result.rho.window_start},
        {"window_end", result.rho.window_end},
        {"eps_zero", result.eps_zero},
        {"eps_equal", result.eps_equal},
    };
}

json simulation_summary_json(const Trace& trace, const Model& model,
                             const ClassificationResult& result) {
    if (trace.samples() == 0) throw window_error("summary: empty trace");
    const int last = trace.samples() - 1;
    const auto row = trace.row(last);
    json summary = classification_json(result);
    summary["final"] = json{
        {"t", trace.times[static_cast<std::size_t>(last)]},
        {"mid", phase_mid(row)},
        {"halfspread", phase_halfspread(row)},
        {"diameter", phase_diameter(row)},
        {"mean_influence", model.mean_influence(row)},
    };
    return summary;
}

}  // namespace winfree
