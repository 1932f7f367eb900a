#pragma once

// Serialization of analysis results: JSON with floats at 17 significant
// digits, CSV rows, and a static SVG bifurcation diagram.

#include "skbif/dynamics.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace skbif::report {

using json = nlohmann::ordered_json;

/// %.17g, with "nan"/"inf" spelled as JSON null.
std::string g17(double v);

/// Deterministic JSON text: two-space indent, floats via g17.
std::string dump(const json& j);

json vec_json(const Vec& v);
json axes_json(const Dim& dim);
json pattern_json(const FamilySpec& spec, const BranchingPattern& pat);
json report_json(const MinimalModelReport& r);
json flow_json(const FlowResult& r, const std::vector<HPoint>& eqs);

struct GammaRow {
    int p = 1;
    double closed = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};
json gamma_json(int k, double eta, const std::vector<GammaRow>& rows);
std::string gamma_csv(const std::vector<GammaRow>& rows);

struct DiagramCurve {
    int plane = 1;
    std::vector<double> lambda;
    std::vector<double> signed_norm;
    std::vector<std::pair<double, double>> folds;
};
std::string diagram_svg(const std::vector<DiagramCurve>& curves, double lambda_min,
                        double lambda_max, const std::string& title);

} // namespace skbif::report
