#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace skbif::report {

std::string g17(double v)
{
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const json& j, int depth, std::string& out)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad + json(it.key()).dump() + ": ";
            dump_rec(it.value(), depth + 1, out);
        }
        out += "\n" + close + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Short numeric arrays stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ", ";
                }
                dump_rec(j[i], depth + 1, out);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) {
                out += ",\n";
            }
            out += pad;
            dump_rec(j[i], depth + 1, out);
        }
        out += "\n" + close + "]";
        return;
    }
    case json::value_t::number_float: out += g17(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

} // namespace

std::string dump(const json& j)
{
    std::string out;
    dump_rec(j, 0, out);
    out += "\n";
    return out;
}

json vec_json(const Vec& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

json axes_json(const Dim& dim)
{
    const auto axes = enumerate_axes(dim);
    json j;
    j["k"] = dim.k();
    j["count"] = axes.size();
    json classes = json::array();
    for (const auto& c : axis_class_counts(dim)) {
        classes.push_back({{"p", c.p}, {"count", c.count}});
    }
    j["classes"] = classes;
    json list = json::array();
    for (const auto& a : axes) {
        list.push_back({{"p", a.p()},
                        {"block", a.block()},
                        {"direction", vec_json(a.direction().vec())}});
    }
    j["axes"] = list;
    return j;
}

json pattern_json(const FamilySpec& spec, const BranchingPattern& pat)
{
    json j;
    j["k"] = spec.k;
    j["kind"] = to_string(spec.kind);
    json entries = json::array();
    for (const auto& e : pat.entries) {
        entries.push_back({{"p", e.record.axis.p()},
                           {"sign", to_string(e.record.sign)},
                           {"index", e.record.index},
                           {"multiplicity", e.multiplicity},
                           {"lambda_exponent", e.record.param.lambda_exponent},
                           {"lambda_sign", e.record.param.lambda_sign}});
    }
    j["entries"] = entries;
    json totals = json::array();
    for (const auto& [key, n] : pat.totals) {
        totals.push_back({{"sign", to_string(key.first)}, {"index", key.second}, {"count", n}});
    }
    j["totals"] = totals;
    j["total"] = pat.total();
    return j;
}

json report_json(const MinimalModelReport& r)
{
    json j;
    j["k"] = r.k;
    j["eta"] = r.eta;
    j["eta0"] = r.eta0;
    j["tau"] = r.tau;
    j["lambda_min"] = r.lambda_min;
    j["lambda_max"] = r.lambda_max;
    j["family"] = r.family;
    j["crossing"] = r.crossings;
    j["folds"] = r.folds;
    j["expected_crossing"] = r.expected_crossings;
    j["expected_folds"] = r.expected_folds;
    j["crossing_index"] = r.crossing_index;
    j["crossing_index_ok"] = r.crossing_index_ok;
    j["max_fold_rel_error"] = r.max_fold_rel_error;
    j["pitchfork_legs_crossing"] = r.pitchfork_legs_crossing;
    j["pitchfork_legs_fold"] = r.pitchfork_legs_fold;
    json planes = json::array();
    for (const auto& t : r.planes) {
        json fl = json::array();
        for (double l : t.fold_lambdas) {
            fl.push_back(l);
        }
        json cf = json::array();
        for (double l : t.closed_form) {
            cf.push_back(l);
        }
        planes.push_back({{"p", t.p},
                          {"multiplicity", t.multiplicity},
                          {"crossing_curves", t.crossing_curves},
                          {"fold_curves", t.fold_curves},
                          {"folds", t.folds},
                          {"other_curves", t.other_curves},
                          {"fold_lambdas", fl},
                          {"closed_form", cf}});
    }
    j["planes"] = planes;
    j["notes"] = r.notes;
    j["numerical_failure"] = r.numerical_failure;
    j["pass"] = r.pass;
    return j;
}

json flow_json(const FlowResult& r, const std::vector<HPoint>& eqs)
{
    json j;
    j["outcome"] = to_string(r.outcome);
    j["equilibrium"] = r.equilibrium;
    if (r.equilibrium >= 0) {
        j["equilibrium_point"] = vec_json(eqs[r.equilibrium].vec());
        j["distance"] = r.distance;
    }
    j["endpoint"] = vec_json(r.y.back());
    j["t_end"] = r.t.back();
    j["steps"] = r.steps;
    j["rejected"] = r.rejected;
    j["energy_monotone"] = r.energy_monotone;
    return j;
}

json gamma_json(int k, double eta, const std::vector<GammaRow>& rows)
{
    json j;
    j["k"] = k;
    j["eta"] = eta;
    json a = json::array();
    for (const auto& r : rows) {
        a.push_back({{"p", r.p}, {"closed", r.closed}, {"numeric", r.numeric}, {"rel_error", r.rel_error}});
    }
    j["rows"] = a;
    return j;
}

std::string gamma_csv(const std::vector<GammaRow>& rows)
{
    std::string s = "p,closed,numeric,rel_error\n";
    for (const auto& r : rows) {
        s += std::to_string(r.p) + "," + g17(r.closed) + "," + g17(r.numeric) + "," + g17(r.rel_error) + "\n";
    }
    return s;
}

std::string diagram_svg(const std::vector<DiagramCurve>& curves, double lambda_min,
                        double lambda_max, const std::string& title)
{
    constexpr double W = 800, H = 600, M = 60;
    double ymax = 1e-12;
    for (const auto& c : curves) {
        for (double y : c.signed_norm) {
            ymax = std::max(ymax, std::abs(y));
        }
    }
    ymax *= 1.05;
    auto X = [&](double l) { return M + (l - lambda_min) / (lambda_max - lambda_min) * (W - 2 * M); };
    auto Y = [&](double y) { return H / 2 - y / ymax * (H / 2 - M); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<line x1=\"" << M << "\" y1=\"" << H / 2 << "\" x2=\"" << W - M << "\" y2=\"" << H / 2
       << "\" stroke=\"#888\"/>\n";
    os << "<line x1=\"" << X(0.0) << "\" y1=\"" << M << "\" x2=\"" << X(0.0) << "\" y2=\"" << H - M
       << "\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << W - M << "\" y=\"" << H / 2 + 20 << "\" font-family=\"sans-serif\" font-size=\"12\">lambda</text>\n";
    os << "<text x=\"" << X(0.0) + 5 << "\" y=\"" << M - 5 << "\" font-family=\"sans-serif\" font-size=\"12\">signed |x|</text>\n";
    std::map<int, bool> legend;
    for (const auto& c : curves) {
        const char* col = palette[(c.plane - 1) % 8];
        legend[c.plane] = true;
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < c.lambda.size(); ++i) {
            os << g17(X(c.lambda[i])) << "," << g17(Y(c.signed_norm[i])) << " ";
        }
        os << "\"/>\n";
        for (const auto& [l, y] : c.folds) {
            os << "<circle cx=\"" << g17(X(l)) << "\" cy=\"" << g17(Y(y)) << "\" r=\"4\" fill=\"black\"/>\n";
        }
    }
    int row = 0;
    for (const auto& [plane, _] : legend) {
        const char* col = palette[(plane - 1) % 8];
        os << "<text x=\"" << W - M - 80 << "\" y=\"" << M + 15 * row << "\" fill=\"" << col
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << (plane == 1 ? std::string("L_1") : "E_" + std::to_string(plane))
           << "</text>\n";
        ++row;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace skbif::report
