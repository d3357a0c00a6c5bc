#include "escaping/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace escaping::io {

json complex_to_json(const geom::Cplx& z) { return json::array({z.real(), z.imag()}); }

geom::Cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json model_to_json(const ModelFile& m) {
    return json{{"family",
                 m.model.family == models::Family::Exponential ? "exponential" : "cosh"},
                {"parameter", complex_to_json(m.model.parameter)},
                {"scale_K", m.scale_K}};
}

ModelFile model_from_json(const json& j) {
    ModelFile m;
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "exponential")
        m.model.family = models::Family::Exponential;
    else if (fam == "cosh")
        m.model.family = models::Family::Cosh;
    else
        throw std::runtime_error("unknown family \"" + fam + "\"");
    m.model.parameter = complex_from_json(j.at("parameter"));
    if (j.contains("scale_K")) m.scale_K = j["scale_K"].get<double>();
    return m;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate byte offset to a line number for the error message
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

json polyline_to_json(const geom::Polyline& p) {
    json pts = json::array();
    for (const auto& z : p.points) pts.push_back(complex_to_json(z));
    return json{{"points", pts}, {"truncation_re", p.truncation_re}};
}

geom::Polyline polyline_from_json(const json& j) {
    geom::Polyline p;
    for (const auto& e : j.at("points")) p.points.push_back(complex_from_json(e));
    if (j.contains("truncation_re")) p.truncation_re = j["truncation_re"].get<double>();
    return p;
}

void write_polyline_csv(const geom::Polyline& p, std::ostream& out) {
    out << "re,im\n";
    out.precision(17);
    for (const auto& z : p.points) out << z.real() << "," << z.imag() << "\n";
}

geom::Polyline read_polyline_csv(std::istream& in) {
    geom::Polyline p;
    std::string line;
    if (!std::getline(in, line) || line.rfind("re,im", 0) != 0)
        throw std::runtime_error("csv polyline: missing \"re,im\" header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("csv polyline: malformed row \"" + line + "\"");
        p.points.emplace_back(std::stod(line.substr(0, comma)),
                              std::stod(line.substr(comma + 1)));
    }
    return p;
}

json transform_to_json(const models::LogTransform& lt) {
    return json{{"family",
                 lt.model.family == models::Family::Exponential ? "exponential" : "cosh"},
                {"parameter", complex_to_json(lt.model.parameter)},
                {"scale_K", lt.scale_K},
                {"tract_threshold", lt.tract_threshold},
                {"attraction_threshold", lt.attraction_threshold}};
}

json postsingular_to_json(const norm::PostsingularReport& rep) {
    json orbits = json::array();
    for (const auto& o : rep.orbits) {
        json pts = json::array();
        for (const auto& z : o.points) pts.push_back(complex_to_json(z));
        orbits.push_back(json{{"singular_value", complex_to_json(o.singular_value)},
                              {"points", pts},
                              {"converged", o.converged},
                              {"unbounded_evidence", o.unbounded_evidence}});
    }
    return json{{"orbits", orbits},
                {"bound_radius", rep.bound_radius},
                {"all_converged", rep.all_converged()}};
}

json expansion_to_json(const models::ExpansionReport& rep) {
    return json{{"certified", rep.certified},
                {"analytic_bound", rep.analytic_bound},
                {"min_observed", rep.min_observed},
                {"witness", complex_to_json(rep.witness)},
                {"samples", rep.samples}};
}

std::string verdict_name(sym::Verdict v) {
    switch (v) {
        case sym::Verdict::Escaping: return "escaping";
        case sym::Verdict::Bounded: return "bounded";
        default: return "inconclusive";
    }
}

std::string label_token(const models::TractLabel& l) {
    return std::to_string(l.base) + ":" + std::to_string(l.branch);
}

models::TractLabel parse_label_token(const std::string& tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
        throw std::runtime_error("bad tract label \"" + tok + "\", expected base:branch");
    models::TractLabel l;
    l.base = std::stoi(tok.substr(0, colon));
    l.branch = std::stoi(tok.substr(colon + 1));
    return l;
}

json address_to_json(const sym::ExternalAddress& a) {
    json labels = json::array();
    for (const auto& l : a.labels) labels.push_back(label_token(l));
    return json{{"labels", labels}, {"horizon", a.horizon}};
}

json orbit_to_json(const sym::OrbitRecord& rec) {
    json steps = json::array();
    for (const auto& s : rec.steps) {
        json st{{"point", complex_to_json(s.point)}, {"re", s.re_part}};
        if (s.tract) st["tract"] = label_token(*s.tract);
        if (s.overflowed) st["overflowed"] = true;
        steps.push_back(st);
    }
    return json{{"seed", complex_to_json(rec.seed)},
                {"steps", steps},
                {"verdict", verdict_name(rec.verdict)},
                {"horizon", rec.horizon},
                {"escaped_by_overflow", rec.escaped_by_overflow}};
}

json hair_to_json(const hairs::HairApproximation& h) {
    json curves = json::array();
    for (const auto& c : h.curves) curves.push_back(polyline_to_json(c));
    json anchors = json::array();
    for (const auto& z : h.anchor_orbit) anchors.push_back(complex_to_json(z));
    return json{{"address", address_to_json(h.address)},
                {"depth", h.depth_K},
                {"curves", curves},
                {"anchors", anchors},
                {"cut_active", h.cut_active},
                {"disk_radius", h.disk_radius},
                {"mesh", h.mesh},
                {"j0", h.j0},
                {"depth_deltas", h.depth_deltas}};
}

json merge_to_json(const hairs::MergeReport& m) {
    return json{{"sup_distance", m.sup_distance},
                {"per_depth_sup", m.per_depth_sup},
                {"merged", m.merged},
                {"disjoint_type", m.disjoint_type},
                {"tract_re_infimum", m.tract_re_infimum}};
}

json campaign_to_json(const lemmas::CampaignReport& rep) {
    json trials = json::array();
    for (const auto& t : rep.trials)
        trials.push_back(json{{"seed", t.seed},
                              {"separation_ok", t.separation_ok},
                              {"proximity_ok", t.proximity_ok},
                              {"resolved", t.resolved}});
    return json{{"trials", trials},
                {"separation_counterexamples", rep.separation_counterexamples},
                {"proximity_counterexamples", rep.proximity_counterexamples},
                {"unresolved", rep.unresolved},
                {"control_violated", rep.control_violated}};
}

}  // namespace escaping::io
