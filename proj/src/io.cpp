#include "ptolemy/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptolemy::io {

namespace {

std::string slot_key(const tri::SideRef& s) {
    return std::to_string(s.tri) + ":" + std::to_string(s.side);
}

tri::SideRef parse_slot(const std::string& key) {
    auto colon = key.find(':');
    if (colon == std::string::npos) throw InputError("bad side key '" + key + "'");
    try {
        return tri::SideRef{std::stoi(key.substr(0, colon)), std::stoi(key.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InputError("bad side key '" + key + "'");
    }
}

json perm_to_cycles(const std::vector<int>& sigma) {
    json cycles = json::array();
    std::vector<bool> seen(sigma.size(), false);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (seen[i] || sigma[i] == int(i)) continue;
        json cyc = json::array();
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            cyc.push_back(int(j) + 1);
            j = sigma[j];
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

std::vector<int> cycles_to_perm(const json& cycles, int n) {
    auto sigma = tri::perm_identity(n);
    if (!cycles.is_array()) throw InputError("permutation must be a list of cycles");
    for (const auto& cyc : cycles) {
        if (!cyc.is_array() || cyc.empty()) throw InputError("bad cycle");
        std::vector<int> c;
        for (const auto& v : cyc) {
            int label = v.get<int>();
            if (label < 1 || label > n) throw InputError("cycle entry out of range");
            c.push_back(label - 1);
        }
        for (std::size_t i = 0; i < c.size(); ++i) sigma[c[i]] = c[(i + 1) % c.size()];
    }
    return sigma;
}

}  // namespace

json triangulation_to_json(const tri::LabeledTriangulation& T) {
    json j;
    j["genus"] = T.signature().genus;
    j["punctures"] = T.signature().punctures;
    j["triangles"] = int(T.triangles().size());
    json gluing = json::array();
    json labels = json::object();
    for (int a = 0; a < T.arc_count(); ++a) {
        auto [s1, s2] = T.arc_slots(a);
        gluing.push_back(json::array(
            {json::array({s1.tri, s1.side}), json::array({s2.tri, s2.side})}));
        labels[slot_key(s1)] = a + 1;
    }
    j["gluing"] = gluing;
    j["arc_labels"] = labels;
    return j;
}

tri::LabeledTriangulation triangulation_from_json(const json& j) {
    try {
        tri::SurfaceSignature sig{j.at("genus").get<int>(), j.at("punctures").get<int>()};
        int n_tri = j.at("triangles").get<int>();
        tri::Gluing gluing;
        for (const auto& pair : j.at("gluing")) {
            tri::SideRef a{pair.at(0).at(0).get<int>(), pair.at(0).at(1).get<int>()};
            tri::SideRef b{pair.at(1).at(0).get<int>(), pair.at(1).at(1).get<int>()};
            gluing.push_back({a, b});
        }
        std::vector<std::pair<tri::SideRef, int>> labels;
        for (const auto& [key, val] : j.at("arc_labels").items())
            labels.push_back({parse_slot(key), val.get<int>()});
        return tri::LabeledTriangulation::build(sig, n_tri, gluing, labels);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad triangulation JSON: ") + e.what());
    }
}

json word_to_json(const tri::GroupoidWord& w) {
    json j;
    j["start"] = triangulation_to_json(w.start);
    json moves = json::array();
    for (const auto& m : w.moves) {
        if (std::holds_alternative<tri::Flip>(m))
            moves.push_back(json{{"flip", std::get<tri::Flip>(m).arc + 1}});
        else
            moves.push_back(json{{"permute", perm_to_cycles(std::get<tri::Permute>(m).sigma)}});
    }
    j["moves"] = moves;
    return j;
}

tri::GroupoidWord word_from_json(const json& j, const std::string& base_dir) {
    try {
        json start = j.at("start");
        if (start.is_string()) {
            std::string path = start.get<std::string>();
            if (!base_dir.empty() && path.find('/') == std::string::npos)
                path = base_dir + "/" + path;
            start = load_json_file(path);
        }
        tri::GroupoidWord w{triangulation_from_json(start), {}};
        int A = w.start.arc_count();
        for (const auto& m : j.at("moves")) {
            if (m.contains("flip")) {
                int label = m.at("flip").get<int>();
                if (label < 1 || label > A) throw InputError("flip arc out of range");
                w.moves.push_back(tri::Flip{label - 1});
            } else if (m.contains("permute")) {
                w.moves.push_back(tri::Permute{cycles_to_perm(m.at("permute"), A)});
            } else {
                throw InputError("move must contain 'flip' or 'permute'");
            }
        }
        if (j.contains("closing_iso") && !j.at("closing_iso").is_null()) {
            auto c = j.at("closing_iso");
            if (!(c.is_string() && c.get<std::string>() == "identity"))
                throw InputError("closing_iso must be \"identity\" when present");
        }
        return w;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad word JSON: ") + e.what());
    }
}

json exchange_to_json(const tri::ExchangeMatrix& em) {
    json j;
    j["eps"] = em.eps;
    j["valences"] = em.valences;
    return j;
}

namespace {

json coeff_map(const RatVec& v, const std::vector<std::string>& names) {
    json out = json::object();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) out[names[i]] = v[i].str();
    return out;
}

}  // namespace

json operator_system_to_json(const heis::OperatorSystem& sys) {
    json j;
    j["variables"] = sys.variables;
    json ops = json::object();
    for (std::size_t i = 0; i < sys.x.size(); ++i) {
        ops["x_" + std::to_string(i + 1)] = json{{"pos", coeff_map(sys.x[i].pos, sys.variables)},
                                                 {"mom", coeff_map(sys.x[i].mom, sys.variables)}};
        ops["y_" + std::to_string(i + 1)] = json{{"pos", coeff_map(sys.y[i].pos, sys.variables)},
                                                 {"mom", coeff_map(sys.y[i].mom, sys.variables)}};
    }
    j["operators"] = ops;
    return j;
}

json linear_map_to_json(const heis::LinearSymplecticMap& m) {
    json rows = json::array();
    auto full = m.full_matrix();
    for (const auto& row : full) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.str());
        rows.push_back(std::move(r));
    }
    return json{{"matrix", rows}, {"det", m.det().str()}};
}

json representation_element_to_json(const itw::RepresentationElement& el) {
    json j;
    const auto& sig = el.loop.word.start.signature();
    j["surface"] = json{{"genus", sig.genus}, {"punctures", sig.punctures}};
    j["lambda"] = el.params.lambda;
    j["hbar"] = el.params.hbar;
    j["loop"] = word_to_json(el.loop.word);
    json factors = json::array();
    for (const auto& f : el.word.factors) {
        if (std::holds_alternative<itw::MonomialFactor>(f)) {
            const auto& m = std::get<itw::MonomialFactor>(f);
            factors.push_back(json{{"kind", "monomial"},
                                   {"arc", m.arc + 1},
                                   {"tropical_sign", m.tropical_sign}});
        } else if (std::holds_alternative<itw::AutoFactor>(f)) {
            const auto& a = std::get<itw::AutoFactor>(f);
            factors.push_back(json{{"kind", "auto"}, {"arc", a.arc + 1}, {"eps", a.eps}});
        } else {
            const auto& p = std::get<itw::PermFactor>(f);
            factors.push_back(json{{"kind", "perm"}, {"permute", perm_to_cycles(p.sigma)}});
        }
    }
    j["factors"] = factors;
    j["linear_part"] = linear_map_to_json(el.word.linear_part());
    j["phase"] = "undetermined";
    return j;
}

json residual_report_to_json(const op::ResidualReport& rep) {
    return json{{"lambda", rep.lambda},   {"hbar", rep.hbar},
                {"N", rep.N},             {"L", rep.L},
                {"states", rep.states},   {"max_residual", rep.max_residual},
                {"per_state", rep.per_state}};
}

json relation_report_to_json(const itw::RelationReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json je{{"relation", e.relation},
                {"detail", e.detail},
                {"triangulation_ok", e.triangulation_ok},
                {"linear_ok", e.linear_ok},
                {"ok", e.ok}};
        if (e.pentagon_residual >= 0) je["pentagon_residual"] = e.pentagon_residual;
        entries.push_back(std::move(je));
    }
    return json{{"entries", entries},
                {"all_ok", rep.all_ok},
                {"max_pentagon_residual", rep.max_pentagon_residual}};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("cannot parse '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

}  // namespace ptolemy::io
