#include "pairquad/mesh_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pairquad {

using nlohmann::json;

std::string mesh_to_json(const Triangulation& T) {
    json j;
    j["dim"] = T.dim;
    j["ambient_dim"] = T.ambient;
    auto verts = json::array();
    for (int v = 0; v < T.vertex_count(); ++v) {
        auto row = json::array();
        for (double c : T.vertex(v)) row.push_back(c);
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    auto simp = json::array();
    for (int s = 0; s < T.simplex_count(); ++s) {
        auto row = json::array();
        for (int i : T.simplex(s)) row.push_back(i);
        simp.push_back(std::move(row));
    }
    j["simplices"] = std::move(simp);
    if (T.periodic())
        j["periods"] = T.periods;
    else
        j["periods"] = nullptr;
    return j.dump(2);
}

Triangulation mesh_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("mesh JSON parse error: ") + e.what());
    }
    Triangulation T;
    try {
        T.dim = j.at("dim").get<int>();
        T.ambient = j.at("ambient_dim").get<int>();
        for (const auto& row : j.at("vertices")) {
            if (static_cast<int>(row.size()) != T.ambient)
                throw std::invalid_argument("vertex row has wrong arity");
            for (const auto& c : row) T.coords.push_back(c.get<double>());
        }
        for (const auto& row : j.at("simplices")) {
            if (static_cast<int>(row.size()) != T.dim + 1)
                throw std::invalid_argument("simplex row has wrong arity");
            for (const auto& i : row) T.simplices.push_back(i.get<int>());
        }
        if (j.contains("periods") && !j.at("periods").is_null())
            T.periods = j.at("periods").get<Vec>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("mesh JSON field error: ") + e.what());
    }
    validate_mesh(T);
    return T;
}

void save_mesh(const Triangulation& T, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << mesh_to_json(T) << '\n';
}

Triangulation load_mesh(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return mesh_from_json(text);
}

}  // namespace pairquad
