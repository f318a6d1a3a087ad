#pragma once

#include <string>

#include "pairquad/mesh.hpp"

namespace pairquad {

// JSON interchange:
//   {
//     "dim": 2, "ambient_dim": 2,
//     "vertices": [[x, y], ...],
//     "simplices": [[i, j, k], ...],
//     "periods": [1.0, 1.0] | null
//   }
std::string mesh_to_json(const Triangulation& T);
Triangulation mesh_from_json(const std::string& text);

void save_mesh(const Triangulation& T, const std::string& path);
Triangulation load_mesh(const std::string& path);

}  // namespace pairquad
