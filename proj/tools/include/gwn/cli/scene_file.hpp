#pragma once

#include <filesystem>
#include <string>

#include "gwn/scene.hpp"

namespace gwn::cli {

/// Settings that apply to every patch of a scene file.
struct SceneSettings {
  int boundary_samples_per_edge = 200;
  int boundary_segments = 0;  ///< total per parametric loop; 0 keeps samples-per-edge
  bool may_self_intersect = false;
  EpsilonConfig epsilons;
};

/// Scene JSON:
///   {
///     "boundary_samples_per_edge": 200,          optional
///     "boundary_segments": 0,                    optional
///     "may_self_intersect": false,               optional
///     "epsilons": {"tangent_parametric": 1e-12, "tangent_bem": 1e-2, "dedup": 1e-9},
///     "patches": [
///       {"type": "mesh_obj", "path": "part.obj"},
///       {"type": "mesh_obj", "vertices": [[x,y,z], ...], "triangles": [[i,j,k], ...]},
///       {"type": "bezier_triangle", "control": [10 points]},
///       {"type": "coons", "curves": [c0, c1, d0, d1]},   each 4 (or 3) points
///       {"type": "bem_loop", "loop": [[x,y,z], ...], "elements": 200, "order": 16}
///     ]
///   }
/// Relative OBJ paths resolve against base_dir. Schema problems throw
/// InvalidInput, unreadable files throw Io.
Scene parse_scene(const std::string& json_text, const std::filesystem::path& base_dir,
                  SceneSettings* settings_out = nullptr);
Scene load_scene(const std::filesystem::path& path, SceneSettings* settings_out = nullptr);

}  // namespace gwn::cli
