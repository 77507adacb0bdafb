#pragma once

// Shared synthetic scenes for the test suites. The room + corridor scene
// comes from the repository scene file so tests and the CLI walk the same
// geometry.

#include <string>

#include "ffmap/simulate.hpp"

namespace ffmap::testing {

inline SceneFile room_corridor_scene() {
    return load_scene(std::string(FFMAP_SCENE_DIR) + "/room_corridor.txt");
}

/// Dead-end corridor: two parallel side walls and one end wall, open at
/// the back. Ground truth wall faces (inner): y = 0.075, y = 2.925,
/// x = 5.925. The robot stands near the dead end, yawed 45 degrees so
/// stripes land on all three walls.
inline SceneFile corridor_scene() {
    SceneFile file;
    file.scene.ceiling_height = 3.0;
    file.scene.walls = {
        {{0, 0}, {6, 0}, 0.0, 0.15},
        {{0, 3}, {6, 3}, 0.0, 0.15},
        {{6, 0}, {6, 3}, 0.0, 0.15},
    };
    file.sensor.azimuth_steps = 1200;
    file.waypoints = {{{4.5, 2.0}, 45.0, 0.0}};
    file.frame_count = 1;
    return file;
}

/// Single room whose only interior structure is a cabinet that reaches
/// the ceiling; the stripe over it holds no wall above, so the cabinet
/// face is the top structure.
inline SceneFile cabinet_to_ceiling_scene() {
    SceneFile file;
    file.scene.ceiling_height = 2.6;
    file.scene.walls = {
        {{0, 0}, {6, 0}, 0.0, 0.15},
        {{0, 4}, {6, 4}, 0.0, 0.15},
        {{0, 0}, {0, 4}, 0.0, 0.15},
        {{6, 0}, {6, 4}, 0.0, 0.15},
    };
    // Cabinet along the south wall, flush with the ceiling.
    file.scene.boxes = {{{2.0, 0.4, 0.0}, {2.0, 0.5, 2.6}}};
    file.sensor.azimuth_steps = 1200;
    file.waypoints = {{{3.0, 2.6}, 0.0, 0.0}};
    file.frame_count = 1;
    return file;
}

/// Room with two boxes staggered in depth in front of the south wall so a
/// stripe crosses wall, cabinet front and sofa front in one descent.
inline SceneFile three_structure_scene() {
    SceneFile file;
    file.scene.ceiling_height = 3.0;
    file.scene.walls = {
        {{0, 0}, {8, 0}, 0.0, 0.15},
        {{0, 6}, {8, 6}, 0.0, 0.15},
        {{0, 0}, {0, 6}, 0.0, 0.15},
        {{8, 0}, {8, 6}, 0.0, 0.15},
    };
    file.scene.boxes = {
        {{3.0, 0.7, 0.0}, {2.0, 0.5, 1.6}},  // cabinet, 1.2 m before the wall face
        {{3.0, 2.2, 0.0}, {2.0, 0.7, 0.7}},  // sofa, nearer and lower
    };
    file.sensor.azimuth_steps = 1800;
    file.waypoints = {{{4.0, 4.2}, 0.0, 0.0}};
    file.frame_count = 1;
    return file;
}

}  // namespace ffmap::testing
