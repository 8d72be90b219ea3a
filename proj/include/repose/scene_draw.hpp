#pragma once

#include <string>

#include "repose/trajectory.hpp"

namespace repose {

/// Side-view frame geometry: world XZ projected at a fixed pixel scale.
struct FrameStyle {
  double pixels_per_meter = 600.0;
  double margin_px = 40.0;
};

/// One SVG frame showing surface, object, gripper, and the contact
/// point (circle with id="contact", centered on the object's lowest
/// point at the documented scale).
std::string draw_frame(const Scene& scene, const Waypoint& waypoint, const std::string& title,
                       const FrameStyle& style = FrameStyle());

}  // namespace repose
