#include "repose/scene_draw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace repose {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Projector {
  double scale;
  double margin;
  double min_x;
  double max_z;

  double x(double world_x) const { return margin + (world_x - min_x) * scale; }
  double y(double world_z) const { return margin + (max_z - world_z) * scale; }
};

void line(std::ostringstream& out, const Projector& p, const Eigen::Vector3d& a,
          const Eigen::Vector3d& b, const char* stroke, double width) {
  out << "  <line x1=\"" << px(p.x(a.x())) << "\" y1=\"" << px(p.y(a.z())) << "\" x2=\""
      << px(p.x(b.x())) << "\" y2=\"" << px(p.y(b.z())) << "\" stroke=\"" << stroke
      << "\" stroke-width=\"" << px(width) << "\" stroke-linecap=\"round\"/>\n";
}

}  // namespace

std::string draw_frame(const Scene& scene, const Waypoint& waypoint, const std::string& title,
                       const FrameStyle& style) {
  // World window: the surface span plus headroom for the raised object.
  const Eigen::Vector3d c0 = scene.surface.to_world(0.0, 0.0);
  const Eigen::Vector3d c1 = scene.surface.to_world(scene.surface.extent_x, 0.0);
  const Eigen::Vector3d c2 = scene.surface.to_world(0.0, scene.surface.extent_y);
  const Eigen::Vector3d c3 = scene.surface.to_world(scene.surface.extent_x, scene.surface.extent_y);
  double min_x = std::min({c0.x(), c1.x(), c2.x(), c3.x()});
  double max_x = std::max({c0.x(), c1.x(), c2.x(), c3.x()});
  double max_z = scene.surface.height + scene.object.length + 0.3;

  Projector p{style.pixels_per_meter, style.margin_px, min_x, max_z};
  const double width_px = (max_x - min_x) * p.scale + 2.0 * p.margin;
  const double height_px = (max_z - (scene.surface.height - 0.1)) * p.scale + 2.0 * p.margin;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width_px) << "\" height=\""
      << px(height_px) << "\" viewBox=\"0 0 " << px(width_px) << " " << px(height_px) << "\">\n";
  out << "  <title>" << title << "</title>\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Surface plane (side view collapses it to a segment at table height).
  line(out, p, Eigen::Vector3d(min_x, 0, scene.surface.height),
       Eigen::Vector3d(max_x, 0, scene.surface.height), "#444444", 3.0);

  // Object side profile along its axis.
  const Eigen::Vector3d pivot = waypoint.object_pose.apply(Eigen::Vector3d(0, 0, 0));
  const Eigen::Vector3d tip =
      waypoint.object_pose.apply(Eigen::Vector3d(0, scene.object.length, 0));
  const double body_px = std::max(
      2.0, (scene.object.shape == ObjectShape::Stick ? scene.object.diameter
                                                     : scene.object.thickness) *
               p.scale);
  line(out, p, pivot, tip, "#b8860b", body_px);

  // Gripper: approach segment wrist->TCP plus the projected body box.
  const Eigen::Vector3d wrist = waypoint.gripper_pose.translation();
  const Eigen::Vector3d tcp = waypoint.gripper_pose.apply(scene.gripper.tcp_in_gripper());
  line(out, p, wrist, tcp, "#1f6fb2", 2.0);
  const Eigen::Vector3d half = scene.gripper.body_box / 2.0;
  double box_min_x = 1e30;
  double box_max_x = -1e30;
  double box_min_z = 1e30;
  double box_max_z = -1e30;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {0, 1}) {
        const Eigen::Vector3d corner = waypoint.gripper_pose.apply(Eigen::Vector3d(
            sx * half.x(), sy * half.y(), sz * scene.gripper.body_box.z()));
        box_min_x = std::min(box_min_x, corner.x());
        box_max_x = std::max(box_max_x, corner.x());
        box_min_z = std::min(box_min_z, corner.z());
        box_max_z = std::max(box_max_z, corner.z());
      }
    }
  }
  out << "  <rect x=\"" << px(p.x(box_min_x)) << "\" y=\"" << px(p.y(box_max_z)) << "\" width=\""
      << px((box_max_x - box_min_x) * p.scale) << "\" height=\""
      << px((box_max_z - box_min_z) * p.scale)
      << "\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n";

  // Contact marker at the object's lowest point.
  const Eigen::Vector3d contact = object_lowest_point(scene.object, waypoint.object_pose);
  out << "  <circle id=\"contact\" cx=\"" << px(p.x(contact.x())) << "\" cy=\""
      << px(p.y(contact.z())) << "\" r=\"5\" fill=\"#c0392b\"/>\n";

  out << "  <text x=\"" << px(style.margin_px) << "\" y=\"" << px(style.margin_px / 2.0)
      << "\" font-family=\"monospace\" font-size=\"14\">" << title << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace repose
