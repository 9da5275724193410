#pragma once

#include <string>

#include "mulepatrol/deploy.hpp"
#include "mulepatrol/model.hpp"

namespace mule {

struct RenderStyle {
  double width_px = 800.0;
  double height_px = 600.0;
  double margin_px = 24.0;
  std::string segment_color = "#222222";
  double segment_width = 2.5;
  std::string connector_color = "#888888";
  double connector_width = 1.5;
  std::string euler_color = "#1f77b4";
  double euler_width = 1.5;
  double euler_opacity = 0.45;
  double euler_offset_px = 3.0;
  std::string tick_color = "#d62728";
  double tick_length_px = 10.0;
  std::string mule_color = "#2ca02c";
  double mule_size_px = 7.0;
  std::string sensor_color = "#ff7f0e";
  double sensor_radius_px = 4.0;
};

/// Static SVG of an instance, optionally overlaid with a plan bound to it.
/// Output is a pure function of the inputs.
std::string render_svg(const Instance& inst, const DeploymentPlan* plan, const RenderStyle& style = {});

}  // namespace mule
