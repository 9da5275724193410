#pragma once

#include <filesystem>
#include <string>

#include "mulepatrol/model.hpp"

namespace fixtures {

/// Three collinear unit segments [0,1], [2,3], [5,6] on the x axis, V=1, t=5.
inline mule::Instance collinear3(std::vector<mule::SensorSpec> sensors = {}) {
  return mule::make_instance({{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}, {{5, 0}, {6, 0}}}, 1.0, 5.0, std::move(sensors));
}

inline mule::GeneratorParams random_params(std::uint64_t seed, int m, int sensors = 0) {
  mule::GeneratorParams p;
  p.seed = seed;
  p.segments = m;
  p.width = 100.0;
  p.height = 100.0;
  p.min_length = 2.0;
  p.max_length = 25.0;
  p.speed = 1.0;
  p.period = 40.0;
  p.sensors = sensors;
  return p;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mulepatrol_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
