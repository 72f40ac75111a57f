#pragma once

#include "scenekit/point_cloud.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace scenekit {

enum class PlyFormat { ascii, binary_little_endian };

/// Reads a vertex-only PLY with float/double x,y,z and optional uchar
/// red,green,blue (other scalar vertex properties are skipped). Colors are
/// scaled to [0, 1]. Throws IoError on malformed headers, truncated payloads
/// and unsupported property types.
PointCloud load_ply(std::string_view bytes);

/// Writes float x,y,z and uchar red,green,blue. Binary round trips are
/// lossless for clouds that came from a PLY file.
std::string save_ply(const PointCloud& cloud, PlyFormat format = PlyFormat::binary_little_endian);

PointCloud read_ply_file(const std::filesystem::path& path);
void write_ply_file(const std::filesystem::path& path, const PointCloud& cloud,
                    PlyFormat format = PlyFormat::binary_little_endian);

}  // namespace scenekit
