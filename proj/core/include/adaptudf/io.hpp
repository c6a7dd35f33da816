#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adaptudf/model.hpp"

namespace adaptudf {

enum class CloudFileFormat { XYZ_ASCII, PLY_ASCII, PLY_BINARY_LE, OBJ_POINTS };

/// Picks a format from the extension (.xyz, .ply, .obj). PLY files report
/// PLY_ASCII here; the actual encoding is taken from the header on read.
CloudFileFormat format_from_extension(const std::filesystem::path& path);

/// Parse a point cloud from in-memory text/bytes. PLY_ASCII and PLY_BINARY_LE
/// are interchangeable here: the header's `format` line decides.
PointCloud parse_point_cloud(std::string_view content, CloudFileFormat format);

/// Reads every vertex record in file order; normals are captured when the file
/// carries nx/ny/nz (or, for XYZ, six columns). Normals are rescaled to unit
/// length.
PointCloud read_point_cloud(const std::filesystem::path& path,
                            std::optional<CloudFileFormat> format = std::nullopt);

/// XYZ text: one `x y z [nx ny nz]` line per point, shortest round-trip digits.
void write_point_cloud_xyz(const PointCloud& cloud, const std::filesystem::path& path);

/// OBJ text: `v x y z` lines followed by 1-based `f i j k` lines. Coordinates
/// use the shortest decimal form that round-trips exactly.
std::string format_mesh_obj(const TriangleMesh& mesh);
void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Reads `v` and `f` records of an OBJ file. Polygons are fan-triangulated;
/// texture/normal references (`f 1/2/3`) and negative indices are accepted.
TriangleMesh parse_mesh_obj(std::string_view content);
TriangleMesh read_mesh(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace adaptudf
