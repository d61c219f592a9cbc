#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ssns/grid.hpp"

namespace ssns::io {

// Container layout, all little-endian:
//   char[4]  magic "SSNS"
//   u32      version
//   u32      n
//   f64      box side L
//   u32      component count
//   f64[n^3] per component, row-major (first axis slowest)
inline constexpr std::uint32_t kContainerVersion = 1;

void write_field(std::ostream& out, const Grid& grid, const std::vector<std::vector<double>>& components);
void write_field(std::ostream& out, const VectorField& f);
void write_field(std::ostream& out, const ScalarField& f);

struct RawField {
    Grid grid;
    std::vector<std::vector<double>> components;
};

/// Reads a container; throws DimensionError on malformed headers or truncated data.
RawField read_field(std::istream& in);
VectorField read_vector_field(std::istream& in);

void save(const std::filesystem::path& path, const VectorField& f);
VectorField load_vector_field(const std::filesystem::path& path);

}  // namespace ssns::io
