#include "ssns/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ssns/errors.hpp"

namespace ssns::io {
namespace {

constexpr std::array<char, 4> kMagic = {'S', 'S', 'N', 'S'};

template <class T>
void put_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
        throw DimensionError("field container: unexpected end of data");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_field(std::ostream& out, const Grid& grid,
                 const std::vector<std::vector<double>>& components) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kContainerVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n()));
    put_le<double>(out, grid.box_side());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(components.size()));
    for (const auto& c : components) {
        if (c.size() != grid.size()) throw DimensionError("field container: component size mismatch");
        for (double v : c) put_le<double>(out, v);
    }
}

void write_field(std::ostream& out, const VectorField& f) {
    write_field(out, f.grid, {f[0], f[1], f[2]});
}

void write_field(std::ostream& out, const ScalarField& f) {
    write_field(out, f.grid, {f.values});
}

RawField read_field(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw DimensionError("field container: bad magic");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kContainerVersion)
        throw DimensionError("field container: unsupported version " + std::to_string(version));
    const auto n = get_le<std::uint32_t>(in);
    const auto box = get_le<double>(in);
    const auto count = get_le<std::uint32_t>(in);
    if (n == 0 || n > 4096) throw DimensionError("field container: implausible grid size");
    RawField raw{Grid(static_cast<int>(n), box), {}};
    raw.components.resize(count);
    for (auto& c : raw.components) {
        c.resize(raw.grid.size());
        for (double& v : c) v = get_le<double>(in);
    }
    return raw;
}

VectorField read_vector_field(std::istream& in) {
    RawField raw = read_field(in);
    if (raw.components.size() != 3) throw DimensionError("field container: expected 3 components");
    VectorField f(raw.grid);
    for (int c = 0; c < 3; ++c) f[c] = std::move(raw.components[c]);
    return f;
}

void save(const std::filesystem::path& path, const VectorField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(out, f);
}

VectorField load_vector_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_vector_field(in);
}

}  // namespace ssns::io
