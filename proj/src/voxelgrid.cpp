// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconv/voxelgrid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "qconv/error.hpp"
#include "qconv/parallel.hpp"
#include "qconv/rng.hpp"

namespace qconv {

namespace {

constexpr std::uint8_t kMagic[4] = {0x56, 0x4F, 0x58, 0x47};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;

static_assert(std::numeric_limits<float>::is_iec559);

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
    }
    return v;
}

std::size_t checked_volume(std::size_t channels, std::size_t side) {
    std::size_t v = 0;
    if (__builtin_mul_overflow(side, side, &v) ||
        __builtin_mul_overflow(v, side, &v) ||
        __builtin_mul_overflow(v, channels, &v)) {
        fail(ErrorKind::ResourceLimit, "grid dimensions overflow");
    }
    return v;
}

// Zero-padded 1D convolution along one axis of a single channel cube.
void convolve_axis(std::span<const double> in, std::span<double> out,
                   std::size_t side, int axis, std::span<const double> kernel) {
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const std::size_t stride = axis == 0 ? side * side : axis == 1 ? side : 1;
    const auto n = static_cast<std::ptrdiff_t>(side);
    for (std::size_t a = 0; a < side; ++a) {
        for (std::size_t b = 0; b < side; ++b) {
            std::size_t base = 0;
            switch (axis) {
            case 0: base = a * side + b; break;
            case 1: base = a * side * side + b; break;
            default: base = (a * side + b) * side; break;
            }
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(-radius, -i);
                const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(radius, n - 1 - i);
                double acc = 0.0;
                for (std::ptrdiff_t k = lo; k <= hi; ++k) {
                    acc += kernel[static_cast<std::size_t>(k + radius)] *
                           in[base + static_cast<std::size_t>(i + k) * stride];
                }
                out[base + static_cast<std::size_t>(i) * stride] = acc;
            }
        }
    }
}

} // namespace

VoxelGrid::VoxelGrid(std::size_t channels, std::size_t side)
    : channels_(channels), side_(side) {
    require(channels >= 1 && side >= 1, "grid needs channels >= 1 and side >= 1");
    data_.assign(checked_volume(channels, side), 0.0);
}

VoxelGrid::VoxelGrid(std::size_t channels, std::size_t side,
                     std::vector<double> data)
    : channels_(channels), side_(side), data_(std::move(data)) {
    require(channels >= 1 && side >= 1, "grid needs channels >= 1 and side >= 1");
    require(data_.size() == checked_volume(channels, side),
            "grid data length must equal C*N^3");
    require(std::all_of(data_.begin(), data_.end(),
                        [](double v) { return std::isfinite(v); }),
            "grid values must be finite");
}

SynthKind parse_synth_kind(std::string_view name) {
    if (name == "sparse-atoms") return SynthKind::SparseAtoms;
    if (name == "uniform-noise") return SynthKind::UniformNoise;
    if (name == "zeros") return SynthKind::Zeros;
    fail(ErrorKind::InvalidParameter, "unknown grid kind '" + std::string(name) + "'");
}

std::string_view to_string(SynthKind kind) noexcept {
    switch (kind) {
    case SynthKind::SparseAtoms: return "sparse-atoms";
    case SynthKind::UniformNoise: return "uniform-noise";
    case SynthKind::Zeros: return "zeros";
    }
    return "unknown";
}

VoxelGrid synth_grid(std::size_t channels, std::size_t side,
                     std::uint64_t seed, SynthKind kind) {
    VoxelGrid grid(channels, side);
    if (kind == SynthKind::Zeros) {
        return grid;
    }
    const std::size_t volume = grid.voxels_per_channel();
    for (std::size_t c = 0; c < channels; ++c) {
        Rng rng(derive_seed(seed, c));
        auto values = grid.data().subspan(c * volume, volume);
        if (kind == SynthKind::UniformNoise) {
            for (double &v : values) {
                v = rng.uniform();
            }
            continue;
        }
        const std::size_t max_atoms = std::max<std::size_t>(1, volume / 64);
        const std::size_t atoms = 1 + rng.below(max_atoms);
        for (std::size_t a = 0; a < atoms; ++a) {
            const std::size_t at = rng.below(volume);
            values[at] += 1.0 - rng.uniform();
        }
    }
    return grid;
}

std::vector<double> gaussian_kernel(double sigma) {
    require(sigma > 0.0 && std::isfinite(sigma), "blur sigma must be > 0");
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (double &w : kernel) {
        w /= total;
    }
    return kernel;
}

VoxelGrid gaussian_blur(const VoxelGrid &grid, double sigma, int jobs) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    VoxelGrid out(grid.channels(), grid.side());
    const std::size_t volume = grid.voxels_per_channel();
    parallel_for(grid.channels(), jobs, [&](std::size_t c) {
        std::vector<double> a(grid.channel(c).begin(), grid.channel(c).end());
        std::vector<double> b(volume);
        convolve_axis(a, b, grid.side(), 0, kernel);
        convolve_axis(b, a, grid.side(), 1, kernel);
        convolve_axis(a, out.data().subspan(c * volume, volume), grid.side(), 2,
                      kernel);
    });
    return out;
}

std::size_t block_count(std::size_t channels, std::size_t side, std::size_t n) {
    require(n >= 1 && side % n == 0,
            "block side " + std::to_string(n) + " does not divide grid side " +
                std::to_string(side));
    const std::size_t per_axis = side / n;
    return channels * per_axis * per_axis * per_axis;
}

Block extract_block(const VoxelGrid &grid, std::size_t n, std::size_t index) {
    const std::size_t total = block_count(grid.channels(), grid.side(), n);
    require(index < total, "block index out of range");
    const std::size_t per_axis = grid.side() / n;
    Block block;
    block.index.bz = index % per_axis;
    block.index.by = (index / per_axis) % per_axis;
    block.index.bx = (index / (per_axis * per_axis)) % per_axis;
    block.index.channel = index / (per_axis * per_axis * per_axis);
    block.values.reserve(n * n * n);
    const auto &[c, bx, by, bz] = block.index;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                block.values.push_back(grid.at(c, bx * n + x, by * n + y, bz * n + z));
            }
        }
    }
    return block;
}

std::vector<Block> partition(const VoxelGrid &grid, std::size_t n) {
    const std::size_t total = block_count(grid.channels(), grid.side(), n);
    std::vector<Block> blocks;
    blocks.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        blocks.push_back(extract_block(grid, n, i));
    }
    return blocks;
}

VoxelGrid assemble(std::span<const Block> blocks, std::size_t channels,
                   std::size_t side, std::size_t n) {
    require(blocks.size() == block_count(channels, side, n),
            "block list does not tile the grid");
    VoxelGrid grid(channels, side);
    for (const Block &block : blocks) {
        require(block.values.size() == n * n * n, "block has wrong size");
        const auto &[c, bx, by, bz] = block.index;
        require(c < channels && (bx + 1) * n <= side && (by + 1) * n <= side &&
                    (bz + 1) * n <= side,
                "block index outside grid");
        std::size_t k = 0;
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                for (std::size_t z = 0; z < n; ++z) {
                    grid.at(c, bx * n + x, by * n + y, bz * n + z) = block.values[k++];
                }
            }
        }
    }
    return grid;
}

std::vector<std::uint8_t> encode_voxg(const VoxelGrid &grid) {
    require(grid.channels() <= UINT32_MAX && grid.side() <= UINT32_MAX,
            "grid too large for VOXG");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 4 * grid.data().size());
    for (std::uint8_t b : kMagic) {
        out.push_back(b);
    }
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(grid.channels()));
    put_u32(out, static_cast<std::uint32_t>(grid.side()));
    for (double v : grid.data()) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    return out;
}

VoxelGrid decode_voxg(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderBytes) {
        throw FormatError(bytes.size(), "truncated VOXG header");
    }
    if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw FormatError(0, "bad VOXG magic");
    }
    if (get_u32(bytes, 4) != kVersion) {
        throw FormatError(4, "unsupported VOXG version " +
                                 std::to_string(get_u32(bytes, 4)));
    }
    const std::uint32_t channels = get_u32(bytes, 8);
    const std::uint32_t side = get_u32(bytes, 12);
    if (channels == 0) {
        throw FormatError(8, "VOXG channel count is zero");
    }
    if (side == 0) {
        throw FormatError(12, "VOXG side is zero");
    }
    std::size_t count = 0;
    std::size_t payload = 0;
    if (__builtin_mul_overflow(std::size_t{side}, std::size_t{side}, &count) ||
        __builtin_mul_overflow(count, std::size_t{side}, &count) ||
        __builtin_mul_overflow(count, std::size_t{channels}, &count) ||
        __builtin_mul_overflow(count, std::size_t{4}, &payload)) {
        throw FormatError(8, "VOXG dimensions overflow");
    }
    if (bytes.size() - kHeaderBytes < payload) {
        throw FormatError(bytes.size(), "truncated VOXG payload: expected " +
                                            std::to_string(payload) + " bytes");
    }
    if (bytes.size() - kHeaderBytes > payload) {
        throw FormatError(kHeaderBytes + payload, "trailing bytes after VOXG payload");
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = kHeaderBytes + 4 * i;
        const float v = std::bit_cast<float>(get_u32(bytes, at));
        if (!std::isfinite(v)) {
            throw FormatError(at, "non-finite VOXG value");
        }
        data[i] = v;
    }
    return VoxelGrid(channels, side, std::move(data));
}

void write_grid(const VoxelGrid &grid, const std::filesystem::path &path) {
    const auto bytes = encode_voxg(grid);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        fail(ErrorKind::InvalidParameter, "cannot write " + path.string());
    }
}

VoxelGrid read_grid(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_voxg(bytes);
}

} // namespace qconv
