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

#pragma once

/**
 * @file
 * C-channel cubic voxel grids: generation, Gaussian blur, block partition
 * and the VOXG file format.
 *
 * VOXG layout (little-endian): magic "VOXG", u32 version (=1), u32 C, u32 N,
 * followed by C*N^3 float32 values in (c, x, y, z) row-major order.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace qconv {

class VoxelGrid {
public:
    VoxelGrid() = default;
    /// Zero-filled grid. Throws invalid-parameter if channels or side is 0.
    VoxelGrid(std::size_t channels, std::size_t side);
    /// Takes ownership of `data`, which must hold channels*side^3 finite values.
    VoxelGrid(std::size_t channels, std::size_t side, std::vector<double> data);

    std::size_t channels() const noexcept { return channels_; }
    std::size_t side() const noexcept { return side_; }
    std::size_t voxels_per_channel() const noexcept {
        return side_ * side_ * side_;
    }

    std::size_t index(std::size_t c, std::size_t x, std::size_t y,
                      std::size_t z) const noexcept {
        return ((c * side_ + x) * side_ + y) * side_ + z;
    }
    double &at(std::size_t c, std::size_t x, std::size_t y, std::size_t z) {
        return data_[index(c, x, y, z)];
    }
    double at(std::size_t c, std::size_t x, std::size_t y,
              std::size_t z) const {
        return data_[index(c, x, y, z)];
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> channel(std::size_t c) const noexcept {
        return std::span<const double>(data_).subspan(c * voxels_per_channel(),
                                                      voxels_per_channel());
    }

    friend bool operator==(const VoxelGrid &, const VoxelGrid &) = default;

private:
    std::size_t channels_ = 0;
    std::size_t side_ = 0;
    std::vector<double> data_;
};

enum class SynthKind { SparseAtoms, UniformNoise, Zeros };

/// Parses "sparse-atoms", "uniform-noise" or "zeros".
SynthKind parse_synth_kind(std::string_view name);
std::string_view to_string(SynthKind kind) noexcept;

/// Deterministic synthetic grid. SparseAtoms drops a seeded number of point
/// masses (mass in (0, 1]) per channel and returns the unblurred grid.
VoxelGrid synth_grid(std::size_t channels, std::size_t side,
                     std::uint64_t seed, SynthKind kind);

/// Separable 3D Gaussian blur per channel. The kernel is truncated at radius
/// ceil(3 sigma) and renormalized to unit sum; voxels outside the box are
/// treated as zero.
VoxelGrid gaussian_blur(const VoxelGrid &grid, double sigma, int jobs = 1);

/// Normalized 1D kernel used by gaussian_blur, taps -R..R.
std::vector<double> gaussian_kernel(double sigma);

struct BlockIndex {
    std::size_t channel = 0;
    std::size_t bx = 0;
    std::size_t by = 0;
    std::size_t bz = 0;

    friend bool operator==(const BlockIndex &, const BlockIndex &) = default;
};

struct Block {
    BlockIndex index;
    /// n^3 values, (x, y, z) row-major within the block.
    std::vector<double> values;
};

/// Number of blocks produced by partition; throws if n does not divide N.
std::size_t block_count(std::size_t channels, std::size_t side, std::size_t n);

/// Splits the grid into n^3 blocks in (channel, bx, by, bz) row-major order.
std::vector<Block> partition(const VoxelGrid &grid, std::size_t n);

/// Copies the `index`-th block (partition order) without materializing the rest.
Block extract_block(const VoxelGrid &grid, std::size_t n, std::size_t index);

/// Inverse of partition.
VoxelGrid assemble(std::span<const Block> blocks, std::size_t channels,
                   std::size_t side, std::size_t n);

std::vector<std::uint8_t> encode_voxg(const VoxelGrid &grid);
/// Throws FormatError with the offending byte offset.
VoxelGrid decode_voxg(std::span<const std::uint8_t> bytes);

void write_grid(const VoxelGrid &grid, const std::filesystem::path &path);
VoxelGrid read_grid(const std::filesystem::path &path);

} // namespace qconv
