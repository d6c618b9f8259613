/******************************************************************************
 * Copyright 2026 The pwica Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * @file io.hpp Dataset ingestion and image emission.
 *
 * Native datasets are a directory holding `metadata.json` (probe, angles,
 * timing, grid and evaluation regions, SI units) and `channels.f32`, the
 * traces as little-endian float32 in (angle, element, sample) order.
 *
 *****************************************************************************/
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "pwica/model.hpp"

namespace pwica {

inline constexpr const char* kMetadataFile = "metadata.json";
inline constexpr const char* kChannelFile = "channels.f32";

void write_native(const Dataset& dataset, const std::filesystem::path& dir);

/// Reads and validates a native dataset. Throws Error(io) when files are
/// missing and Error(format) when they are inconsistent.
Dataset read_native(const std::filesystem::path& dir);

/// Metadata document of a dataset (everything except the traces).
nlohmann::json metadata_json(const Dataset& dataset);

struct ChallengeFiles {
	std::filesystem::path rf;                        // RF channel data
	std::optional<std::filesystem::path> scan;       // x_axis / z_axis
	std::optional<std::filesystem::path> phantom;   // point / occlusion ground truth
};

/// Reads a plane-wave challenge recording stored in the HDF5 layout
/// /US/US_DATASET0000/{angles, data/real, data/imag, probe_geometry,
/// sampling_frequency, sound_speed, initial_time, modulation_frequency}.
/// IQ recordings (non-zero modulation frequency) are rejected. Without a
/// scan file a lambda/2 x lambda/4 grid over the array width is used.
Dataset read_challenge_dataset(const ChallengeFiles& files);

enum class ImageFormat { pgm, png, csv };

/// Format from the file extension (.pgm, .png, .csv).
ImageFormat image_format_for(const std::filesystem::path& path);

/// 8-bit formats map [-dynamic_range, 0] dB onto [0, 255]; rows run in
/// increasing depth. The CSV variant keeps dB values to 6 significant digits
/// and carries the grid coordinates.
void write_image(const BModeImage& image, const std::filesystem::path& path, ImageFormat format);

/// Reads the CSV variant written by write_image.
BModeImage read_image_csv(const std::filesystem::path& path);

} // namespace pwica
