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
 * @file metrics.hpp Envelope detection, log compression and the resolution
 * (FWHM) and contrast (CNR) indices.
 *
 *****************************************************************************/
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pwica/model.hpp"

namespace pwica {

/// Magnitude of the analytic signal of every axial column (one-sided
/// spectrum doubling).
RFImage envelope(const RFImage& rf);

/// 20 log10(env / max env), clipped to [-dynamic_range, 0]. Throws when the
/// envelope has no positive value.
BModeImage bmode(const RFImage& env, double dynamic_range = 60.0);

/// Linear envelope recovered from a B-mode image (10^(dB/20)).
RFImage bmode_to_linear(const BModeImage& img);

enum class Axis { axial, lateral };
enum class FwhmScale { linear, db };

/// Width [samples] of the half-maximum crossing around profile[peak],
/// interpolated linearly between samples. `threshold` is the level that
/// defines the crossing (peak / 2 on a linear profile). Throws when the
/// profile does not drop below the threshold on both sides.
double crossing_width(std::span<const double> profile, std::size_t peak, double threshold);

/// FWHM [mm] of the strongest local maximum within `half_window` meters of
/// `target`, measured along `axis`. With FwhmScale::db the profile is
/// converted to dB and the -6.02 dB crossing is used.
double fwhm(const RFImage& env, Point2 target, double half_window, Axis axis,
		FwhmScale scale = FwhmScale::linear);

struct FwhmSummary {
	double axial_mm = 0.0;
	double lateral_mm = 0.0;
	std::size_t measured = 0;   // targets that produced both widths
};

/// Mean FWHM over all targets that can be measured.
FwhmSummary mean_fwhm(const RFImage& env, const std::vector<Point2>& targets,
		double half_window, FwhmScale scale = FwhmScale::linear);

enum class RegionRole { inside, outside };

struct RegionMask {
	ImageGrid grid;
	std::vector<std::uint8_t> mask;   // (z, x)
	RegionRole role = RegionRole::inside;

	std::size_t count() const;
};

RegionMask disc_mask(const ImageGrid& grid, Point2 center, double radius);
RegionMask annulus_mask(const ImageGrid& grid, Point2 center, double r_min, double r_max);

/// 20 log10(|mu_in - mu_out| / sqrt((s_in^2 + s_out^2) / 2)) with population
/// standard deviations. Throws when the ratio is undefined.
double cnr_from_values(std::span<const double> inside, std::span<const double> outside);

double cnr(const BModeImage& img, const RegionMask& inside, const RegionMask& outside);

/// Mean CNR over the dataset's cysts.
double mean_cnr(const BModeImage& img, const std::vector<CystRegion>& cysts);

/// Root mean square difference of two images on the same grid.
double rmse(std::span<const double> a, std::span<const double> b);

} // namespace pwica
