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
 * @file model.hpp Domain types shared by every stage of the pipeline. All
 * quantities are SI (meters, seconds, Hz, radians).
 *
 *****************************************************************************/
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pwica {

/// Linear array laid out on the x axis, symmetric about x = 0.
struct ProbeGeometry {
	std::vector<double> element_x;
	double pitch = 0.0;

	std::size_t size() const noexcept { return element_x.size(); }

	/// Index of the element closest to lateral position x. Ties resolve to
	/// the lower index.
	std::size_t nearest_element(double x) const;

	static ProbeGeometry linear(std::size_t n_elements, double pitch);
};

/// Per-angle, per-element sampled echo traces.
struct PlaneWaveAcquisition {
	std::vector<double> angles;         // steering angles [rad]
	std::size_t n_elements = 0;
	std::size_t n_samples = 0;
	std::vector<double> samples;        // (angle, element, sample), sample fastest
	double sampling_rate = 0.0;         // [Hz]
	double sound_speed = 0.0;           // [m/s]
	double start_time = 0.0;            // time of sample 0 [s]

	std::size_t n_angles() const noexcept { return angles.size(); }

	std::span<const double> trace(std::size_t angle, std::size_t element) const
	{
		return {samples.data() + (angle * n_elements + element) * n_samples, n_samples};
	}
	std::span<double> trace(std::size_t angle, std::size_t element)
	{
		return {samples.data() + (angle * n_elements + element) * n_samples, n_samples};
	}

	/// Zero-filled acquisition with the given shape.
	static PlaneWaveAcquisition zeros(std::vector<double> angles, std::size_t n_elements,
			std::size_t n_samples, double sampling_rate, double sound_speed,
			double start_time = 0.0);
};

/// Pixel centers of an image. Both axes are uniform and strictly increasing.
struct ImageGrid {
	std::vector<double> x;
	std::vector<double> z;

	std::size_t nx() const noexcept { return x.size(); }
	std::size_t nz() const noexcept { return z.size(); }
	std::size_t size() const noexcept { return x.size() * z.size(); }
	double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
	double dz() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }

	static ImageGrid uniform(double x0, double x1, double dx, double z0, double z1, double dz);

	friend bool operator==(const ImageGrid&, const ImageGrid&) = default;
};

/// Contiguous run of active receive elements for one pixel. The nominal span
/// is the full symmetric aperture before clamping to the physical array and
/// may extend past either end.
struct ApertureSpan {
	std::size_t first = 0;   // inclusive
	std::size_t last = 0;    // inclusive
	long nominal_first = 0;
	long nominal_last = 0;

	std::size_t count() const noexcept { return last - first + 1; }
	std::size_t nominal_count() const noexcept
	{
		return static_cast<std::size_t>(nominal_last - nominal_first + 1);
	}
	bool contains(std::size_t e) const noexcept { return e >= first && e <= last; }
	bool clamped() const noexcept
	{
		return nominal_first != static_cast<long>(first) || nominal_last != static_cast<long>(last);
	}
};

/// Per-element RF values resampled onto the image grid, R_i(x, z). Values of
/// elements outside a pixel's active aperture are exactly zero.
struct DelayedCube {
	ImageGrid grid;
	std::size_t n_elements = 0;
	std::vector<double> values;       // (element, z, x), x fastest
	std::vector<ApertureSpan> spans;  // (z, x)

	std::size_t pixels() const noexcept { return grid.size(); }
	double at(std::size_t e, std::size_t iz, std::size_t ix) const
	{
		return values[(e * grid.nz() + iz) * grid.nx() + ix];
	}
	std::span<const double> element_plane(std::size_t e) const
	{
		return {values.data() + e * pixels(), pixels()};
	}
	const ApertureSpan& span(std::size_t iz, std::size_t ix) const
	{
		return spans[iz * grid.nx() + ix];
	}
	bool active(std::size_t e, std::size_t iz, std::size_t ix) const
	{
		return span(iz, ix).contains(e);
	}
};

enum class Normalization { raw, peak, l1 };

/// Weight vector across the receive aperture.
struct ApodizationProfile {
	std::vector<double> weights;
	Normalization normalization = Normalization::raw;

	std::size_t size() const noexcept { return weights.size(); }

	/// Unit L1 norm, sign fixed so the center weight is non-negative. When the
	/// center weight is negligible the largest-magnitude weight is made
	/// positive instead.
	ApodizationProfile canonicalized() const;
};

/// Beamformed RF image, values indexed (z, x) with x fastest.
struct RFImage {
	ImageGrid grid;
	std::vector<double> values;

	double at(std::size_t iz, std::size_t ix) const { return values[iz * grid.nx() + ix]; }
	double& at(std::size_t iz, std::size_t ix) { return values[iz * grid.nx() + ix]; }
};

/// Log-compressed image in dB; max is 0 and the floor is -dynamic_range.
struct BModeImage {
	ImageGrid grid;
	std::vector<double> values;
	double dynamic_range = 60.0;

	double at(std::size_t iz, std::size_t ix) const { return values[iz * grid.nx() + ix]; }
};

struct Point2 {
	double x = 0.0;
	double z = 0.0;
	friend bool operator==(const Point2&, const Point2&) = default;
};

/// Anechoic cyst plus the radii of its evaluation regions: the inside mask
/// is the disc of inner_radius, the outside mask the annulus
/// [outer_min, outer_max].
struct CystRegion {
	Point2 center;
	double radius = 0.0;
	double inner_radius = 0.0;
	double outer_min = 0.0;
	double outer_max = 0.0;
	friend bool operator==(const CystRegion&, const CystRegion&) = default;
};

/// Everything the pipeline needs about one recording.
struct Dataset {
	std::string name;
	std::string layout;   // point_grid, speckle, anechoic_cyst_in_speckle, points_in_speckle, ...
	std::uint64_t seed = 0;
	ProbeGeometry probe;
	PlaneWaveAcquisition acquisition;
	ImageGrid grid;
	std::vector<Point2> point_targets;
	std::vector<CystRegion> cysts;
	double center_frequency = 0.0;   // [Hz], 0 if unknown
};

/// Throws Error(invalid_argument) naming the first violated invariant.
void validate(const ProbeGeometry& probe);
void validate(const PlaneWaveAcquisition& acq);
void validate(const ImageGrid& grid);
const Dataset& validate(const Dataset& dataset);

} // namespace pwica
