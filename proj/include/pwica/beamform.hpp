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
 * @file beamform.hpp Receive beamforming for plane-wave data: delayed
 * channel cube, weighted delay-and-sum with a dynamic F-number aperture,
 * ICA-estimated apodization, coherence-factor weighting and coherent
 * compounding.
 *
 *****************************************************************************/
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pwica/fastica.hpp"
#include "pwica/model.hpp"
#include "pwica/windows.hpp"

namespace pwica {

enum class Interpolation { nearest, linear };

/// How observation rows are formed for ICA. `masked` uses the F-number
/// aperture of the delayed cube (elements outside a pixel's aperture are 0);
/// `full` uses every element at every cropped pixel.
enum class ObservationAperture { masked, full };

/// How a full-length estimated profile is applied to a pixel's aperture.
/// `element`: each active element i keeps its own weight w(i).
/// `resample`: the whole profile is stretched onto the nominal aperture.
/// `centered`: the central run of weights at element spacing is laid onto
/// the nominal aperture (linear interpolation at half-element offsets).
enum class ProfileMapping { element, resample, centered };

ProfileMapping parse_profile_mapping(const std::string& name);
std::string to_string(ProfileMapping mapping);

struct BeamformConfig {
	double f_number = 1.75;
	WindowSpec window;                        // parametric window, Tukey 0.25 by default
	Interpolation interpolation = Interpolation::linear;
	bool compound_reuse_zero_weights = true;
	bool renormalize_per_depth = true;        // unit weight sum per pixel aperture
	bool allow_nonconverged = false;
	ObservationAperture observation_aperture = ObservationAperture::full;
	double ica_crop_depth = 0.0;              // deepest cropped pixel [m]; 0 = whole grid
	ProfileMapping profile_mapping = ProfileMapping::element;
};

void validate(const BeamformConfig& config);

/// Delayed RF values R_i(x, z) = h_i(tau) for one steering angle. Samples
/// whose delay falls outside the recorded window are 0. When
/// `apply_aperture` is false every element is active at every pixel.
DelayedCube delayed_channel_cube(const PlaneWaveAcquisition& acq, std::size_t angle_index,
		const ImageGrid& grid, const ProbeGeometry& probe, const BeamformConfig& config,
		bool apply_aperture = true);

using ProfileSource = std::variant<WindowSpec, ApodizationProfile>;

/// Per-pixel weights over the active aperture of `span`. A parametric window
/// is generated at the nominal aperture length; an explicit profile is
/// fitted to it according to `mapping`. Elements clipped by the array edge
/// are dropped. The result has span.count() entries, normalized to unit sum
/// when `renormalize` is set.
std::vector<double> aperture_weights(const ProfileSource& source, const ApertureSpan& span,
		std::size_t n_elements, bool renormalize,
		ProfileMapping mapping = ProfileMapping::resample);

/// Linear resampling of a profile onto `count` equally spaced points
/// covering the same support.
std::vector<double> resample_profile(const std::vector<double>& weights, std::size_t count);

/// The `count` weights centered on the middle of the profile, at the
/// profile's own spacing.
std::vector<double> center_profile(const std::vector<double>& weights, std::size_t count);

/// Weighted summation over each pixel's active aperture.
RFImage das(const DelayedCube& cube, const ProfileSource& source, const BeamformConfig& config);

struct LateralRange {
	std::size_t first = 0;   // inclusive pixel indices
	std::size_t last = 0;
	std::size_t size() const noexcept { return last - first + 1; }
};

/// Widest run of lateral pixels whose full symmetric aperture at max_depth
/// lies on the array. Throws invalid_argument when no pixel qualifies.
LateralRange central_crop_region(const ImageGrid& grid, const ProbeGeometry& probe,
		double f_number, double max_depth);

struct ObservationCrop {
	std::size_t x_first = 0, x_last = 0;
	std::size_t z_first = 0, z_last = 0;
	std::size_t width() const noexcept { return x_last - x_first + 1; }
	std::size_t depth() const noexcept { return z_last - z_first + 1; }
};

/// Stacks the cropped, row-major vectorized slice of each element as a row.
/// Elements whose cropped slice is identically zero are left out of the
/// matrix (and of its row map).
ObservationMatrix build_observation_matrix(const DelayedCube& cube, const ObservationCrop& crop);

struct IcaBeamformResult {
	RFImage image;
	IcaResult ica;
	std::size_t estimation_angle = 0;   // acquisition index the profile came from
	ObservationCrop crop;
};

/// Estimates the apodization once from the acquisition angle closest to 0
/// and applies it throughout the image for every angle in angle_indices,
/// compounding the results. Throws Error(not_converged) when ICA does not
/// converge, unless config.allow_nonconverged is set.
IcaBeamformResult ica_beamform(const PlaneWaveAcquisition& acq, const ImageGrid& grid,
		const ProbeGeometry& probe, const IcaConfig& ica_config, const BeamformConfig& config,
		const std::vector<std::size_t>& angle_indices);

/// Estimation step of ica_beamform on its own.
IcaBeamformResult estimate_ica_profile(const PlaneWaveAcquisition& acq, const ImageGrid& grid,
		const ProbeGeometry& probe, const IcaConfig& ica_config, const BeamformConfig& config);

/// |sum R_i|^2 / (K sum R_i^2) over the K active elements of each pixel;
/// 0 where the denominator vanishes.
RFImage coherence_factor_image(const DelayedCube& cube);

/// Boxcar DAS multiplied pixel-wise by the coherence factor.
RFImage cf_das(const DelayedCube& cube, const BeamformConfig& config);

/// Pixel-wise mean of images sharing a grid.
RFImage compound(const std::vector<RFImage>& images);

/// Index of the acquisition angle closest to 0.
std::size_t zero_angle_index(const std::vector<double>& angles);

/// `count` acquisition indices symmetric about the 0-degree index with the
/// widest uniform index step that fits. count must be odd or equal to the
/// number of angles.
std::vector<std::size_t> symmetric_angle_subset(const std::vector<double>& angles,
		std::size_t count);

enum class Method { das, cf, ica };

Method parse_method(const std::string& name);
std::string to_string(Method method);

struct BeamformOutput {
	RFImage image;
	std::optional<IcaResult> ica;
	std::vector<std::size_t> angle_indices;
};

/// Full pipeline on one dataset for a method and a set of angles.
BeamformOutput beamform(const Dataset& dataset, Method method,
		const std::vector<std::size_t>& angle_indices, const BeamformConfig& config,
		const IcaConfig& ica_config);

} // namespace pwica
