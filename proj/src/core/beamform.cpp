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
 *****************************************************************************/
#include "pwica/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "pwica/error.hpp"
#include "pwica/geometry.hpp"

namespace pwica {

void validate(const BeamformConfig& config)
{
	require(config.f_number > 0.0, "beamform: f-number must be positive");
	require(config.ica_crop_depth >= 0.0, "beamform: crop depth must be non-negative");
	if (config.window.kind == WindowKind::tukey)
		require(config.window.taper >= 0.0 && config.window.taper <= 1.0,
				"beamform: tukey taper must lie in [0, 1]");
}

namespace {

ApertureSpan full_span(std::size_t n)
{
	ApertureSpan s;
	s.first = 0;
	s.last = n - 1;
	s.nominal_first = 0;
	s.nominal_last = static_cast<long>(n) - 1;
	return s;
}

ImageGrid sub_grid(const ImageGrid& grid, const ObservationCrop& crop)
{
	ImageGrid g;
	g.x.assign(grid.x.begin() + static_cast<long>(crop.x_first),
			grid.x.begin() + static_cast<long>(crop.x_last) + 1);
	g.z.assign(grid.z.begin() + static_cast<long>(crop.z_first),
			grid.z.begin() + static_cast<long>(crop.z_last) + 1);
	return g;
}

} // namespace

DelayedCube delayed_channel_cube(const PlaneWaveAcquisition& acq, std::size_t angle_index,
		const ImageGrid& grid, const ProbeGeometry& probe, const BeamformConfig& config,
		bool apply_aperture)
{
	validate(config);
	require(angle_index < acq.n_angles(), "delayed cube: angle index out of range");
	require(acq.n_elements == probe.size(), "delayed cube: channel count differs from probe");

	const std::size_t n = probe.size();
	const std::size_t nx = grid.nx();
	const std::size_t nz = grid.nz();
	const std::size_t npix = nx * nz;

	DelayedCube cube;
	cube.grid = grid;
	cube.n_elements = n;
	cube.values.assign(n * npix, 0.0);
	cube.spans.resize(npix);

	const double angle = acq.angles[angle_index];
	std::vector<double> tx(npix);
	for (std::size_t iz = 0; iz < nz; ++iz) {
		for (std::size_t ix = 0; ix < nx; ++ix) {
			const std::size_t p = iz * nx + ix;
			tx[p] = transmit_distance(grid.x[ix], grid.z[iz], angle);
			cube.spans[p] = apply_aperture
					? active_aperture(grid.z[iz], config.f_number, probe, grid.x[ix])
					: full_span(n);
		}
	}

	const double inv_c = 1.0 / acq.sound_speed;
	const double fs = acq.sampling_rate;
	const double last = static_cast<double>(acq.n_samples - 1);
	for (std::size_t e = 0; e < n; ++e) {
		const auto trace = acq.trace(angle_index, e);
		const double xe = probe.element_x[e];
		double* plane = cube.values.data() + e * npix;
		for (std::size_t iz = 0; iz < nz; ++iz) {
			const double z = grid.z[iz];
			for (std::size_t ix = 0; ix < nx; ++ix) {
				const std::size_t p = iz * nx + ix;
				if (!cube.spans[p].contains(e))
					continue;
				const double tau = (tx[p] + receive_distance(grid.x[ix], z, xe)) * inv_c;
				const double s = (tau - acq.start_time) * fs;
				if (!(s >= 0.0) || s > last)
					continue;
				if (config.interpolation == Interpolation::nearest) {
					plane[p] = trace[static_cast<std::size_t>(std::lround(s))];
				} else {
					const auto i0 = static_cast<std::size_t>(s);
					const double frac = s - static_cast<double>(i0);
					plane[p] = (i0 + 1 < acq.n_samples)
							? trace[i0] + frac * (trace[i0 + 1] - trace[i0])
							: trace[i0];
				}
			}
		}
	}
	return cube;
}

std::vector<double> resample_profile(const std::vector<double>& weights, std::size_t count)
{
	require(!weights.empty() && count >= 1, "resample: empty input");
	const std::size_t len = weights.size();
	std::vector<double> out(count);
	if (len == 1) {
		std::fill(out.begin(), out.end(), weights[0]);
		return out;
	}
	const double span = static_cast<double>(len - 1);
	for (std::size_t j = 0; j < count; ++j) {
		const double u = (count == 1) ? 0.5 * span
				: span * static_cast<double>(j) / static_cast<double>(count - 1);
		auto i0 = static_cast<std::size_t>(std::floor(u));
		if (i0 >= len - 1)
			i0 = len - 2;
		const double t = u - static_cast<double>(i0);
		out[j] = weights[i0] + t * (weights[i0 + 1] - weights[i0]);
	}
	return out;
}

namespace {

std::vector<double> normalize_sum(std::vector<double> w)
{
	double sum = 0.0, l1 = 0.0;
	for (double v : w) {
		sum += v;
		l1 += std::abs(v);
	}
	// signed profiles can nearly cancel; fall back to the L1 norm then
	const double denom = (std::abs(sum) > 1e-3 * l1) ? sum : l1;
	if (denom != 0.0)
		for (double& v : w)
			v /= denom;
	return w;
}

} // namespace

ProfileMapping parse_profile_mapping(const std::string& name)
{
	if (name == "element")
		return ProfileMapping::element;
	if (name == "resample")
		return ProfileMapping::resample;
	if (name == "centered")
		return ProfileMapping::centered;
	fail(ErrorCode::invalid_argument,
			"unknown profile mapping '" + name + "' (expected element, resample or centered)");
}

std::string to_string(ProfileMapping mapping)
{
	switch (mapping) {
	case ProfileMapping::element: return "element";
	case ProfileMapping::resample: return "resample";
	case ProfileMapping::centered: return "centered";
	}
	return "unknown";
}

std::vector<double> center_profile(const std::vector<double>& weights, std::size_t count)
{
	require(!weights.empty() && count >= 1, "center: empty input");
	const auto len = static_cast<double>(weights.size());
	const double start = 0.5 * (len - 1.0) - 0.5 * (static_cast<double>(count) - 1.0);
	std::vector<double> out(count, 0.0);
	for (std::size_t j = 0; j < count; ++j) {
		const double u = start + static_cast<double>(j);
		if (u < 0.0 || u > len - 1.0)
			continue;
		const auto i0 = static_cast<std::size_t>(std::floor(u));
		const double t = u - static_cast<double>(i0);
		out[j] = (t == 0.0 || i0 + 1 >= weights.size()) ? weights[i0]
				: weights[i0] + t * (weights[i0 + 1] - weights[i0]);
	}
	return out;
}

std::vector<double> aperture_weights(const ProfileSource& source, const ApertureSpan& span,
		std::size_t n_elements, bool renormalize, ProfileMapping mapping)
{
	const std::size_t nominal = span.nominal_count();
	std::vector<double> full;
	if (const auto* spec = std::get_if<WindowSpec>(&source)) {
		full = make_window(*spec, nominal).weights;
	} else {
		const auto& profile = std::get<ApodizationProfile>(source);
		if (profile.size() != n_elements) {
			std::ostringstream os;
			os << "das: apodization profile has " << profile.size()
			   << " weights but the array has " << n_elements << " elements";
			fail(ErrorCode::invalid_argument, os.str());
		}
		if (mapping == ProfileMapping::element) {
			std::vector<double> w(profile.weights.begin() + static_cast<long>(span.first),
					profile.weights.begin() + static_cast<long>(span.last + 1));
			return renormalize ? normalize_sum(std::move(w)) : w;
		}
		full = mapping == ProfileMapping::resample ? resample_profile(profile.weights, nominal)
				: center_profile(profile.weights, nominal);
	}

	const auto offset = static_cast<std::size_t>(static_cast<long>(span.first) - span.nominal_first);
	std::vector<double> w(full.begin() + static_cast<long>(offset),
			full.begin() + static_cast<long>(offset + span.count()));
	return renormalize ? normalize_sum(std::move(w)) : w;
}

RFImage das(const DelayedCube& cube, const ProfileSource& source, const BeamformConfig& config)
{
	validate(config);
	const std::size_t nx = cube.grid.nx();
	const std::size_t nz = cube.grid.nz();
	const std::size_t npix = cube.pixels();

	RFImage img;
	img.grid = cube.grid;
	img.values.assign(npix, 0.0);

	// relative weights depend on (clip offset, count, nominal count); element
	// indexed weights on (first element, count)
	const bool by_element = std::holds_alternative<ApodizationProfile>(source)
			&& config.profile_mapping == ProfileMapping::element;
	std::map<std::tuple<long, std::size_t, std::size_t>, std::vector<double>> cache;
	for (std::size_t iz = 0; iz < nz; ++iz) {
		for (std::size_t ix = 0; ix < nx; ++ix) {
			const std::size_t p = iz * nx + ix;
			const ApertureSpan& span = cube.spans[p];
			const auto key = by_element
					? std::make_tuple(static_cast<long>(span.first), span.count(), std::size_t{0})
					: std::make_tuple(static_cast<long>(span.first) - span.nominal_first,
							span.count(), span.nominal_count());
			auto it = cache.find(key);
			if (it == cache.end())
				it = cache.emplace(key, aperture_weights(source, span, cube.n_elements,
						config.renormalize_per_depth, config.profile_mapping)).first;
			const std::vector<double>& w = it->second;
			double acc = 0.0;
			for (std::size_t k = 0; k < w.size(); ++k)
				acc += w[k] * cube.values[(span.first + k) * npix + p];
			img.values[p] = acc;
		}
	}
	return img;
}

LateralRange central_crop_region(const ImageGrid& grid, const ProbeGeometry& probe,
		double f_number, double max_depth)
{
	require(max_depth > 0.0, "crop: max depth must be positive");
	require(f_number > 0.0, "crop: f-number must be positive");
	const std::size_t n = probe.size();
	const std::size_t count = aperture_element_count(max_depth, f_number, probe.pitch);
	const std::size_t half = count / 2;
	if (count > n) {
		std::ostringstream os;
		os << "crop: the aperture at depth " << max_depth * 1e3 << " mm spans " << count
		   << " elements, wider than the " << n
		   << "-element array; use a larger f-number or a shallower crop depth";
		fail(ErrorCode::invalid_argument, os.str());
	}

	bool found = false;
	LateralRange range;
	const double tol = 0.5 * probe.pitch * (1.0 + 1e-9);
	for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
		const double x = grid.x[ix];
		const std::size_t c = probe.nearest_element(x);
		if (std::abs(x - probe.element_x[c]) > tol)
			continue;
		if (c < half || c + half > n - 1)
			continue;
		if (!found) {
			range.first = ix;
			found = true;
		}
		range.last = ix;
	}
	if (!found) {
		std::ostringstream os;
		os << "crop: no pixel has a full " << count << "-element aperture at depth "
		   << max_depth * 1e3 << " mm; use a larger f-number or a shallower crop depth";
		fail(ErrorCode::invalid_argument, os.str());
	}
	return range;
}

ObservationMatrix build_observation_matrix(const DelayedCube& cube, const ObservationCrop& crop)
{
	const std::size_t nx = cube.grid.nx();
	require(crop.x_first <= crop.x_last && crop.x_last < nx, "observation: lateral crop outside grid");
	require(crop.z_first <= crop.z_last && crop.z_last < cube.grid.nz(),
			"observation: axial crop outside grid");

	const std::size_t cols = crop.width() * crop.depth();
	std::vector<std::size_t> rows;
	for (std::size_t e = 0; e < cube.n_elements; ++e) {
		const auto plane = cube.element_plane(e);
		bool any = false;
		for (std::size_t iz = crop.z_first; iz <= crop.z_last && !any; ++iz)
			for (std::size_t ix = crop.x_first; ix <= crop.x_last; ++ix)
				if (plane[iz * nx + ix] != 0.0) {
					any = true;
					break;
				}
		if (any)
			rows.push_back(e);
	}

	ObservationMatrix obs;
	obs.row_element_map = rows;
	obs.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
	for (std::size_t r = 0; r < rows.size(); ++r) {
		const auto plane = cube.element_plane(rows[r]);
		Eigen::Index col = 0;
		for (std::size_t iz = crop.z_first; iz <= crop.z_last; ++iz)
			for (std::size_t ix = crop.x_first; ix <= crop.x_last; ++ix)
				obs.X(static_cast<Eigen::Index>(r), col++) = plane[iz * nx + ix];
	}
	return obs;
}

std::size_t zero_angle_index(const std::vector<double>& angles)
{
	require(!angles.empty(), "no steering angles");
	std::size_t best = 0;
	for (std::size_t i = 1; i < angles.size(); ++i)
		if (std::abs(angles[i]) < std::abs(angles[best]))
			best = i;
	return best;
}

std::vector<std::size_t> symmetric_angle_subset(const std::vector<double>& angles,
		std::size_t count)
{
	const std::size_t total = angles.size();
	require(count >= 1 && count <= total, "angle subset: count must lie in [1, number of angles]");
	std::vector<std::size_t> out;
	if (count == total) {
		for (std::size_t i = 0; i < total; ++i)
			out.push_back(i);
		return out;
	}
	require(count % 2 == 1, "angle subset: count must be odd to stay symmetric about 0");
	const std::size_t c = zero_angle_index(angles);
	const std::size_t half = (count - 1) / 2;
	if (half == 0)
		return {c};
	const std::size_t room = std::min(c, total - 1 - c);
	const std::size_t step = room / half;
	require(step >= 1, "angle subset: not enough angles on both sides of 0");
	for (std::size_t k = 0; k < count; ++k)
		out.push_back(c - half * step + k * step);
	return out;
}

IcaBeamformResult estimate_ica_profile(const PlaneWaveAcquisition& acq, const ImageGrid& grid,
		const ProbeGeometry& probe, const IcaConfig& ica_config, const BeamformConfig& config)
{
	validate(config);
	validate(ica_config);
	const double max_depth = config.ica_crop_depth > 0.0 ? config.ica_crop_depth : grid.z.back();
	const LateralRange lateral = central_crop_region(grid, probe, config.f_number, max_depth);

	ObservationCrop crop;
	crop.x_first = lateral.first;
	crop.x_last = lateral.last;
	crop.z_first = 0;
	std::size_t z_last = 0;
	bool any = false;
	for (std::size_t iz = 0; iz < grid.nz(); ++iz)
		if (grid.z[iz] <= max_depth * (1.0 + 1e-12)) {
			z_last = iz;
			any = true;
		}
	require(any, "ica: crop depth above the first image row");
	crop.z_last = z_last;

	IcaBeamformResult out;
	out.crop = crop;
	out.estimation_angle = zero_angle_index(acq.angles);
	const ImageGrid sub = sub_grid(grid, crop);
	const DelayedCube cube = delayed_channel_cube(acq, out.estimation_angle, sub, probe, config,
			config.observation_aperture == ObservationAperture::masked);
	ObservationCrop whole;
	whole.x_last = sub.nx() - 1;
	whole.z_last = sub.nz() - 1;
	const ObservationMatrix obs = build_observation_matrix(cube, whole);
	if (obs.cols() < obs.rows()) {
		std::ostringstream os;
		os << "ica: cropped region holds " << obs.cols() << " pixels, fewer than the "
		   << obs.rows() << " observation rows; enlarge the grid or the crop depth";
		fail(ErrorCode::invalid_argument, os.str());
	}
	out.ica = estimate_apodization(obs, ica_config, probe.size());
	if (!out.ica.converged && !config.allow_nonconverged) {
		std::ostringstream os;
		os << "ica: FastICA did not converge within " << ica_config.max_iterations
		   << " iterations (seed " << ica_config.seed << ")";
		fail(ErrorCode::not_converged, os.str());
	}
	return out;
}

IcaBeamformResult ica_beamform(const PlaneWaveAcquisition& acq, const ImageGrid& grid,
		const ProbeGeometry& probe, const IcaConfig& ica_config, const BeamformConfig& config,
		const std::vector<std::size_t>& angle_indices)
{
	require(!angle_indices.empty(), "ica: no angles selected");
	IcaBeamformResult out = estimate_ica_profile(acq, grid, probe, ica_config, config);

	std::vector<RFImage> frames;
	frames.reserve(angle_indices.size());
	for (std::size_t a : angle_indices) {
		const DelayedCube cube = delayed_channel_cube(acq, a, grid, probe, config);
		if (config.compound_reuse_zero_weights || a == out.estimation_angle) {
			frames.push_back(das(cube, out.ica.w_aperture, config));
		} else {
			PlaneWaveAcquisition single = PlaneWaveAcquisition::zeros({acq.angles[a]},
					acq.n_elements, acq.n_samples, acq.sampling_rate, acq.sound_speed,
					acq.start_time);
			const auto first = acq.trace(a, 0).begin();
			std::copy(first, first + static_cast<long>(acq.n_elements * acq.n_samples),
					single.samples.begin());
			const auto per_angle = estimate_ica_profile(single, grid, probe, ica_config, config);
			frames.push_back(das(cube, per_angle.ica.w_aperture, config));
		}
	}
	out.image = compound(frames);
	return out;
}

RFImage coherence_factor_image(const DelayedCube& cube)
{
	const std::size_t npix = cube.pixels();
	RFImage cf;
	cf.grid = cube.grid;
	cf.values.assign(npix, 0.0);
	for (std::size_t p = 0; p < npix; ++p) {
		const ApertureSpan& span = cube.spans[p];
		double sum = 0.0, energy = 0.0;
		for (std::size_t e = span.first; e <= span.last; ++e) {
			const double v = cube.values[e * npix + p];
			sum += v;
			energy += v * v;
		}
		const double denom = static_cast<double>(span.count()) * energy;
		cf.values[p] = denom > 0.0 ? std::clamp(sum * sum / denom, 0.0, 1.0) : 0.0;
	}
	return cf;
}

RFImage cf_das(const DelayedCube& cube, const BeamformConfig& config)
{
	RFImage img = das(cube, WindowSpec{WindowKind::boxcar, 0.0}, config);
	const RFImage cf = coherence_factor_image(cube);
	for (std::size_t p = 0; p < img.values.size(); ++p)
		img.values[p] *= cf.values[p];
	return img;
}

RFImage compound(const std::vector<RFImage>& images)
{
	require(!images.empty(), "compound: no images");
	RFImage out = images.front();
	for (std::size_t i = 1; i < images.size(); ++i) {
		if (!(images[i].grid == out.grid) || images[i].values.size() != out.values.size())
			fail(ErrorCode::invalid_argument, "compound: images are on different grids");
		for (std::size_t p = 0; p < out.values.size(); ++p)
			out.values[p] += images[i].values[p];
	}
	const double inv = 1.0 / static_cast<double>(images.size());
	if (images.size() > 1)
		for (double& v : out.values)
			v *= inv;
	return out;
}

Method parse_method(const std::string& name)
{
	if (name == "das")
		return Method::das;
	if (name == "cf")
		return Method::cf;
	if (name == "ica")
		return Method::ica;
	fail(ErrorCode::invalid_argument, "unknown method '" + name + "' (expected das, cf or ica)");
}

std::string to_string(Method method)
{
	switch (method) {
	case Method::das: return "das";
	case Method::cf: return "cf";
	case Method::ica: return "ica";
	}
	return "unknown";
}

BeamformOutput beamform(const Dataset& dataset, Method method,
		const std::vector<std::size_t>& angle_indices, const BeamformConfig& config,
		const IcaConfig& ica_config)
{
	require(!angle_indices.empty(), "beamform: no angles selected");
	const auto& acq = dataset.acquisition;
	for (std::size_t a : angle_indices)
		require(a < acq.n_angles(), "beamform: angle index out of range");

	BeamformOutput out;
	out.angle_indices = angle_indices;
	if (method == Method::ica) {
		auto r = ica_beamform(acq, dataset.grid, dataset.probe, ica_config, config, angle_indices);
		out.image = std::move(r.image);
		out.ica = std::move(r.ica);
		return out;
	}

	std::vector<RFImage> frames;
	frames.reserve(angle_indices.size());
	for (std::size_t a : angle_indices) {
		const DelayedCube cube = delayed_channel_cube(acq, a, dataset.grid, dataset.probe, config);
		if (method == Method::das)
			frames.push_back(das(cube, config.window, config));
		else
			frames.push_back(cf_das(cube, config));
	}
	out.image = compound(frames);
	return out;
}

} // namespace pwica
