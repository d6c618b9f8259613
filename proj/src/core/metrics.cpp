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
#include "pwica/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "fftw3.h"

#include "pwica/error.hpp"

namespace pwica {

RFImage envelope(const RFImage& rf)
{
	const std::size_t nx = rf.grid.nx();
	const std::size_t nz = rf.grid.nz();
	require(rf.values.size() == nx * nz, "envelope: image size does not match its grid");

	RFImage env;
	env.grid = rf.grid;
	env.values.assign(rf.values.size(), 0.0);
	if (nz == 0 || nx == 0)
		return env;

	std::vector<std::complex<double>> buf(nz);
	auto* data = reinterpret_cast<fftw_complex*>(buf.data());
	const int n = static_cast<int>(nz);
	fftw_plan fwd = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
	fftw_plan bwd = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);

	// one-sided spectrum: keep DC (and Nyquist), double positive frequencies
	std::vector<double> h(nz, 0.0);
	h[0] = 1.0;
	if (nz % 2 == 0) {
		h[nz / 2] = 1.0;
		for (std::size_t k = 1; k < nz / 2; ++k)
			h[k] = 2.0;
	} else {
		for (std::size_t k = 1; k < (nz + 1) / 2; ++k)
			h[k] = 2.0;
	}
	const double inv_n = 1.0 / static_cast<double>(nz);

	for (std::size_t ix = 0; ix < nx; ++ix) {
		for (std::size_t iz = 0; iz < nz; ++iz)
			buf[iz] = {rf.values[iz * nx + ix], 0.0};
		fftw_execute(fwd);
		for (std::size_t k = 0; k < nz; ++k)
			buf[k] *= h[k];
		fftw_execute(bwd);
		for (std::size_t iz = 0; iz < nz; ++iz)
			env.values[iz * nx + ix] = std::abs(buf[iz]) * inv_n;
	}
	fftw_destroy_plan(fwd);
	fftw_destroy_plan(bwd);
	return env;
}

BModeImage bmode(const RFImage& env, double dynamic_range)
{
	require(dynamic_range > 0.0, "bmode: dynamic range must be positive");
	const double peak = env.values.empty() ? 0.0
			: *std::max_element(env.values.begin(), env.values.end());
	require(peak > 0.0, "bmode: envelope has no positive value");
	BModeImage img;
	img.grid = env.grid;
	img.dynamic_range = dynamic_range;
	img.values.resize(env.values.size());
	for (std::size_t p = 0; p < env.values.size(); ++p) {
		const double v = env.values[p];
		const double db = v > 0.0 ? 20.0 * std::log10(v / peak) : -dynamic_range;
		img.values[p] = std::clamp(db, -dynamic_range, 0.0);
	}
	return img;
}

RFImage bmode_to_linear(const BModeImage& img)
{
	RFImage env;
	env.grid = img.grid;
	env.values.resize(img.values.size());
	for (std::size_t p = 0; p < img.values.size(); ++p)
		env.values[p] = std::pow(10.0, img.values[p] / 20.0);
	return env;
}

double crossing_width(std::span<const double> profile, std::size_t peak, double threshold)
{
	require(peak < profile.size(), "fwhm: peak index outside profile");
	require(profile[peak] > threshold, "fwhm: peak does not exceed the threshold");

	double left = 0.0;
	bool found = false;
	for (std::size_t k = peak; k > 0; --k) {
		if (profile[k - 1] < threshold) {
			const double a = profile[k];
			const double b = profile[k - 1];
			left = static_cast<double>(k) - (a - threshold) / (a - b);
			found = true;
			break;
		}
	}
	if (!found)
		fail(ErrorCode::invalid_argument, "fwhm: profile does not fall to half maximum on the left");

	double right = 0.0;
	found = false;
	for (std::size_t k = peak; k + 1 < profile.size(); ++k) {
		if (profile[k + 1] < threshold) {
			const double a = profile[k];
			const double b = profile[k + 1];
			right = static_cast<double>(k) + (a - threshold) / (a - b);
			found = true;
			break;
		}
	}
	if (!found)
		fail(ErrorCode::invalid_argument, "fwhm: profile does not fall to half maximum on the right");
	return right - left;
}

namespace {

struct IndexRange {
	std::size_t first = 0;
	std::size_t last = 0;
	bool empty = true;
};

IndexRange window_indices(const std::vector<double>& axis, double center, double half)
{
	IndexRange r;
	for (std::size_t i = 0; i < axis.size(); ++i) {
		if (std::abs(axis[i] - center) <= half) {
			if (r.empty)
				r.first = i;
			r.last = i;
			r.empty = false;
		}
	}
	return r;
}

} // namespace

double fwhm(const RFImage& env, Point2 target, double half_window, Axis axis, FwhmScale scale)
{
	const auto& g = env.grid;
	const IndexRange rx = window_indices(g.x, target.x, half_window);
	const IndexRange rz = window_indices(g.z, target.z, half_window);
	if (rx.empty || rz.empty)
		fail(ErrorCode::invalid_argument, "fwhm: target neighborhood lies outside the image");

	std::size_t bz = rz.first, bx = rx.first;
	double best = -1.0;
	for (std::size_t iz = rz.first; iz <= rz.last; ++iz)
		for (std::size_t ix = rx.first; ix <= rx.last; ++ix)
			if (env.at(iz, ix) > best) {
				best = env.at(iz, ix);
				bz = iz;
				bx = ix;
			}
	if (!(best > 0.0))
		fail(ErrorCode::invalid_argument, "fwhm: no peak in the target neighborhood");

	std::vector<double> profile;
	std::size_t peak = 0;
	double spacing = 0.0;
	if (axis == Axis::axial) {
		for (std::size_t iz = rz.first; iz <= rz.last; ++iz)
			profile.push_back(env.at(iz, bx));
		peak = bz - rz.first;
		spacing = g.dz();
	} else {
		for (std::size_t ix = rx.first; ix <= rx.last; ++ix)
			profile.push_back(env.at(bz, ix));
		peak = bx - rx.first;
		spacing = g.dx();
	}

	double threshold = 0.5 * best;
	if (scale == FwhmScale::db) {
		for (double& v : profile)
			v = v > 0.0 ? 20.0 * std::log10(v / best) : -400.0;
		threshold = 20.0 * std::log10(0.5);
	}
	return crossing_width(profile, peak, threshold) * spacing * 1e3;
}

FwhmSummary mean_fwhm(const RFImage& env, const std::vector<Point2>& targets,
		double half_window, FwhmScale scale)
{
	FwhmSummary s;
	double ax = 0.0, lat = 0.0;
	for (const auto& t : targets) {
		try {
			const double a = fwhm(env, t, half_window, Axis::axial, scale);
			const double l = fwhm(env, t, half_window, Axis::lateral, scale);
			ax += a;
			lat += l;
			++s.measured;
		} catch (const Error&) {
			// target outside the image or not resolved
		}
	}
	if (s.measured == 0)
		fail(ErrorCode::invalid_argument, "fwhm: no point target could be measured");
	s.axial_mm = ax / static_cast<double>(s.measured);
	s.lateral_mm = lat / static_cast<double>(s.measured);
	return s;
}

std::size_t RegionMask::count() const
{
	return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

RegionMask disc_mask(const ImageGrid& grid, Point2 center, double radius)
{
	return annulus_mask(grid, center, -1.0, radius);
}

RegionMask annulus_mask(const ImageGrid& grid, Point2 center, double r_min, double r_max)
{
	RegionMask m;
	m.grid = grid;
	m.role = r_min < 0.0 ? RegionRole::inside : RegionRole::outside;
	m.mask.assign(grid.size(), 0);
	for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
		for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
			const double dx = grid.x[ix] - center.x;
			const double dz = grid.z[iz] - center.z;
			const double r = std::sqrt(dx * dx + dz * dz);
			if (r <= r_max && r > r_min)
				m.mask[iz * grid.nx() + ix] = 1;
		}
	}
	return m;
}

double cnr_from_values(std::span<const double> inside, std::span<const double> outside)
{
	require(!inside.empty() && !outside.empty(), "cnr: empty region");
	auto stats = [](std::span<const double> v) {
		double mean = 0.0;
		for (double x : v)
			mean += x;
		mean /= static_cast<double>(v.size());
		double var = 0.0;
		for (double x : v)
			var += (x - mean) * (x - mean);
		var /= static_cast<double>(v.size());
		return std::pair{mean, var};
	};
	const auto [mu_in, var_in] = stats(inside);
	const auto [mu_out, var_out] = stats(outside);
	const double diff = std::abs(mu_in - mu_out);
	const double spread = std::sqrt(0.5 * (var_in + var_out));
	if (!(spread > 0.0) || !(diff > 0.0)) {
		std::ostringstream os;
		os << "cnr: undefined (mean difference " << diff << ", pooled spread " << spread << ")";
		fail(ErrorCode::invalid_argument, os.str());
	}
	return 20.0 * std::log10(diff / spread);
}

double cnr(const BModeImage& img, const RegionMask& inside, const RegionMask& outside)
{
	require(inside.mask.size() == img.values.size() && outside.mask.size() == img.values.size(),
			"cnr: masks do not match the image grid");
	std::vector<double> vin, vout;
	for (std::size_t p = 0; p < img.values.size(); ++p) {
		require(!(inside.mask[p] && outside.mask[p]), "cnr: inside and outside masks overlap");
		if (inside.mask[p])
			vin.push_back(img.values[p]);
		else if (outside.mask[p])
			vout.push_back(img.values[p]);
	}
	return cnr_from_values(vin, vout);
}

double mean_cnr(const BModeImage& img, const std::vector<CystRegion>& cysts)
{
	require(!cysts.empty(), "cnr: dataset has no cyst regions");
	double sum = 0.0;
	for (const auto& c : cysts) {
		const RegionMask in = disc_mask(img.grid, c.center, c.inner_radius);
		const RegionMask out = annulus_mask(img.grid, c.center, c.outer_min, c.outer_max);
		require(in.count() > 0 && out.count() > 0, "cnr: cyst region falls outside the image");
		sum += cnr(img, in, out);
	}
	return sum / static_cast<double>(cysts.size());
}

double rmse(std::span<const double> a, std::span<const double> b)
{
	require(a.size() == b.size() && !a.empty(), "rmse: size mismatch");
	double acc = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i)
		acc += (a[i] - b[i]) * (a[i] - b[i]);
	return std::sqrt(acc / static_cast<double>(a.size()));
}

} // namespace pwica
