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
#include "pwica/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwica/error.hpp"

namespace pwica {

std::size_t ProbeGeometry::nearest_element(double x) const
{
	auto it = std::lower_bound(element_x.begin(), element_x.end(), x);
	if (it == element_x.begin())
		return 0;
	if (it == element_x.end())
		return element_x.size() - 1;
	std::size_t hi = static_cast<std::size_t>(it - element_x.begin());
	std::size_t lo = hi - 1;
	return (x - element_x[lo] <= element_x[hi] - x) ? lo : hi;
}

ProbeGeometry ProbeGeometry::linear(std::size_t n_elements, double pitch)
{
	require(n_elements >= 2, "probe needs at least 2 elements");
	require(pitch > 0.0, "probe pitch must be positive");
	ProbeGeometry p;
	p.pitch = pitch;
	p.element_x.resize(n_elements);
	const double half = 0.5 * static_cast<double>(n_elements - 1);
	for (std::size_t i = 0; i < n_elements; ++i)
		p.element_x[i] = (static_cast<double>(i) - half) * pitch;
	return p;
}

PlaneWaveAcquisition PlaneWaveAcquisition::zeros(std::vector<double> angles,
		std::size_t n_elements, std::size_t n_samples, double sampling_rate,
		double sound_speed, double start_time)
{
	PlaneWaveAcquisition acq;
	acq.angles = std::move(angles);
	acq.n_elements = n_elements;
	acq.n_samples = n_samples;
	acq.samples.assign(acq.angles.size() * n_elements * n_samples, 0.0);
	acq.sampling_rate = sampling_rate;
	acq.sound_speed = sound_speed;
	acq.start_time = start_time;
	return acq;
}

ImageGrid ImageGrid::uniform(double x0, double x1, double dx, double z0, double z1, double dz)
{
	require(dx > 0.0 && dz > 0.0, "grid spacing must be positive");
	require(x1 >= x0 && z1 >= z0, "grid bounds must be increasing");
	ImageGrid g;
	const auto nx = static_cast<std::size_t>(std::floor((x1 - x0) / dx + 1e-9)) + 1;
	const auto nz = static_cast<std::size_t>(std::floor((z1 - z0) / dz + 1e-9)) + 1;
	g.x.resize(nx);
	g.z.resize(nz);
	for (std::size_t i = 0; i < nx; ++i)
		g.x[i] = x0 + static_cast<double>(i) * dx;
	for (std::size_t i = 0; i < nz; ++i)
		g.z[i] = z0 + static_cast<double>(i) * dz;
	return g;
}

ApodizationProfile ApodizationProfile::canonicalized() const
{
	require(!weights.empty(), "empty apodization profile");
	double l1 = 0.0;
	double max_abs = 0.0;
	std::size_t arg_max = 0;
	for (std::size_t i = 0; i < weights.size(); ++i) {
		const double a = std::abs(weights[i]);
		require(std::isfinite(weights[i]), "apodization weight is not finite");
		l1 += a;
		if (a > max_abs) {
			max_abs = a;
			arg_max = i;
		}
	}
	require(l1 > 0.0, "apodization profile is identically zero");

	const std::size_t n = weights.size();
	const double center = weights[(n - 1) / 2] + weights[n / 2];
	double sign = 1.0;
	if (std::abs(center) > 1e-6 * max_abs)
		sign = center < 0.0 ? -1.0 : 1.0;
	else
		sign = weights[arg_max] < 0.0 ? -1.0 : 1.0;

	ApodizationProfile out;
	out.normalization = Normalization::l1;
	out.weights.resize(n);
	for (std::size_t i = 0; i < n; ++i)
		out.weights[i] = sign * weights[i] / l1;
	return out;
}

namespace {

bool uniform_axis(const std::vector<double>& v)
{
	if (v.size() < 2)
		return true;
	const double step = v[1] - v[0];
	if (!(step > 0.0))
		return false;
	const double scale = std::max(std::abs(v.front()), std::abs(v.back())) + step;
	for (std::size_t i = 1; i < v.size(); ++i) {
		const double d = v[i] - v[i - 1];
		if (!(d > 0.0) || std::abs(d - step) > 1e-9 * scale)
			return false;
	}
	return true;
}

} // namespace

void validate(const ProbeGeometry& probe)
{
	const auto& ex = probe.element_x;
	if (ex.size() < 2)
		fail(ErrorCode::invalid_argument, "probe: need at least 2 elements");
	if (!(probe.pitch > 0.0))
		fail(ErrorCode::invalid_argument, "probe: pitch must be positive");
	for (std::size_t i = 1; i < ex.size(); ++i) {
		if (!(ex[i] > ex[i - 1])) {
			std::ostringstream os;
			os << "probe: element order violated at element " << i
			   << " (x[" << i - 1 << "]=" << ex[i - 1] << ", x[" << i << "]=" << ex[i] << ")";
			fail(ErrorCode::invalid_argument, os.str());
		}
	}
	for (std::size_t i = 0; i < ex.size(); ++i) {
		const double mirror = ex[ex.size() - 1 - i];
		if (std::abs(ex[i] + mirror) > 1e-9) {
			std::ostringstream os;
			os << "probe: elements not symmetric about 0 at element " << i;
			fail(ErrorCode::invalid_argument, os.str());
		}
	}
}

void validate(const PlaneWaveAcquisition& acq)
{
	if (acq.angles.empty())
		fail(ErrorCode::invalid_argument, "acquisition: no steering angles");
	if (!(acq.sampling_rate > 0.0) || !std::isfinite(acq.sampling_rate))
		fail(ErrorCode::invalid_argument, "acquisition: sampling_rate must be positive");
	if (!(acq.sound_speed > 0.0) || !std::isfinite(acq.sound_speed))
		fail(ErrorCode::invalid_argument, "acquisition: sound_speed must be positive");
	if (!std::isfinite(acq.start_time))
		fail(ErrorCode::invalid_argument, "acquisition: start_time must be finite");
	if (acq.n_samples == 0 || acq.n_elements == 0)
		fail(ErrorCode::invalid_argument, "acquisition: empty traces");
	if (acq.samples.size() != acq.angles.size() * acq.n_elements * acq.n_samples) {
		std::ostringstream os;
		os << "acquisition: trace storage holds " << acq.samples.size() << " samples, expected "
		   << acq.angles.size() << " x " << acq.n_elements << " x " << acq.n_samples;
		fail(ErrorCode::invalid_argument, os.str());
	}
	for (std::size_t a = 0; a < acq.angles.size(); ++a) {
		if (!std::isfinite(acq.angles[a]) || std::abs(acq.angles[a]) >= M_PI / 2) {
			std::ostringstream os;
			os << "acquisition: angle " << a << " out of range";
			fail(ErrorCode::invalid_argument, os.str());
		}
	}	for (std::size_t i = 0; i < acq.samples.size(); ++i) {
		if (!std::isfinite(acq.samples[i])) {
			const std::size_t per_angle = acq.n_elements * acq.n_samples;
			std::ostringstream os;
			os << "acquisition: non-finite sample (angle " << i / per_angle << ", element "
			   << (i % per_angle) / acq.n_samples << ", sample " << i % acq.n_samples << ")";
			fail(ErrorCode::invalid_argument, os.str());
		}
	}
}

void validate(const ImageGrid& grid)
{
	if (grid.x.empty() || grid.z.empty())
		fail(ErrorCode::invalid_argument, "grid: empty axis");
	if (!uniform_axis(grid.x))
		fail(ErrorCode::invalid_argument, "grid: x axis not uniform and strictly increasing");
	if (!uniform_axis(grid.z))
		fail(ErrorCode::invalid_argument, "grid: z axis not uniform and strictly increasing");
	if (!(grid.z.front() > 0.0))
		fail(ErrorCode::invalid_argument, "grid: depths must be positive");
}

const Dataset& validate(const Dataset& ds)
{
	validate(ds.probe);
	validate(ds.acquisition);
	validate(ds.grid);
	if (ds.acquisition.n_elements != ds.probe.size()) {
		std::ostringstream os;
		os << "dataset: acquisition has " << ds.acquisition.n_elements
		   << " channels but probe has " << ds.probe.size() << " elements";
		fail(ErrorCode::invalid_argument, os.str());
	}
	for (std::size_t i = 0; i < ds.cysts.size(); ++i) {
		const auto& c = ds.cysts[i];
		if (!(c.inner_radius > 0.0) || !(c.outer_max > c.outer_min) || c.outer_min < c.inner_radius) {
			std::ostringstream os;
			os << "dataset: cyst " << i << " has inconsistent evaluation radii";
			fail(ErrorCode::invalid_argument, os.str());
		}
	}
	return ds;
}

} // namespace pwica
