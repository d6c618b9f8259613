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
#include "pwica/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "pwica/error.hpp"
#include "pwica/geometry.hpp"

namespace pwica {

std::string to_string(PhantomLayout layout)
{
	switch (layout) {
	case PhantomLayout::point_grid: return "point_grid";
	case PhantomLayout::speckle: return "speckle";
	case PhantomLayout::anechoic_cyst_in_speckle: return "anechoic_cyst_in_speckle";
	case PhantomLayout::points_in_speckle: return "points_in_speckle";
	}
	return "unknown";
}

double PulseModel::sigma_t() const
{
	const double sigma_f = fractional_bandwidth * center_frequency / (2.0 * std::sqrt(2.0 * std::log(2.0)));
	return 1.0 / (2.0 * M_PI * sigma_f);
}

double PulseModel::operator()(double t) const
{
	const double s = sigma_t();
	return amplitude * std::exp(-0.5 * t * t / (s * s)) * std::cos(2.0 * M_PI * center_frequency * t);
}

void validate(const PulseModel& pulse)
{
	require(pulse.center_frequency > 0.0, "pulse: center frequency must be positive");
	require(pulse.fractional_bandwidth > 0.0 && pulse.fractional_bandwidth < 2.0,
			"pulse: fractional bandwidth must lie in (0, 2)");
	require(std::isfinite(pulse.amplitude), "pulse: amplitude must be finite");
}

namespace {

// Adds amplitude * p(t_k - tau) over the pulse support. The Gaussian and the
// carrier are advanced by recurrences so each sample costs a few multiplies.
void add_echo(std::span<double> trace, double tau, double amplitude, const PulseModel& pulse,
		double fs, double start_time)
{
	const double sigma = pulse.sigma_t();
	const double half = pulse.support();
	const double last = static_cast<double>(trace.size() - 1);
	const double k_lo = std::max(0.0, std::ceil((tau - half - start_time) * fs));
	const double k_hi = std::min(last, std::floor((tau + half - start_time) * fs));
	if (k_hi < k_lo)
		return;

	const double dt = 1.0 / fs;
	const double inv2s2 = 0.5 / (sigma * sigma);
	const double omega = 2.0 * M_PI * pulse.center_frequency;
	double t = start_time + k_lo * dt - tau;
	double g = std::exp(-t * t * inv2s2);
	double r = std::exp(-(2.0 * t * dt + dt * dt) * inv2s2);
	const double q = std::exp(-2.0 * dt * dt * inv2s2);
	std::complex<double> phase = std::polar(1.0, omega * t);
	const std::complex<double> step = std::polar(1.0, omega * dt);

	const double a = amplitude * pulse.amplitude;
	for (auto k = static_cast<std::size_t>(k_lo); k <= static_cast<std::size_t>(k_hi); ++k) {
		trace[k] += a * g * phase.real();
		g *= r;
		r *= q;
		phase *= step;
	}
}

} // namespace

PlaneWaveAcquisition synth_channel_data(const Phantom& phantom, const SimulationSetup& setup,
		SimulationReport* report)
{
	validate(setup.probe);
	validate(setup.pulse);
	require(!setup.angles.empty(), "simulate: no steering angles");
	require(setup.sampling_rate > 0.0, "simulate: sampling rate must be positive");
	require(setup.sound_speed > 0.0, "simulate: sound speed must be positive");
	require(setup.duration > 0.0, "simulate: duration must be positive");

	const auto n_samples = static_cast<std::size_t>(std::lround(setup.duration * setup.sampling_rate)) + 1;
	const std::size_t n = setup.probe.size();
	PlaneWaveAcquisition acq = PlaneWaveAcquisition::zeros(setup.angles, n, n_samples,
			setup.sampling_rate, setup.sound_speed, setup.start_time);

	const double t_first = setup.start_time + setup.pulse.support();
	const double t_last = setup.start_time + static_cast<double>(n_samples - 1) / setup.sampling_rate
			- setup.pulse.support();

	std::vector<Scatterer> kept;
	kept.reserve(phantom.scatterers.size());
	std::size_t dropped = 0;
	for (const auto& s : phantom.scatterers) {
		require(s.z > 0.0 && std::isfinite(s.x) && std::isfinite(s.amplitude),
				"simulate: scatterers need z > 0 and finite values");
		bool fits = true;
		for (double angle : setup.angles) {
			// receive distance is extremal at the array ends or the nearest element
			for (std::size_t e : {std::size_t{0}, n - 1, setup.probe.nearest_element(s.x)}) {
				const double tau = propagation_delay(s.x, s.z, angle, setup.probe.element_x[e],
						setup.sound_speed);
				if (tau < t_first || tau > t_last)
					fits = false;
			}
		}
		if (fits)
			kept.push_back(s);
		else
			++dropped;
	}
	if (report) {
		report->dropped += dropped;
		if (dropped > 0) {
			std::ostringstream os;
			os << dropped << " scatterer(s) outside the recorded time window were dropped";
			report->warnings.push_back(os.str());
		}
	}

	for (std::size_t a = 0; a < setup.angles.size(); ++a) {
		const double angle = setup.angles[a];
		for (std::size_t e = 0; e < n; ++e) {
			auto trace = acq.trace(a, e);
			const double xe = setup.probe.element_x[e];
			for (const auto& s : kept) {
				const double tau = propagation_delay(s.x, s.z, angle, xe, setup.sound_speed);
				add_echo(trace, tau, s.amplitude, setup.pulse, setup.sampling_rate, setup.start_time);
			}
		}
	}
	return acq;
}

Phantom make_point_grid(const PointGridParams& params)
{
	Phantom p;
	p.layout = PhantomLayout::point_grid;
	for (double z : params.z) {
		require(z > 0.0, "point grid: depths must be positive");
		for (double x : params.x)
			p.scatterers.push_back({x, z, params.amplitude});
	}
	return p;
}

Phantom make_speckle(const SpeckleParams& params, std::uint64_t seed)
{
	require(params.x_max > params.x_min && params.z_max > params.z_min, "speckle: empty region");
	require(params.z_min > 0.0, "speckle: region must lie at positive depth");
	require(params.density > 0.0, "speckle: density must be positive");
	const double area = (params.x_max - params.x_min) * (params.z_max - params.z_min);
	const auto count = static_cast<std::size_t>(std::lround(area * params.density));

	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> ux(params.x_min, params.x_max);
	std::uniform_real_distribution<double> uz(params.z_min, params.z_max);
	std::normal_distribution<double> amp(0.0, 1.0);
	Phantom p;
	p.layout = PhantomLayout::speckle;
	p.scatterers.reserve(count);
	for (std::size_t i = 0; i < count; ++i) {
		Scatterer s;
		s.x = ux(rng);
		s.z = uz(rng);
		s.amplitude = amp(rng);
		p.scatterers.push_back(s);
	}
	return p;
}

Phantom make_cyst_phantom(const SpeckleParams& params, const std::vector<CystSpec>& cysts,
		std::uint64_t seed)
{
	Phantom p = make_speckle(params, seed);
	p.layout = PhantomLayout::anechoic_cyst_in_speckle;
	std::erase_if(p.scatterers, [&](const Scatterer& s) {
		for (const auto& c : cysts) {
			const double dx = s.x - c.center.x;
			const double dz = s.z - c.center.z;
			if (dx * dx + dz * dz < c.radius * c.radius)
				return true;
		}
		return false;
	});
	return p;
}

Phantom make_points_in_speckle(const SpeckleParams& params, const PointGridParams& points,
		std::uint64_t seed)
{
	Phantom p = make_speckle(params, seed);
	p.layout = PhantomLayout::points_in_speckle;
	const Phantom wires = make_point_grid(points);
	p.scatterers.insert(p.scatterers.end(), wires.scatterers.begin(), wires.scatterers.end());
	return p;
}

PlaneWaveAcquisition add_channel_noise(const PlaneWaveAcquisition& acq,
		const std::vector<std::size_t>& channels, double snr_db, std::uint64_t seed)
{
	validate(acq);
	PlaneWaveAcquisition out = acq;
	if (snr_db == kNoNoise)
		return out;
	require(std::isfinite(snr_db), "noise: snr must be finite or +inf");
	for (std::size_t c : channels)
		require(c < acq.n_elements, "noise: channel index out of range");

	const double ratio = std::pow(10.0, snr_db / 10.0);
	for (std::size_t a = 0; a < acq.n_angles(); ++a) {
		for (std::size_t c : channels) {
			const auto clean = acq.trace(a, c);
			double power = 0.0;
			for (double v : clean)
				power += v * v;
			power /= static_cast<double>(clean.size());
			if (!(power > 0.0)) {
				std::ostringstream os;
				os << "noise: channel " << c << " at angle " << a << " has zero power";
				fail(ErrorCode::invalid_argument, os.str());
			}
			const double sigma = std::sqrt(power / ratio);
			std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
					static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c)};
			std::mt19937_64 rng(seq);
			std::normal_distribution<double> normal(0.0, sigma);
			auto noisy = out.trace(a, c);
			for (double& v : noisy)
				v += normal(rng);
		}
	}
	return out;
}

namespace {

std::vector<double> angle_span(std::size_t n_angles)
{
	require(n_angles >= 1, "simulate: need at least one angle");
	std::vector<double> angles(n_angles, 0.0);
	const double limit = 16.0 * M_PI / 180.0;
	if (n_angles == 1)
		return angles;
	for (std::size_t i = 0; i < n_angles; ++i)
		angles[i] = -limit + 2.0 * limit * static_cast<double>(i) / static_cast<double>(n_angles - 1);
	if (n_angles % 2 == 1)
		angles[n_angles / 2] = 0.0;
	return angles;
}

double required_duration(const Phantom& phantom, const SimulationSetup& setup)
{
	double t_max = 0.0;
	for (const auto& s : phantom.scatterers)
		for (double angle : setup.angles)
			for (std::size_t e : {std::size_t{0}, setup.probe.size() - 1})
				t_max = std::max(t_max, propagation_delay(s.x, s.z, angle,
						setup.probe.element_x[e], setup.sound_speed));
	return t_max + 2.0 * setup.pulse.support() - setup.start_time;
}

} // namespace

Dataset simulate_preset(const std::string& name, std::uint64_t seed, std::size_t n_angles,
		SimulationReport* report)
{
	SimulationSetup setup;
	setup.probe = ProbeGeometry::linear(128, 0.3e-3);
	setup.angles = angle_span(n_angles);

	Dataset ds;
	ds.name = "synthetic_" + name;
	ds.seed = seed;
	ds.probe = setup.probe;
	ds.center_frequency = setup.pulse.center_frequency;
	const double wavelength = setup.sound_speed / setup.pulse.center_frequency;
	const double dx = wavelength / 2.0;
	const double dz = 0.05e-3;

	Phantom phantom;
	if (name == "sr") {
		PointGridParams pts;
		pts.x = {-6e-3, -3e-3, 0.0, 3e-3, 6e-3};
		pts.z = {15e-3, 22.5e-3, 30e-3, 37.5e-3};
		phantom = make_point_grid(pts);
		for (double z : pts.z)
			for (double x : pts.x)
				ds.point_targets.push_back({x, z});
		ds.grid = ImageGrid::uniform(-10e-3, 10e-3, dx, 10e-3, 40e-3, dz);
	} else if (name == "sc") {
		SpeckleParams sp;
		sp.x_min = -22e-3;
		sp.x_max = 22e-3;
		sp.z_min = 4e-3;
		sp.z_max = 46e-3;
		const std::vector<CystSpec> cysts = {{{0.0, 20e-3}, 3e-3}, {{0.0, 32e-3}, 3e-3}};
		phantom = make_cyst_phantom(sp, cysts, seed);
		for (const auto& c : cysts) {
			CystRegion r;
			r.center = c.center;
			r.radius = c.radius;
			r.inner_radius = 0.8 * c.radius;
			r.outer_min = 1.2 * c.radius;
			r.outer_max = 1.8 * c.radius;
			ds.cysts.push_back(r);
		}
		ds.grid = ImageGrid::uniform(-10e-3, 10e-3, dx, 10e-3, 40e-3, dz);
	} else if (name == "er") {
		SpeckleParams sp;
		sp.x_min = -22e-3;
		sp.x_max = 22e-3;
		sp.z_min = 4e-3;
		sp.z_max = 46e-3;
		PointGridParams wires;
		wires.x = {-4e-3, 0.0, 4e-3};
		wires.z = {15e-3, 25e-3, 35e-3};
		wires.amplitude = 30.0;
		phantom = make_points_in_speckle(sp, wires, seed);
		for (double z : wires.z)
			for (double x : wires.x)
				ds.point_targets.push_back({x, z});
		ds.grid = ImageGrid::uniform(-10e-3, 10e-3, dx, 10e-3, 40e-3, dz);
	} else {
		fail(ErrorCode::invalid_argument, "simulate: unknown phantom '" + name + "' (expected sr, sc or er)");
	}
	ds.layout = to_string(phantom.layout);
	setup.duration = required_duration(phantom, setup);
	ds.acquisition = synth_channel_data(phantom, setup, report);
	return ds;
}

} // namespace pwica
