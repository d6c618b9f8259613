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
 * @file simulate.hpp Linear time-of-flight forward model for plane-wave
 * channel data, phantom generators and receive-channel noise injection.
 *
 *****************************************************************************/
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pwica/model.hpp"

namespace pwica {

struct Scatterer {
	double x = 0.0;
	double z = 0.0;
	double amplitude = 1.0;
};

enum class PhantomLayout { point_grid, speckle, anechoic_cyst_in_speckle, points_in_speckle };

std::string to_string(PhantomLayout layout);

struct Phantom {
	std::vector<Scatterer> scatterers;
	PhantomLayout layout = PhantomLayout::point_grid;
};

/// Gaussian-modulated sinusoid standing in for the two-way impulse response.
/// fractional_bandwidth is the -6 dB width of the amplitude spectrum over
/// the center frequency.
struct PulseModel {
	double center_frequency = 5.208e6;
	double fractional_bandwidth = 0.6;
	double amplitude = 1.0;

	double sigma_t() const;
	/// Half-length of the evaluated support [s].
	double support() const { return 4.0 * sigma_t(); }
	double operator()(double t) const;
};

void validate(const PulseModel& pulse);

struct SimulationSetup {
	ProbeGeometry probe;
	PulseModel pulse;
	std::vector<double> angles;       // [rad]
	double sampling_rate = 20.832e6;
	double sound_speed = 1540.0;
	double duration = 0.0;            // trace length [s]
	double start_time = 0.0;
};

struct SimulationReport {
	std::size_t dropped = 0;
	std::vector<std::string> warnings;
};

/// h_i(t) = sum over scatterers of amplitude * p(t - tau). Scatterers whose
/// echo does not fit the trace window for every angle and element are
/// dropped and reported.
PlaneWaveAcquisition synth_channel_data(const Phantom& phantom, const SimulationSetup& setup,
		SimulationReport* report = nullptr);

struct PointGridParams {
	std::vector<double> x;            // lateral positions [m]
	std::vector<double> z;            // depths [m]
	double amplitude = 1.0;
};

Phantom make_point_grid(const PointGridParams& params);

struct SpeckleParams {
	double x_min = -0.01, x_max = 0.01;
	double z_min = 0.01, z_max = 0.04;
	double density = 20e6;            // scatterers per m^2
};

/// Uniformly placed scatterers with standard normal amplitudes.
Phantom make_speckle(const SpeckleParams& params, std::uint64_t seed);

struct CystSpec {
	Point2 center;
	double radius = 0.0;
};

/// Speckle with every scatterer inside the cyst discs removed.
Phantom make_cyst_phantom(const SpeckleParams& params, const std::vector<CystSpec>& cysts,
		std::uint64_t seed);

/// Speckle plus strong point reflectors (wire targets).
Phantom make_points_in_speckle(const SpeckleParams& params, const PointGridParams& points,
		std::uint64_t seed);

/// Adds white Gaussian noise to the listed channels of every angle. Noise
/// variance is the channel's clean power over 10^(snr_db / 10); snr_db =
/// +inf returns the input unchanged. Channels not listed are bit-identical.
/// Each (angle, channel) draws from its own stream derived from `seed`.
PlaneWaveAcquisition add_channel_noise(const PlaneWaveAcquisition& acq,
		const std::vector<std::size_t>& channels, double snr_db, std::uint64_t seed);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Desk-scale datasets modeled on the challenge acquisitions: 128 elements,
/// 0.3 mm pitch, 5.208 MHz, 20.832 MHz sampling, 1540 m/s.
/// "sr": point targets on an anechoic background; "sc": anechoic cysts in
/// speckle; "er": wire targets in speckle. Angles span [-16, 16] degrees.
Dataset simulate_preset(const std::string& name, std::uint64_t seed, std::size_t n_angles,
		SimulationReport* report = nullptr);

} // namespace pwica
