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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "pwica/beamform.hpp"
#include "pwica/error.hpp"
#include "pwica/geometry.hpp"
#include "pwica/metrics.hpp"
#include "pwica/simulate.hpp"

using namespace pwica;

namespace {

constexpr double kPitch = 0.3e-3;

SimulationSetup setup_for(std::vector<double> angles, double duration = 40e-6)
{
	SimulationSetup s;
	s.probe = ProbeGeometry::linear(128, kPitch);
	s.angles = std::move(angles);
	s.duration = duration;
	return s;
}

/// Cube with every active entry of element e equal to value(e, pixel).
DelayedCube synthetic_cube(const ImageGrid& grid, std::size_t n,
		const std::function<double(std::size_t, std::size_t)>& value)
{
	DelayedCube cube;
	cube.grid = grid;
	cube.n_elements = n;
	cube.values.assign(n * grid.size(), 0.0);
	cube.spans.assign(grid.size(), ApertureSpan{0, n - 1, 0, static_cast<long>(n) - 1});
	for (std::size_t e = 0; e < n; ++e)
		for (std::size_t p = 0; p < grid.size(); ++p)
			cube.values[e * grid.size() + p] = value(e, p);
	return cube;
}

std::pair<std::size_t, std::size_t> argmax_near(const RFImage& env, Point2 t, double half)
{
	std::size_t bz = 0, bx = 0;
	double best = -1.0;
	for (std::size_t iz = 0; iz < env.grid.nz(); ++iz)
		for (std::size_t ix = 0; ix < env.grid.nx(); ++ix) {
			if (std::abs(env.grid.x[ix] - t.x) > half || std::abs(env.grid.z[iz] - t.z) > half)
				continue;
			if (env.at(iz, ix) > best) {
				best = env.at(iz, ix);
				bz = iz;
				bx = ix;
			}
		}
	return {bz, bx};
}

} // namespace

TEST_CASE("zero channel data gives a zero cube and a zero image")
{
	const auto acq = PlaneWaveAcquisition::zeros({0.0}, 128, 500, 20e6, 1540.0);
	const auto grid = ImageGrid::uniform(-2e-3, 2e-3, 0.1e-3, 10e-3, 12e-3, 0.05e-3);
	const auto probe = ProbeGeometry::linear(128, kPitch);
	const auto cube = delayed_channel_cube(acq, 0, grid, probe, BeamformConfig{});
	CHECK(std::all_of(cube.values.begin(), cube.values.end(), [](double v) { return v == 0.0; }));
	const auto img = das(cube, WindowSpec{}, BeamformConfig{});
	CHECK(std::all_of(img.values.begin(), img.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("cube entries outside the aperture are exactly zero")
{
	const Phantom ph = make_point_grid({{0.0}, {20e-3}});
	const auto setup = setup_for({0.0});
	const auto acq = synth_channel_data(ph, setup);
	const auto grid = ImageGrid::uniform(-3e-3, 3e-3, 0.2e-3, 15e-3, 25e-3, 0.1e-3);
	const auto cube = delayed_channel_cube(acq, 0, grid, setup.probe, BeamformConfig{});
	for (std::size_t e = 0; e < 128; ++e)
		for (std::size_t iz = 0; iz < grid.nz(); ++iz)
			for (std::size_t ix = 0; ix < grid.nx(); ++ix)
				if (!cube.active(e, iz, ix))
					CHECK(cube.at(e, iz, ix) == 0.0);
}

TEST_CASE("single scatterer: every element sees the echo peak at the target pixel")
{
	const Point2 target{0.0, 20e-3};
	for (double deg : {-16.0, 0.0, 16.0}) {
		const auto setup = setup_for({deg * M_PI / 180.0});
		const auto acq = synth_channel_data(make_point_grid({{target.x}, {target.z}}), setup);
		const auto grid = ImageGrid::uniform(-1.5e-3, 1.5e-3, 0.05e-3, 18.5e-3, 21.5e-3, 0.0125e-3);
		BeamformConfig cfg;
		const auto cube = delayed_channel_cube(acq, 0, grid, setup.probe, cfg, false);
		const auto [tz, tx] = std::pair{std::size_t{120}, std::size_t{30}};
		REQUIRE(grid.z[tz] == doctest::Approx(target.z));
		REQUIRE(std::abs(grid.x[tx]) < 1e-12);

		// each element's entry at the target is its trace read at the hand-computed delay
		const double alpha = deg * M_PI / 180.0;
		for (std::size_t e = 0; e < 128; e += 9) {
			const double xe = setup.probe.element_x[e];
			const double d = target.z * std::cos(alpha) + target.x * std::sin(alpha)
					+ std::sqrt((target.x - xe) * (target.x - xe) + target.z * target.z);
			const double s = d / 1540.0 * acq.sampling_rate;
			const auto i0 = static_cast<std::size_t>(s);
			const auto tr = acq.trace(0, e);
			const double expected = tr[i0] + (s - static_cast<double>(i0)) * (tr[i0 + 1] - tr[i0]);
			CHECK(cube.at(e, tz, tx) == doctest::Approx(expected).epsilon(1e-9));
		}

		// and the coherent sum peaks within one pixel of the scatterer
		const auto env = envelope(das(cube, WindowSpec{WindowKind::boxcar, 0.0}, cfg));
		const auto [bz, bx] = argmax_near(env, target, 1.5e-3);
		CHECK(std::abs(static_cast<long>(bz) - static_cast<long>(tz)) <= 1);
		CHECK(std::abs(static_cast<long>(bx) - static_cast<long>(tx)) <= 1);
	}
}

TEST_CASE("identical channels: unit-sum weights reproduce the channel image")
{
	const auto grid = ImageGrid::uniform(-1e-3, 1e-3, 0.25e-3, 10e-3, 11e-3, 0.25e-3);
	std::mt19937_64 rng(3);
	std::normal_distribution<double> nd;
	std::vector<double> image(grid.size());
	for (auto& v : image)
		v = nd(rng);
	const auto cube = synthetic_cube(grid, 16, [&](std::size_t, std::size_t p) { return image[p]; });
	BeamformConfig cfg;
	for (const ProfileSource& src : {ProfileSource{WindowSpec{WindowKind::boxcar, 0.0}},
			ProfileSource{WindowSpec{}}, ProfileSource{WindowSpec{WindowKind::hann, 1.0}}}) {
		const auto img = das(cube, src, cfg);
		for (std::size_t p = 0; p < grid.size(); ++p)
			CHECK(img.values[p] == doctest::Approx(image[p]).epsilon(1e-12));
	}
	ApodizationProfile prof{std::vector<double>(16, 0.0)};
	for (std::size_t e = 0; e < 16; ++e)
		prof.weights[e] = 1.0 + 0.1 * static_cast<double>(e);
	for (auto mapping : {ProfileMapping::element, ProfileMapping::resample, ProfileMapping::centered}) {
		cfg.profile_mapping = mapping;
		const auto img = das(cube, prof, cfg);
		for (std::size_t p = 0; p < grid.size(); ++p)
			CHECK(img.values[p] == doctest::Approx(image[p]).epsilon(1e-12));
	}
}

TEST_CASE("aperture weights")
{
	const ApertureSpan mid{10, 14, 10, 14};
	const auto w = aperture_weights(WindowSpec{WindowKind::hann, 1.0}, mid, 32, true);
	REQUIRE(w.size() == 5);
	CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
	CHECK(w[0] == 0.0);
	CHECK(w[2] == doctest::Approx(0.5));

	// clipped span keeps the part of the window that lies on the array
	const ApertureSpan clip{0, 2, -2, 2};
	const auto c = aperture_weights(WindowSpec{WindowKind::hann, 1.0}, clip, 32, false);
	REQUIRE(c.size() == 3);
	CHECK(c[0] == doctest::Approx(1.0));
	CHECK(c[1] == doctest::Approx(0.5));
	CHECK(c[2] == doctest::Approx(0.0).epsilon(1e-15));

	ApodizationProfile prof{std::vector<double>(32)};
	std::iota(prof.weights.begin(), prof.weights.end(), 1.0);
	// element mapping: the weights of the active elements themselves
	const auto e = aperture_weights(prof, mid, 32, false, ProfileMapping::element);
	CHECK(e == std::vector<double>{11.0, 12.0, 13.0, 14.0, 15.0});
	// resample: the whole profile stretched over the aperture
	const auto r = aperture_weights(prof, mid, 32, false, ProfileMapping::resample);
	CHECK(r.front() == 1.0);
	CHECK(r.back() == 32.0);
	// centered: the middle run of the profile
	const auto m = aperture_weights(prof, mid, 32, false, ProfileMapping::centered);
	CHECK(m == std::vector<double>{14.5, 15.5, 16.5, 17.5, 18.5});

	ApodizationProfile wrong{std::vector<double>(31, 1.0)};
	CHECK_THROWS_AS(aperture_weights(wrong, mid, 32, true), Error);
}

TEST_CASE("resampling and centering helpers")
{
	const std::vector<double> w{0.0, 1.0, 2.0, 3.0};
	CHECK(resample_profile(w, 7) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
	CHECK(resample_profile(w, 4) == w);
	CHECK(center_profile(w, 4) == w);
	CHECK(center_profile(w, 2) == std::vector<double>{1.0, 2.0});
	CHECK(center_profile(w, 6) == std::vector<double>{0.0, 0.0, 1.0, 2.0, 3.0, 0.0});
	CHECK(parse_profile_mapping(to_string(ProfileMapping::centered)) == ProfileMapping::centered);
	CHECK_THROWS_AS(parse_profile_mapping("stretch"), Error);
}

TEST_CASE("point grid is imaged at the right place")
{
	const Dataset ds = simulate_preset("sr", 1, 1);
	BeamformConfig cfg;
	const auto cube = delayed_channel_cube(ds.acquisition, 0, ds.grid, ds.probe, cfg);
	const auto env = envelope(das(cube, cfg.window, cfg));
	for (const auto& t : ds.point_targets) {
		const auto [bz, bx] = argmax_near(env, t, 1e-3);
		CHECK(std::abs(ds.grid.z[bz] - t.z) <= ds.grid.dz() * 1.0000001);
		CHECK(std::abs(ds.grid.x[bx] - t.x) <= ds.grid.dx() * 1.0000001);
	}
}

TEST_CASE("central crop region")
{
	// 67-element aperture on 128 elements: centers 33..94
	const auto probe = ProbeGeometry::linear(128, kPitch);
	ImageGrid grid;
	grid.x = probe.element_x;
	grid.z = {10e-3, 20e-3};
	const auto r = central_crop_region(grid, probe, 1.75, 0.035);
	CHECK(r.first == 33);
	CHECK(r.last == 94);
	CHECK(static_cast<double>(r.size() - 1) * kPitch == doctest::Approx((128 - 67) * kPitch));

	// aperture as wide as the array: a single column
	const auto odd = ProbeGeometry::linear(127, kPitch);
	ImageGrid og;
	og.x = odd.element_x;
	og.z = {10e-3};
	const double z_full = 127 * kPitch * 1.75;
	const auto one = central_crop_region(og, odd, 1.75, z_full);
	CHECK(one.size() == 1);
	CHECK(one.first == 63);

	// one-element aperture: everything under the array
	const auto all = central_crop_region(grid, probe, 1e9, 0.035);
	CHECK(all.first == 0);
	CHECK(all.last == 127);

	try {
		central_crop_region(grid, probe, 0.5, 0.05);
		FAIL("expected an error");
	} catch (const Error& e) {
		CHECK(std::string(e.what()).find("f-number") != std::string::npos);
	}
}

TEST_CASE("observation matrix shape and mirror symmetry")
{
	const auto setup = setup_for({0.0});
	const auto acq = synth_channel_data(make_point_grid({{-2e-3, 2e-3}, {15e-3, 20e-3}}), setup);
	const auto grid = ImageGrid::uniform(-2.4e-3, 2.4e-3, 0.3e-3, 14e-3, 21e-3, 0.1e-3);
	BeamformConfig cfg;
	const auto cube = delayed_channel_cube(acq, 0, grid, setup.probe, cfg, false);
	ObservationCrop crop{0, grid.nx() - 1, 0, grid.nz() - 1};
	const auto obs = build_observation_matrix(cube, crop);
	CHECK(obs.rows() == 128);
	CHECK(obs.cols() == crop.width() * crop.depth());
	const double scale = obs.X.cwiseAbs().maxCoeff();
	const std::size_t w = crop.width();
	for (std::size_t e = 0; e < 64; ++e)
		for (std::size_t iz = 0; iz < crop.depth(); ++iz)
			for (std::size_t ix = 0; ix < w; ++ix) {
				const auto a = obs.X(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(iz * w + ix));
				const auto b = obs.X(static_cast<Eigen::Index>(127 - e),
						static_cast<Eigen::Index>(iz * w + (w - 1 - ix)));
				CHECK(std::abs(a - b) <= 1e-9 * scale);
			}
}

TEST_CASE("coherence factor")
{
	const auto grid = ImageGrid::uniform(0.0, 1e-3, 0.1e-3, 10e-3, 11e-3, 0.1e-3);
	const auto same = synthetic_cube(grid, 8, [](std::size_t, std::size_t p) { return 1.0 + p; });
	for (double v : coherence_factor_image(same).values)
		CHECK(v == doctest::Approx(1.0));

	const auto cancel = synthetic_cube(grid, 8, [](std::size_t e, std::size_t) { return e % 2 ? 1.0 : -1.0; });
	for (double v : coherence_factor_image(cancel).values)
		CHECK(v == doctest::Approx(0.0));

	// i.i.d. channels: E[CF] close to 1/n
	const std::size_t n = 16;
	const auto big = ImageGrid::uniform(0.0, 9.9e-3, 0.1e-3, 10e-3, 19.9e-3, 0.1e-3);
	std::mt19937_64 rng(5);
	std::normal_distribution<double> nd;
	const auto noise = synthetic_cube(big, n, [&](std::size_t, std::size_t) { return nd(rng); });
	const auto cf = coherence_factor_image(noise).values;
	const double mean = std::accumulate(cf.begin(), cf.end(), 0.0) / static_cast<double>(cf.size());
	double var = 0.0;
	for (double v : cf)
		var += (v - mean) * (v - mean);
	const double se = std::sqrt(var / static_cast<double>(cf.size() - 1) / static_cast<double>(cf.size()));
	CHECK(std::abs(mean - 1.0 / static_cast<double>(n)) < 3.0 * se);

	// CF weighting never increases magnitude
	const auto img = das(noise, WindowSpec{WindowKind::boxcar, 0.0}, BeamformConfig{});
	const auto weighted = cf_das(noise, BeamformConfig{});
	for (std::size_t p = 0; p < img.values.size(); ++p)
		CHECK(std::abs(weighted.values[p]) <= std::abs(img.values[p]) + 1e-15);
}

TEST_CASE("compounding")
{
	RFImage a;
	a.grid = ImageGrid::uniform(0.0, 1e-3, 0.5e-3, 1e-3, 2e-3, 0.5e-3);
	a.values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
	CHECK(compound({a}).values == a.values);
	CHECK(compound({a, a, a}).values == a.values);
	RFImage b = a;
	for (auto& v : b.values)
		v = -v;
	for (double v : compound({a, b}).values)
		CHECK(v == 0.0);
	RFImage other = a;
	other.grid.x[0] -= 1e-3;
	CHECK_THROWS_AS(compound({a, other}), Error);
	CHECK_THROWS_AS(compound({}), Error);
}

TEST_CASE("angle subsets are symmetric about zero")
{
	std::vector<double> angles(75);
	for (std::size_t i = 0; i < 75; ++i)
		angles[i] = (-16.0 + 32.0 * static_cast<double>(i) / 74.0) * M_PI / 180.0;
	CHECK(zero_angle_index(angles) == 37);
	CHECK(symmetric_angle_subset(angles, 1) == std::vector<std::size_t>{37});
	const auto eleven = symmetric_angle_subset(angles, 11);
	REQUIRE(eleven.size() == 11);
	for (std::size_t i = 0; i < 11; ++i)
		CHECK(angles[eleven[i]] == doctest::Approx(-angles[eleven[10 - i]]));
	CHECK(symmetric_angle_subset(angles, 75).size() == 75);
	CHECK_THROWS_AS(symmetric_angle_subset(angles, 4), Error);
	CHECK_THROWS_AS(symmetric_angle_subset(angles, 77), Error);
}

TEST_CASE("ICA beamforming is deterministic")
{
	const Dataset ds = simulate_preset("sr", 1, 1);
	BeamformConfig cfg;
	cfg.allow_nonconverged = true;
	IcaConfig ica;
	const auto a = beamform(ds, Method::ica, {0}, cfg, ica);
	const auto b = beamform(ds, Method::ica, {0}, cfg, ica);
	REQUIRE(a.ica.has_value());
	CHECK(a.ica->seed == 0);
	CHECK(a.image.values.size() == b.image.values.size());
	CHECK(std::memcmp(a.image.values.data(), b.image.values.data(),
			a.image.values.size() * sizeof(double)) == 0);

	// applying the estimated profile to the same cube again is bit identical too
	const auto cube = delayed_channel_cube(ds.acquisition, 0, ds.grid, ds.probe, cfg);
	const auto c = das(cube, a.ica->w_aperture, cfg);
	CHECK(std::memcmp(a.image.values.data(), c.values.data(), c.values.size() * sizeof(double)) == 0);
}

TEST_CASE("non-converged ICA is refused unless allowed")
{
	const Dataset ds = simulate_preset("sr", 1, 1);
	BeamformConfig cfg;
	IcaConfig ica;
	ica.max_iterations = 1;
	try {
		beamform(ds, Method::ica, {0}, cfg, ica);
		FAIL("expected a convergence error");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::not_converged);
	}
	cfg.allow_nonconverged = true;
	const auto out = beamform(ds, Method::ica, {0}, cfg, ica);
	REQUIRE(out.ica.has_value());
	CHECK_FALSE(out.ica->converged);
}

TEST_CASE("config validation")
{
	BeamformConfig cfg;
	cfg.f_number = 0.0;
	CHECK_THROWS_AS(validate(cfg), Error);
	CHECK(parse_method("cf") == Method::cf);
	CHECK(to_string(Method::ica) == "ica");
	CHECK_THROWS_AS(parse_method("mv"), Error);
}
