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

#include <cmath>
#include <functional>

#include "pwica/error.hpp"
#include "pwica/metrics.hpp"

using namespace pwica;

namespace {

RFImage sampled(const ImageGrid& grid, const std::function<double(double, double)>& f)
{
	RFImage img;
	img.grid = grid;
	img.values.resize(grid.size());
	for (std::size_t iz = 0; iz < grid.nz(); ++iz)
		for (std::size_t ix = 0; ix < grid.nx(); ++ix)
			img.at(iz, ix) = f(grid.x[ix], grid.z[iz]);
	return img;
}

/// Width where f drops to half its peak, by scanning a grid 100x denser.
double brute_force_fwhm(const std::function<double(double)>& f, double center, double half, double step)
{
	const double fine = step / 100.0;
	const double peak = f(center);
	double lo = center, hi = center;
	while (lo > center - half && f(lo) >= 0.5 * peak)
		lo -= fine;
	while (hi < center + half && f(hi) >= 0.5 * peak)
		hi += fine;
	return hi - lo;
}

} // namespace

TEST_CASE("envelope of a windowed tone")
{
	const double fz = 1.0 / 8.0;   // cycles per sample
	const auto grid = ImageGrid::uniform(0.0, 2e-4, 1e-4, 1e-3, 1e-3 + 511 * 1e-5, 1e-5);
	REQUIRE(grid.nz() == 512);
	const auto rf = sampled(grid, [&](double, double z) {
		const double k = std::round((z - 1e-3) / 1e-5);
		return (k >= 64 && k < 448) ? 2.5 * std::cos(2.0 * M_PI * fz * k) : 0.0;
	});
	const auto env = envelope(rf);
	for (std::size_t iz = 96; iz < 416; ++iz)
		for (std::size_t ix = 0; ix < grid.nx(); ++ix)
			CHECK(std::abs(env.at(iz, ix) - 2.5) < 0.02 * 2.5);

	RFImage zero = rf;
	std::fill(zero.values.begin(), zero.values.end(), 0.0);
	for (double v : envelope(zero).values)
		CHECK(v == 0.0);
}

TEST_CASE("log compression")
{
	RFImage env;
	env.grid = ImageGrid::uniform(0.0, 3e-4, 1e-4, 1e-3, 1e-3, 1e-4);
	env.values = {10.0, 1.0, 1e-4, 0.0};
	const auto b = bmode(env, 60.0);
	CHECK(b.values[0] == 0.0);
	CHECK(b.values[1] == doctest::Approx(-20.0).epsilon(1e-12));
	CHECK(b.values[2] == -60.0);
	CHECK(b.values[3] == -60.0);
	for (double v : b.values) {
		CHECK(v <= 0.0);
		CHECK(v >= -60.0);
	}
	const auto lin = bmode_to_linear(b);
	CHECK(lin.values[0] == 1.0);
	CHECK(lin.values[1] == doctest::Approx(0.1));
	CHECK_THROWS_AS(bmode(env, 0.0), Error);
	env.values.assign(4, 0.0);
	CHECK_THROWS_AS(bmode(env, 60.0), Error);
}

TEST_CASE("FWHM of a Gaussian")
{
	const double sigma = 0.2e-3;
	const auto grid = ImageGrid::uniform(-2e-3, 2e-3, 0.02e-3, 18e-3, 22e-3, 0.02e-3);
	const auto img = sampled(grid, [&](double x, double z) {
		return std::exp(-(x * x + (z - 20e-3) * (z - 20e-3)) / (2.0 * sigma * sigma));
	});
	const double expected_mm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma * 1e3;
	CHECK(expected_mm == doctest::Approx(0.471).epsilon(1e-3));
	CHECK(fwhm(img, {0.0, 20e-3}, 1.5e-3, Axis::lateral) == doctest::Approx(expected_mm).epsilon(0.01));
	CHECK(fwhm(img, {0.0, 20e-3}, 1.5e-3, Axis::axial) == doctest::Approx(expected_mm).epsilon(0.01));
	// on a dB scale the -6.02 dB level is the same crossing
	CHECK(fwhm(img, {0.0, 20e-3}, 1.5e-3, Axis::lateral, FwhmScale::db)
			== doctest::Approx(expected_mm).epsilon(0.01));

	const auto s = mean_fwhm(img, {{0.0, 20e-3}, {50e-3, 20e-3}}, 1.5e-3);
	CHECK(s.measured == 1);
	CHECK(s.lateral_mm == doctest::Approx(expected_mm).epsilon(0.01));
	CHECK_THROWS_AS(mean_fwhm(img, {{50e-3, 20e-3}}, 1.5e-3), Error);
}

TEST_CASE("FWHM of a triangle")
{
	const auto grid = ImageGrid::uniform(-2e-3, 2e-3, 0.1e-3, 19e-3, 21e-3, 0.1e-3);
	const auto img = sampled(grid, [&](double x, double z) {
		return std::max(0.0, 1.0 - std::abs(x) / 1e-3) * std::exp(-std::pow((z - 20e-3) / 0.2e-3, 2));
	});
	CHECK(fwhm(img, {0.0, 20e-3}, 1.5e-3, Axis::lateral) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("FWHM agrees with a dense scan within half a pixel")
{
	const double dx = 0.1e-3;
	const auto grid = ImageGrid::uniform(-3e-3, 3e-3, dx, 18e-3, 22e-3, 0.05e-3);
	for (double width : {0.3e-3, 0.45e-3, 0.8e-3}) {
		auto psf = [&](double x) {
			const double u = M_PI * (x - 0.013e-3) / width;
			return u == 0.0 ? 1.0 : std::abs(std::sin(u) / u);
		};
		const auto img = sampled(grid, [&](double x, double z) {
			return psf(x) * std::exp(-std::pow((z - 20e-3) / 0.3e-3, 2));
		});
		const double measured = fwhm(img, {0.0, 20e-3}, 1.5e-3, Axis::lateral) * 1e-3;
		const double reference = brute_force_fwhm(psf, 0.013e-3, 1.5e-3, dx);
		CHECK(std::abs(measured - reference) <= 0.5 * dx);
	}
}

TEST_CASE("crossing width errors")
{
	const std::vector<double> flat{1.0, 1.0, 1.0};
	CHECK_THROWS_AS(crossing_width(flat, 1, 0.5), Error);
	const std::vector<double> tri{0.0, 1.0, 0.0};
	CHECK(crossing_width(tri, 1, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("CNR arithmetic")
{
	const std::vector<double> in{-1.0, 1.0}, out{0.0, 2.0};
	CHECK(std::abs(cnr_from_values(in, out) - 0.0) < 1e-9);

	const std::vector<double> far{4.0, 6.0};
	CHECK(std::abs(cnr_from_values(in, far) - 20.0 * std::log10(5.0)) < 1e-9);

	// unequal spreads pool their variances
	const std::vector<double> wide{-3.0, 7.0};
	const double expected = 20.0 * std::log10(2.0 / std::sqrt(0.5 * (1.0 + 25.0)));
	CHECK(std::abs(cnr_from_values(in, wide) - expected) < 1e-9);

	const std::vector<double> c{3.0, 3.0};
	CHECK_THROWS_AS(cnr_from_values(c, c), Error);
	CHECK_THROWS_AS(cnr_from_values({}, c), Error);
}

TEST_CASE("CNR over disc and annulus masks")
{
	const auto grid = ImageGrid::uniform(-5e-3, 5e-3, 0.1e-3, 15e-3, 25e-3, 0.1e-3);
	const Point2 c{0.0, 20e-3};
	BModeImage img;
	img.grid = grid;
	img.values.resize(grid.size());
	for (std::size_t iz = 0; iz < grid.nz(); ++iz)
		for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
			const double r = std::hypot(grid.x[ix] - c.x, grid.z[iz] - c.z);
			const double sign = (ix + iz) % 2 ? 1.0 : -1.0;
			img.values[iz * grid.nx() + ix] = r < 3e-3 ? -40.0 + sign : -10.0 + 2.0 * sign;
		}
	const auto in = disc_mask(grid, c, 2.4e-3);
	const auto out = annulus_mask(grid, c, 3.6e-3, 5.4e-3);
	CHECK(in.role == RegionRole::inside);
	CHECK(out.role == RegionRole::outside);
	CHECK(in.count() > 0);
	CHECK(out.count() > 0);
	const double v = cnr(img, in, out);
	// means -40 and -10, spreads close to 1 and 2
	CHECK(v == doctest::Approx(20.0 * std::log10(30.0 / std::sqrt(2.5))).epsilon(0.01));

	CystRegion cyst{c, 3e-3, 2.4e-3, 3.6e-3, 5.4e-3};
	CHECK(mean_cnr(img, {cyst, cyst}) == doctest::Approx(v));
	CHECK_THROWS_AS(cnr(img, in, in), Error);
	CHECK_THROWS_AS(mean_cnr(img, {}), Error);
}

TEST_CASE("rmse")
{
	const std::vector<double> a{0.0, 0.0, 0.0, 0.0}, b{1.0, -1.0, 1.0, -1.0};
	CHECK(rmse(a, b) == 1.0);
	CHECK(rmse(a, a) == 0.0);
	CHECK_THROWS_AS(rmse(a, std::vector<double>{1.0}), Error);
}
