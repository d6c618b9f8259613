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
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "pwica/pwica.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
	fs::path path;
	TempDir()
	{
		path = fs::temp_directory_path() / ("pwica_test_capi_" + std::to_string(::getpid()));
		fs::remove_all(path);
		fs::create_directories(path);
	}
	~TempDir() { fs::remove_all(path); }
};

pwica_dataset* simulate(const char* preset, size_t n_angles)
{
	pwica_dataset* ds = nullptr;
	REQUIRE(pwica_dataset_simulate(preset, 1, n_angles, &ds, nullptr) == PWICA_OK);
	return ds;
}

} // namespace

TEST_CASE("status names and version")
{
	CHECK(std::string(pwica_status_name(PWICA_OK)) == "ok");
	CHECK(std::string(pwica_status_name(PWICA_NOT_CONVERGED)) == "not converged");
	CHECK(std::strlen(pwica_version()) > 0);
}

TEST_CASE("argument errors leave a message and no handle")
{
	pwica_dataset* ds = reinterpret_cast<pwica_dataset*>(0x1);
	CHECK(pwica_dataset_simulate(nullptr, 1, 1, &ds, nullptr) == PWICA_INVALID_ARGUMENT);
	CHECK(ds == reinterpret_cast<pwica_dataset*>(0x1));
	CHECK(std::string(pwica_last_error()).find("preset") != std::string::npos);

	CHECK(pwica_dataset_simulate("zz", 1, 1, &ds, nullptr) == PWICA_INVALID_ARGUMENT);
	CHECK(std::string(pwica_last_error()).find("zz") != std::string::npos);

	CHECK(pwica_dataset_read_native("/nonexistent/pwica", &ds) == PWICA_IO);
	pwica_dataset_free(nullptr);
	pwica_image_free(nullptr);
	pwica_profile_free(nullptr);
}

TEST_CASE("dataset handle")
{
	pwica_dataset* ds = simulate("sr", 11);
	pwica_dataset_info info;
	REQUIRE(pwica_dataset_get_info(ds, &info) == PWICA_OK);
	CHECK(info.n_angles == 11);
	CHECK(info.n_elements == 128);
	CHECK(info.n_point_targets == 20);
	CHECK(info.n_cysts == 0);
	CHECK(info.pitch == doctest::Approx(0.3e-3));
	CHECK(std::string(pwica_dataset_name(ds)) == "synthetic_sr");
	CHECK(std::string(pwica_dataset_layout(ds)) == "point_grid");

	size_t n = 0;
	CHECK(pwica_dataset_angles(ds, nullptr, 0, &n) == PWICA_OK);
	CHECK(n == 11);
	std::vector<double> angles(n);
	CHECK(pwica_dataset_angles(ds, angles.data(), 3, &n) == PWICA_INVALID_ARGUMENT);
	CHECK(pwica_dataset_angles(ds, angles.data(), angles.size(), &n) == PWICA_OK);
	CHECK(angles[5] == 0.0);

	std::vector<size_t> idx(3);
	CHECK(pwica_dataset_angle_subset(ds, 3, idx.data(), idx.size(), &n) == PWICA_OK);
	CHECK(n == 3);
	CHECK(angles[idx[0]] == doctest::Approx(-angles[idx[2]]));
	CHECK(pwica_dataset_angle_subset(ds, 4, nullptr, 0, &n) == PWICA_INVALID_ARGUMENT);

	char* meta = nullptr;
	REQUIRE(pwica_dataset_metadata_json(ds, &meta) == PWICA_OK);
	CHECK(std::string(meta).find("\"point_targets\"") != std::string::npos);
	pwica_string_free(meta);
	pwica_dataset_free(ds);
}

TEST_CASE("native round trip through the C API")
{
	TempDir tmp;
	pwica_dataset* ds = simulate("sr", 1);
	const std::string dir = (tmp.path / "sr").string();
	REQUIRE(pwica_dataset_write_native(ds, dir.c_str()) == PWICA_OK);
	pwica_dataset* back = nullptr;
	REQUIRE(pwica_dataset_read_native(dir.c_str(), &back) == PWICA_OK);
	pwica_dataset_info a, b;
	pwica_dataset_get_info(ds, &a);
	pwica_dataset_get_info(back, &b);
	CHECK(a.n_samples == b.n_samples);
	CHECK(a.seed == b.seed);
	pwica_dataset_free(back);
	pwica_dataset_free(ds);

	pwica_dataset* none = nullptr;
	CHECK(pwica_dataset_read_challenge((tmp.path / "missing.hdf5").c_str(), nullptr, nullptr, &none)
			== PWICA_IO);
	CHECK(none == nullptr);
}

TEST_CASE("beamforming, metrics and images")
{
	TempDir tmp;
	pwica_dataset* ds = simulate("sr", 1);
	pwica_beamform_options o;
	pwica_beamform_options_init(&o);
	CHECK(o.f_number == 1.75);
	CHECK(std::string(o.window) == "tukey:0.25");
	CHECK(o.ica_max_iterations == 100);
	CHECK(o.ica_epsilon == 1e-6);

	const size_t idx[] = {0};
	pwica_image* das = nullptr;
	pwica_profile* none = nullptr;
	REQUIRE(pwica_beamform(ds, PWICA_METHOD_DAS, idx, 1, &o, &das, &none) == PWICA_OK);
	CHECK(none == nullptr);

	pwica_image_info info;
	REQUIRE(pwica_image_get_info(das, &info) == PWICA_OK);
	CHECK(info.has_rf == 1);
	CHECK(info.dynamic_range == 60.0);
	std::vector<double> bm(info.nx * info.nz), x(info.nx), z(info.nz);
	size_t n = 0;
	REQUIRE(pwica_image_bmode(das, bm.data(), bm.size(), &n) == PWICA_OK);
	CHECK(*std::max_element(bm.begin(), bm.end()) == 0.0);
	CHECK(*std::min_element(bm.begin(), bm.end()) >= -60.0);
	REQUIRE(pwica_image_axes(das, x.data(), z.data()) == PWICA_OK);
	CHECK(x.front() == doctest::Approx(-10e-3));

	pwica_metrics m;
	REQUIRE(pwica_image_metrics(das, ds, &m) == PWICA_OK);
	CHECK(m.has_fwhm == 1);
	CHECK(m.has_cnr == 0);
	CHECK(m.targets_measured == 20);
	CHECK(m.fwhm_lateral_mm > 0.3);
	CHECK(m.fwhm_lateral_mm < 1.5);

	pwica_image* ica = nullptr;
	pwica_profile* prof = nullptr;
	o.allow_nonconverged = 1;
	REQUIRE(pwica_beamform(ds, PWICA_METHOD_ICA, idx, 1, &o, &ica, &prof) == PWICA_OK);
	REQUIRE(prof != nullptr);
	pwica_profile_info pi;
	REQUIRE(pwica_profile_get_info(prof, &pi) == PWICA_OK);
	CHECK(pi.length == 128);
	CHECK(pi.is_estimated == 1);
	CHECK(pi.seed == 0);
	std::vector<double> w(pi.length);
	REQUIRE(pwica_profile_weights(prof, w.data(), w.size(), &n) == PWICA_OK);
	double l1 = 0.0;
	for (double v : w)
		l1 += std::abs(v);
	CHECK(l1 == doctest::Approx(1.0));

	pwica_spectrum_info si;
	REQUIRE(pwica_profile_spectrum(prof, 1024, &si, nullptr, nullptr, 0) == PWICA_OK);
	CHECK(si.n_bins == 513);
	std::vector<double> f(si.n_bins), mag(si.n_bins);
	REQUIRE(pwica_profile_spectrum(prof, 1024, &si, f.data(), mag.data(), f.size()) == PWICA_OK);
	CHECK(*std::max_element(mag.begin(), mag.end()) == 0.0);

	pwica_profile* win = nullptr;
	REQUIRE(pwica_profile_window("hann", 64, &win) == PWICA_OK);
	REQUIRE(pwica_profile_spectrum(win, 4096, &si, nullptr, nullptr, 0) == PWICA_OK);
	CHECK(si.sidelobe_db == doctest::Approx(-31.5).epsilon(0.01));
	CHECK(pwica_profile_window("kaiser", 64, &win) == PWICA_INVALID_ARGUMENT);

	double e = -1.0;
	REQUIRE(pwica_image_rmse(das, das, &e) == PWICA_OK);
	CHECK(e == 0.0);

	const std::string csv = (tmp.path / "img.csv").string();
	REQUIRE(pwica_image_write(das, csv.c_str()) == PWICA_OK);
	REQUIRE(pwica_image_write(das, (tmp.path / "img.png").c_str()) == PWICA_OK);
	CHECK(pwica_image_write(das, (tmp.path / "img.tif").c_str()) == PWICA_INVALID_ARGUMENT);
	pwica_image* back = nullptr;
	REQUIRE(pwica_image_read_csv(csv.c_str(), &back) == PWICA_OK);
	REQUIRE(pwica_image_get_info(back, &info) == PWICA_OK);
	CHECK(info.has_rf == 0);
	CHECK(pwica_image_rf(back, nullptr, 0, &n) == PWICA_INVALID_ARGUMENT);
	pwica_metrics m2;
	REQUIRE(pwica_image_metrics(back, ds, &m2) == PWICA_OK);
	CHECK(m2.fwhm_lateral_mm == doctest::Approx(m.fwhm_lateral_mm).epsilon(0.01));

	pwica_image_free(back);
	pwica_profile_free(win);
	pwica_profile_free(prof);
	pwica_image_free(ica);
	pwica_image_free(das);
	pwica_dataset_free(ds);
}

TEST_CASE("non-convergence surfaces as a status")
{
	pwica_dataset* ds = simulate("sr", 1);
	pwica_beamform_options o;
	pwica_beamform_options_init(&o);
	o.ica_max_iterations = 1;
	const size_t idx[] = {0};
	pwica_image* img = nullptr;
	CHECK(pwica_beamform(ds, PWICA_METHOD_ICA, idx, 1, &o, &img, nullptr) == PWICA_NOT_CONVERGED);
	CHECK(img == nullptr);
	CHECK(std::string(pwica_last_error()).find("converge") != std::string::npos);
	pwica_dataset_free(ds);
}

TEST_CASE("noise injection")
{
	pwica_dataset* ds = simulate("sr", 1);
	pwica_dataset* noisy = nullptr;
	const size_t ch[] = {63};
	REQUIRE(pwica_dataset_add_noise(ds, ch, 1, -20.0, 1, &noisy) == PWICA_OK);
	pwica_beamform_options o;
	pwica_beamform_options_init(&o);
	const size_t idx[] = {0};
	pwica_image *a = nullptr, *b = nullptr;
	REQUIRE(pwica_beamform(ds, PWICA_METHOD_DAS, idx, 1, &o, &a, nullptr) == PWICA_OK);
	REQUIRE(pwica_beamform(noisy, PWICA_METHOD_DAS, idx, 1, &o, &b, nullptr) == PWICA_OK);
	double e = 0.0;
	REQUIRE(pwica_image_rmse(a, b, &e) == PWICA_OK);
	CHECK(e > 0.0);
	const size_t bad[] = {500};
	pwica_dataset* x = nullptr;
	CHECK(pwica_dataset_add_noise(ds, bad, 1, -20.0, 1, &x) == PWICA_INVALID_ARGUMENT);
	pwica_image_free(a);
	pwica_image_free(b);
	pwica_dataset_free(noisy);
	pwica_dataset_free(ds);
}
