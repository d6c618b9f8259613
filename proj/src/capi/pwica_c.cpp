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
#include "pwica/pwica.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "pwica/beamform.hpp"
#include "pwica/error.hpp"
#include "pwica/io.hpp"
#include "pwica/metrics.hpp"
#include "pwica/simulate.hpp"
#include "pwica/windows.hpp"

struct pwica_dataset {
	pwica::Dataset data;
};

struct pwica_image {
	std::optional<pwica::RFImage> rf;
	pwica::BModeImage bmode;
};

struct pwica_profile {
	pwica::ApodizationProfile profile;
	std::optional<pwica::IcaResult> ica;
	std::size_t estimation_angle = 0;
};

namespace {

thread_local std::string last_error;

constexpr double kFwhmHalfWindow = 1.5e-3;

pwica_status to_status(pwica::ErrorCode code)
{
	return static_cast<pwica_status>(static_cast<int>(code));
}

template <class F>
pwica_status guarded(F&& body)
{
	try {
		body();
		last_error.clear();
		return PWICA_OK;
	} catch (const pwica::Error& e) {
		last_error = e.what();
		return to_status(e.code());
	} catch (const std::bad_alloc&) {
		last_error = "out of memory";
		return PWICA_INTERNAL;
	} catch (const std::exception& e) {
		last_error = e.what();
		return PWICA_INTERNAL;
	}
}

void need(const void* p, const char* what)
{
	if (!p)
		pwica::fail(pwica::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

template <class T>
void copy_out(const std::vector<T>& v, T* out, std::size_t capacity, std::size_t* count)
{
	if (count)
		*count = v.size();
	if (!out)
		return;
	if (capacity < v.size())
		pwica::fail(pwica::ErrorCode::invalid_argument, "output buffer holds " + std::to_string(capacity)
				+ " values, " + std::to_string(v.size()) + " needed");
	std::copy(v.begin(), v.end(), out);
}

pwica::BeamformConfig beamform_config(const pwica_beamform_options& o)
{
	pwica::BeamformConfig c;
	c.f_number = o.f_number;
	c.window = pwica::WindowSpec::parse(std::string(o.window, strnlen(o.window, sizeof o.window)));
	c.interpolation = o.linear_interpolation ? pwica::Interpolation::linear : pwica::Interpolation::nearest;
	switch (o.profile_mapping) {
	case PWICA_MAPPING_ELEMENT: c.profile_mapping = pwica::ProfileMapping::element; break;
	case PWICA_MAPPING_RESAMPLE: c.profile_mapping = pwica::ProfileMapping::resample; break;
	case PWICA_MAPPING_CENTERED: c.profile_mapping = pwica::ProfileMapping::centered; break;
	default: pwica::fail(pwica::ErrorCode::invalid_argument, "unknown profile mapping");
	}
	switch (o.observation) {
	case PWICA_OBSERVATION_FULL: c.observation_aperture = pwica::ObservationAperture::full; break;
	case PWICA_OBSERVATION_MASKED: c.observation_aperture = pwica::ObservationAperture::masked; break;
	default: pwica::fail(pwica::ErrorCode::invalid_argument, "unknown observation aperture");
	}
	c.ica_crop_depth = o.ica_crop_depth;
	c.compound_reuse_zero_weights = o.reuse_zero_angle_profile != 0;
	c.allow_nonconverged = o.allow_nonconverged != 0;
	pwica::validate(c);
	return c;
}

pwica::IcaConfig ica_config(const pwica_beamform_options& o)
{
	pwica::IcaConfig c;
	c.seed = o.ica_seed;
	c.max_iterations = o.ica_max_iterations;
	c.epsilon = o.ica_epsilon;
	c.a1 = o.ica_a1;
	switch (o.ica_contrast) {
	case PWICA_CONTRAST_LOGCOSH: c.contrast = pwica::Contrast::logcosh; break;
	case PWICA_CONTRAST_GAUSS: c.contrast = pwica::Contrast::gauss; break;
	default: pwica::fail(pwica::ErrorCode::invalid_argument, "unknown contrast");
	}
	pwica::validate(c);
	return c;
}

char* dup_string(const std::string& s)
{
	auto* out = static_cast<char*>(std::malloc(s.size() + 1));
	if (!out)
		throw std::bad_alloc();
	std::memcpy(out, s.c_str(), s.size() + 1);
	return out;
}

} // namespace

extern "C" {

const char* pwica_last_error(void)
{
	return last_error.c_str();
}

const char* pwica_status_name(pwica_status status)
{
	switch (status) {
	case PWICA_OK: return "ok";
	case PWICA_INVALID_ARGUMENT: return "invalid argument";
	case PWICA_IO: return "i/o error";
	case PWICA_FORMAT: return "format error";
	case PWICA_RANK_DEFICIENT: return "rank deficient";
	case PWICA_NOT_CONVERGED: return "not converged";
	case PWICA_INTERNAL: return "internal error";
	}
	return "unknown status";
}

const char* pwica_version(void)
{
	return "0.1.0";
}

void pwica_string_free(char* s)
{
	std::free(s);
}

pwica_status pwica_dataset_read_native(const char* dir, pwica_dataset** out)
{
	return guarded([&] {
		need(dir, "dir");
		need(out, "out");
		auto ds = std::make_unique<pwica_dataset>();
		ds->data = pwica::read_native(dir);
		*out = ds.release();
	});
}

pwica_status pwica_dataset_read_challenge(const char* rf_path, const char* scan_path,
		const char* phantom_path, pwica_dataset** out)
{
	return guarded([&] {
		need(rf_path, "rf_path");
		need(out, "out");
		pwica::ChallengeFiles files;
		files.rf = rf_path;
		if (scan_path)
			files.scan = scan_path;
		if (phantom_path)
			files.phantom = phantom_path;
		auto ds = std::make_unique<pwica_dataset>();
		ds->data = pwica::read_challenge_dataset(files);
		*out = ds.release();
	});
}

pwica_status pwica_dataset_write_native(const pwica_dataset* ds, const char* dir)
{
	return guarded([&] {
		need(ds, "dataset");
		need(dir, "dir");
		pwica::write_native(ds->data, dir);
	});
}

pwica_status pwica_dataset_simulate(const char* preset, uint64_t seed, size_t n_angles,
		pwica_dataset** out, size_t* dropped)
{
	return guarded([&] {
		need(preset, "preset");
		need(out, "out");
		pwica::SimulationReport report;
		auto ds = std::make_unique<pwica_dataset>();
		ds->data = pwica::simulate_preset(preset, seed, n_angles, &report);
		if (dropped)
			*dropped = report.dropped;
		*out = ds.release();
	});
}

pwica_status pwica_dataset_add_noise(const pwica_dataset* ds, const size_t* channels,
		size_t n_channels, double snr_db, uint64_t seed, pwica_dataset** out)
{
	return guarded([&] {
		need(ds, "dataset");
		need(out, "out");
		if (n_channels > 0)
			need(channels, "channels");
		std::vector<std::size_t> ch(channels, channels + n_channels);
		auto copy = std::make_unique<pwica_dataset>();
		copy->data = ds->data;
		copy->data.acquisition = pwica::add_channel_noise(ds->data.acquisition, ch, snr_db, seed);
		*out = copy.release();
	});
}

pwica_status pwica_dataset_get_info(const pwica_dataset* ds, pwica_dataset_info* info)
{
	return guarded([&] {
		need(ds, "dataset");
		need(info, "info");
		const auto& d = ds->data;
		info->n_angles = d.acquisition.n_angles();
		info->n_elements = d.acquisition.n_elements;
		info->n_samples = d.acquisition.n_samples;
		info->nx = d.grid.nx();
		info->nz = d.grid.nz();
		info->n_point_targets = d.point_targets.size();
		info->n_cysts = d.cysts.size();
		info->sampling_rate = d.acquisition.sampling_rate;
		info->sound_speed = d.acquisition.sound_speed;
		info->start_time = d.acquisition.start_time;
		info->pitch = d.probe.pitch;
		info->center_frequency = d.center_frequency;
		info->seed = d.seed;
	});
}

pwica_status pwica_dataset_angles(const pwica_dataset* ds, double* out, size_t capacity, size_t* count)
{
	return guarded([&] {
		need(ds, "dataset");
		copy_out(ds->data.acquisition.angles, out, capacity, count);
	});
}

const char* pwica_dataset_name(const pwica_dataset* ds)
{
	return ds ? ds->data.name.c_str() : "";
}

const char* pwica_dataset_layout(const pwica_dataset* ds)
{
	return ds ? ds->data.layout.c_str() : "";
}

pwica_status pwica_dataset_metadata_json(const pwica_dataset* ds, char** out)
{
	return guarded([&] {
		need(ds, "dataset");
		need(out, "out");
		*out = dup_string(pwica::metadata_json(ds->data).dump(2));
	});
}

pwica_status pwica_dataset_angle_subset(const pwica_dataset* ds, size_t count, size_t* out,
		size_t capacity, size_t* n_out)
{
	return guarded([&] {
		need(ds, "dataset");
		const auto idx = pwica::symmetric_angle_subset(ds->data.acquisition.angles, count);
		copy_out(idx, out, capacity, n_out);
	});
}

void pwica_dataset_free(pwica_dataset* ds)
{
	delete ds;
}

void pwica_beamform_options_init(pwica_beamform_options* o)
{
	if (!o)
		return;
	const pwica::BeamformConfig c;
	const pwica::IcaConfig ic;
	std::memset(o, 0, sizeof *o);
	o->f_number = c.f_number;
	const std::string w = c.window.to_string();
	std::strncpy(o->window, w.c_str(), sizeof o->window - 1);
	o->linear_interpolation = c.interpolation == pwica::Interpolation::linear;
	o->profile_mapping = c.profile_mapping == pwica::ProfileMapping::element ? PWICA_MAPPING_ELEMENT
			: c.profile_mapping == pwica::ProfileMapping::resample ? PWICA_MAPPING_RESAMPLE
			: PWICA_MAPPING_CENTERED;
	o->observation = c.observation_aperture == pwica::ObservationAperture::full
			? PWICA_OBSERVATION_FULL : PWICA_OBSERVATION_MASKED;
	o->ica_crop_depth = c.ica_crop_depth;
	o->reuse_zero_angle_profile = c.compound_reuse_zero_weights;
	o->allow_nonconverged = c.allow_nonconverged;
	o->ica_seed = ic.seed;
	o->ica_max_iterations = ic.max_iterations;
	o->ica_epsilon = ic.epsilon;
	o->ica_contrast = ic.contrast == pwica::Contrast::logcosh ? PWICA_CONTRAST_LOGCOSH : PWICA_CONTRAST_GAUSS;
	o->ica_a1 = ic.a1;
	o->dynamic_range = 60.0;
}

pwica_status pwica_beamform(const pwica_dataset* ds, pwica_method method,
		const size_t* angle_indices, size_t n_angles, const pwica_beamform_options* options,
		pwica_image** image, pwica_profile** profile)
{
	return guarded([&] {
		need(ds, "dataset");
		need(angle_indices, "angle_indices");
		need(options, "options");
		need(image, "image");
		pwica::Method m;
		switch (method) {
		case PWICA_METHOD_DAS: m = pwica::Method::das; break;
		case PWICA_METHOD_CF: m = pwica::Method::cf; break;
		case PWICA_METHOD_ICA: m = pwica::Method::ica; break;
		default: pwica::fail(pwica::ErrorCode::invalid_argument, "unknown beamforming method");
		}
		const auto config = beamform_config(*options);
		const auto ic = ica_config(*options);
		const std::vector<std::size_t> idx(angle_indices, angle_indices + n_angles);
		auto result = pwica::beamform(ds->data, m, idx, config, ic);

		auto img = std::make_unique<pwica_image>();
		img->bmode = pwica::bmode(pwica::envelope(result.image), options->dynamic_range);
		img->rf = std::move(result.image);
		std::unique_ptr<pwica_profile> prof;
		if (profile && result.ica) {
			prof = std::make_unique<pwica_profile>();
			prof->profile = result.ica->w_aperture;
			prof->estimation_angle = pwica::zero_angle_index(ds->data.acquisition.angles);
			prof->ica = std::move(result.ica);
		}
		*image = img.release();
		if (profile)
			*profile = prof.release();
	});
}

pwica_status pwica_image_get_info(const pwica_image* img, pwica_image_info* info)
{
	return guarded([&] {
		need(img, "image");
		need(info, "info");
		info->nx = img->bmode.grid.nx();
		info->nz = img->bmode.grid.nz();
		info->dynamic_range = img->bmode.dynamic_range;
		info->has_rf = img->rf.has_value();
	});
}

pwica_status pwica_image_bmode(const pwica_image* img, double* out, size_t capacity, size_t* count)
{
	return guarded([&] {
		need(img, "image");
		copy_out(img->bmode.values, out, capacity, count);
	});
}

pwica_status pwica_image_rf(const pwica_image* img, double* out, size_t capacity, size_t* count)
{
	return guarded([&] {
		need(img, "image");
		if (!img->rf)
			pwica::fail(pwica::ErrorCode::invalid_argument, "image carries no RF data");
		copy_out(img->rf->values, out, capacity, count);
	});
}

pwica_status pwica_image_axes(const pwica_image* img, double* x, double* z)
{
	return guarded([&] {
		need(img, "image");
		if (x)
			std::copy(img->bmode.grid.x.begin(), img->bmode.grid.x.end(), x);
		if (z)
			std::copy(img->bmode.grid.z.begin(), img->bmode.grid.z.end(), z);
	});
}

pwica_status pwica_image_write(const pwica_image* img, const char* path)
{
	return guarded([&] {
		need(img, "image");
		need(path, "path");
		pwica::write_image(img->bmode, path, pwica::image_format_for(path));
	});
}

pwica_status pwica_image_read_csv(const char* path, pwica_image** out)
{
	return guarded([&] {
		need(path, "path");
		need(out, "out");
		auto img = std::make_unique<pwica_image>();
		img->bmode = pwica::read_image_csv(path);
		*out = img.release();
	});
}

void pwica_image_free(pwica_image* img)
{
	delete img;
}

pwica_status pwica_image_metrics(const pwica_image* img, const pwica_dataset* ds, pwica_metrics* out)
{
	return guarded([&] {
		need(img, "image");
		need(ds, "dataset");
		need(out, "out");
		*out = pwica_metrics{};
		const pwica::RFImage env = img->rf ? pwica::envelope(*img->rf)
				: pwica::bmode_to_linear(img->bmode);
		if (!ds->data.point_targets.empty()) {
			const auto f = pwica::mean_fwhm(env, ds->data.point_targets, kFwhmHalfWindow);
			out->has_fwhm = 1;
			out->fwhm_axial_mm = f.axial_mm;
			out->fwhm_lateral_mm = f.lateral_mm;
			out->targets_measured = f.measured;
		}
		if (!ds->data.cysts.empty()) {
			out->has_cnr = 1;
			out->cnr_db = pwica::mean_cnr(img->bmode, ds->data.cysts);
		}
		if (!out->has_fwhm && !out->has_cnr)
			pwica::fail(pwica::ErrorCode::invalid_argument,
					"dataset defines neither point targets nor cyst regions");
	});
}

pwica_status pwica_image_rmse(const pwica_image* a, const pwica_image* b, double* out)
{
	return guarded([&] {
		need(a, "a");
		need(b, "b");
		need(out, "out");
		if (!(a->bmode.grid == b->bmode.grid))
			pwica::fail(pwica::ErrorCode::invalid_argument, "rmse: images lie on different grids");
		*out = pwica::rmse(a->bmode.values, b->bmode.values);
	});
}

pwica_status pwica_profile_estimate(const pwica_dataset* ds, const pwica_beamform_options* options,
		pwica_profile** out)
{
	return guarded([&] {
		need(ds, "dataset");
		need(options, "options");
		need(out, "out");
		const auto& d = ds->data;
		auto est = pwica::estimate_ica_profile(d.acquisition, d.grid, d.probe, ica_config(*options),
				beamform_config(*options));
		auto p = std::make_unique<pwica_profile>();
		p->profile = est.ica.w_aperture;
		p->estimation_angle = est.estimation_angle;
		p->ica = std::move(est.ica);
		*out = p.release();
	});
}

pwica_status pwica_profile_window(const char* window, size_t length, pwica_profile** out)
{
	return guarded([&] {
		need(window, "window");
		need(out, "out");
		auto p = std::make_unique<pwica_profile>();
		p->profile = pwica::make_window(pwica::WindowSpec::parse(window), length);
		*out = p.release();
	});
}

pwica_status pwica_profile_get_info(const pwica_profile* p, pwica_profile_info* info)
{
	return guarded([&] {
		need(p, "profile");
		need(info, "info");
		*info = pwica_profile_info{};
		info->length = p->profile.size();
		info->is_estimated = p->ica.has_value();
		if (p->ica) {
			info->converged = p->ica->converged;
			info->iterations_used = p->ica->iterations_used;
			info->seed = p->ica->seed;
			info->estimation_angle = p->estimation_angle;
		}
	});
}

pwica_status pwica_profile_weights(const pwica_profile* p, double* out, size_t capacity, size_t* count)
{
	return guarded([&] {
		need(p, "profile");
		copy_out(p->profile.weights, out, capacity, count);
	});
}

pwica_status pwica_profile_spectrum(const pwica_profile* p, size_t n_fft, pwica_spectrum_info* info,
		double* frequency, double* magnitude_db, size_t capacity)
{
	return guarded([&] {
		need(p, "profile");
		need(info, "info");
		const auto s = pwica::window_spectrum(p->profile, n_fft);
		info->n_bins = s.frequency.size();
		info->mainlobe_width = s.mainlobe_width;
		info->sidelobe_db = s.sidelobe_db;
		info->leakage = s.leakage;
		if (frequency)
			copy_out(s.frequency, frequency, capacity, nullptr);
		if (magnitude_db)
			copy_out(s.magnitude_db, magnitude_db, capacity, nullptr);
	});
}

void pwica_profile_free(pwica_profile* p)
{
	delete p;
}

} // extern "C"
